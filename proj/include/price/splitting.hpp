#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "price/grid.hpp"

namespace price {

enum class StrategyKind {
    largest_first,
    random_sequential,
    smallest_last,
    independent_set,
    connected_sequential,
    saturation_largest_first,
    avg_shuffled,
    avg_unshuffled,
};

enum class StrategyFamily { graph, average };

struct SplitStrategy {
    StrategyKind kind = StrategyKind::largest_first;
    std::optional<int> requested_n;  // required for avg_* kinds, ignored by graph kinds
};

bool is_graph_strategy(StrategyKind kind);
StrategyFamily family_of(StrategyKind kind);
const std::string& strategy_name(StrategyKind kind);
StrategyKind parse_strategy_kind(const std::string& name);

// File/report label: graph kinds use the plain name, avg kinds append _n<N>.
std::string strategy_label(const SplitStrategy& s);

// Disjoint nonempty classes covering patch ids exactly once; class members are
// sorted ascending. For graph strategies the classes are the color classes of
// a proper coloring.
struct Partition {
    SplitStrategy strategy;
    std::vector<std::vector<int>> classes;

    int n() const { return static_cast<int>(classes.size()); }

    // id -> class index; throws if the classes are not a partition of 0..n-1.
    std::vector<int> class_of(int n_vertices) const;
};

// Greedy sequential coloring in the strategy's vertex order; ties always break
// by lowest vertex id, so every strategy except random_sequential is
// seed-independent.
Partition greedy_color(const AdjacencyGraph& g, const SplitStrategy& strategy,
                       std::uint64_t seed);

// Canonical order (or a seeded shuffle) chunked into n classes whose sizes
// differ by at most one; the first |ps| mod n classes get the extra element.
Partition average_split(const PatchSet& ps, int n, bool shuffled, std::uint64_t seed);

// Edges whose endpoints share a class; empty means the partition is proper.
std::vector<std::pair<int, int>> validate_partition(const AdjacencyGraph& g,
                                                    const Partition& part);

// Partition file: `patch_id,class_id` per line with a `# strategy=...` header.
void write_partition(std::ostream& out, const Partition& part);
Partition read_partition(std::istream& in, const std::string& source_name);

}  // namespace price
