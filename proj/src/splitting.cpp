#include "price/splitting.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <deque>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <tuple>

#include "price/errors.hpp"
#include "price/rng.hpp"

namespace price {

namespace {

const std::array<std::string, 8> kStrategyNames = {
    "largest_first",        "random_sequential",    "smallest_last",
    "independent_set",      "connected_sequential", "saturation_largest_first",
    "avg_shuffled",         "avg_unshuffled",
};

// Greedy sequential assignment: visit vertices in `order`, give each the
// smallest color absent among already-colored neighbors.
std::vector<int> greedy_assign(const AdjacencyGraph& g, const std::vector<int>& order) {
    std::vector<int> color(g.n_vertices, -1);
    std::vector<int> used_at(g.n_vertices, -1);  // color -> visit stamp
    int stamp = 0;
    for (int v : order) {
        for (int u : g.adjacency[v]) {
            if (color[u] >= 0) used_at[color[u]] = stamp;
        }
        int c = 0;
        while (used_at[c] == stamp) ++c;
        color[v] = c;
        ++stamp;
    }
    return color;
}

std::vector<int> order_largest_first(const AdjacencyGraph& g) {
    std::vector<int> order(g.n_vertices);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&g](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });
    return order;
}

std::vector<int> order_random(const AdjacencyGraph& g, std::uint64_t seed) {
    std::vector<int> order(g.n_vertices);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);
    return order;
}

// Matula-Beck: repeatedly delete the minimum-degree vertex (ties by lowest
// id); visit in reverse deletion order.
std::vector<int> order_smallest_last(const AdjacencyGraph& g) {
    std::vector<int> deg(g.n_vertices);
    std::set<std::pair<int, int>> queue;  // (degree, id)
    for (int v = 0; v < g.n_vertices; ++v) {
        deg[v] = g.degree(v);
        queue.emplace(deg[v], v);
    }
    std::vector<char> removed(g.n_vertices, 0);
    std::vector<int> order(g.n_vertices);
    for (int pos = g.n_vertices - 1; pos >= 0; --pos) {
        const auto [d, v] = *queue.begin();
        queue.erase(queue.begin());
        removed[v] = 1;
        order[pos] = v;
        for (int u : g.adjacency[v]) {
            if (removed[u]) continue;
            queue.erase({deg[u], u});
            queue.emplace(--deg[u], u);
        }
    }
    return order;
}

// Breadth-first order from the lowest-id vertex of each component; neighbors
// expand in ascending id.
std::vector<int> order_connected_sequential(const AdjacencyGraph& g) {
    std::vector<int> order;
    order.reserve(g.n_vertices);
    std::vector<char> visited(g.n_vertices, 0);
    std::deque<int> queue;
    for (int root = 0; root < g.n_vertices; ++root) {
        if (visited[root]) continue;
        visited[root] = 1;
        queue.push_back(root);
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (int u : g.adjacency[v]) {
                if (!visited[u]) {
                    visited[u] = 1;
                    queue.push_back(u);
                }
            }
        }
    }
    return order;
}

// DSATUR: color next the uncolored vertex with the most distinct neighbor
// colors, ties by degree, then lowest id.
std::vector<int> color_dsatur(const AdjacencyGraph& g) {
    const int n = g.n_vertices;
    std::vector<int> color(n, -1);
    std::vector<int> sat(n, 0);
    std::vector<std::vector<std::uint64_t>> seen(n);  // neighbor-color bitsets

    auto has_color = [&](int v, int c) {
        const int word = c >> 6;
        return word < static_cast<int>(seen[v].size()) &&
               (seen[v][word] >> (c & 63)) & 1u;
    };
    auto mark_color = [&](int v, int c) {
        const int word = c >> 6;
        if (word >= static_cast<int>(seen[v].size())) seen[v].resize(word + 1, 0);
        seen[v][word] |= std::uint64_t{1} << (c & 63);
    };

    std::set<std::tuple<int, int, int>> queue;  // (-saturation, -degree, id)
    for (int v = 0; v < n; ++v) queue.emplace(0, -g.degree(v), v);

    for (int step = 0; step < n; ++step) {
        const auto [neg_sat, neg_deg, v] = *queue.begin();
        queue.erase(queue.begin());

        int c = 0;
        while (has_color(v, c)) ++c;
        color[v] = c;

        for (int u : g.adjacency[v]) {
            if (color[u] >= 0 || has_color(u, c)) continue;
            queue.erase({-sat[u], -g.degree(u), u});
            mark_color(u, c);
            queue.emplace(-(++sat[u]), -g.degree(u), u);
        }
    }
    return color;
}

// Repeatedly extract a maximal independent set from the uncolored subgraph,
// coloring each extracted set with the next color. One set grows greedily:
// take the minimum-degree vertex of the unchosen subgraph (ties by lowest
// id), then drop it and its neighborhood from consideration.
std::vector<int> color_independent_sets(const AdjacencyGraph& g) {
    const int n = g.n_vertices;
    std::vector<int> color(n, -1);
    int colored = 0;
    int next_color = 0;

    std::vector<int> deg(n);
    std::vector<char> unchosen(n, 0);
    while (colored < n) {
        for (int v = 0; v < n; ++v) {
            unchosen[v] = (color[v] < 0);
            deg[v] = 0;
        }
        std::set<std::pair<int, int>> queue;  // (degree, id)
        for (int v = 0; v < n; ++v) {
            if (!unchosen[v]) continue;
            for (int u : g.adjacency[v]) {
                if (unchosen[u]) ++deg[v];
            }
        }
        for (int v = 0; v < n; ++v) {
            if (unchosen[v]) queue.emplace(deg[v], v);
        }

        while (!queue.empty()) {
            const auto [d, v] = *queue.begin();
            color[v] = next_color;
            ++colored;

            std::vector<int> dropped = {v};
            for (int u : g.adjacency[v]) {
                if (unchosen[u]) dropped.push_back(u);
            }
            for (int w : dropped) {
                queue.erase({deg[w], w});
                unchosen[w] = 0;
            }
            for (int w : dropped) {
                for (int u : g.adjacency[w]) {
                    if (!unchosen[u]) continue;
                    queue.erase({deg[u], u});
                    queue.emplace(--deg[u], u);
                }
            }
        }
        ++next_color;
    }
    return color;
}

Partition to_partition(const SplitStrategy& strategy, const std::vector<int>& color) {
    Partition part;
    part.strategy = strategy;
    const int n_colors = *std::max_element(color.begin(), color.end()) + 1;
    part.classes.resize(n_colors);
    for (int v = 0; v < static_cast<int>(color.size()); ++v) {
        part.classes[color[v]].push_back(v);
    }
    return part;  // class members ascend because vertices are scanned in id order
}

}  // namespace

bool is_graph_strategy(StrategyKind kind) {
    return kind != StrategyKind::avg_shuffled && kind != StrategyKind::avg_unshuffled;
}

StrategyFamily family_of(StrategyKind kind) {
    return is_graph_strategy(kind) ? StrategyFamily::graph : StrategyFamily::average;
}

const std::string& strategy_name(StrategyKind kind) {
    return kStrategyNames[static_cast<std::size_t>(kind)];
}

StrategyKind parse_strategy_kind(const std::string& name) {
    for (std::size_t i = 0; i < kStrategyNames.size(); ++i) {
        if (kStrategyNames[i] == name) return static_cast<StrategyKind>(i);
    }
    throw ValidationError("unknown split strategy: '" + name + "'");
}

std::string strategy_label(const SplitStrategy& s) {
    std::string label = strategy_name(s.kind);
    if (!is_graph_strategy(s.kind)) {
        if (!s.requested_n) throw ValidationError(label + " requires a requested N");
        label += "_n" + std::to_string(*s.requested_n);
    }
    return label;
}

std::vector<int> Partition::class_of(int n_vertices) const {
    std::vector<int> owner(n_vertices, -1);
    for (int c = 0; c < n(); ++c) {
        if (classes[c].empty()) throw ValidationError("partition has an empty class");
        for (int v : classes[c]) {
            if (v < 0 || v >= n_vertices) {
                throw ValidationError("partition references patch id " + std::to_string(v) +
                                      " outside 0.." + std::to_string(n_vertices - 1));
            }
            if (owner[v] != -1) {
                throw ValidationError("patch id " + std::to_string(v) +
                                      " appears in more than one class");
            }
            owner[v] = c;
        }
    }
    for (int v = 0; v < n_vertices; ++v) {
        if (owner[v] == -1) {
            throw ValidationError("patch id " + std::to_string(v) + " is missing from the partition");
        }
    }
    return owner;
}

Partition greedy_color(const AdjacencyGraph& g, const SplitStrategy& strategy,
                       std::uint64_t seed) {
    if (!is_graph_strategy(strategy.kind)) {
        throw ValidationError(strategy_name(strategy.kind) + " is not a graph-coloring strategy");
    }
    if (g.n_vertices == 0) throw ValidationError("empty graph");

    std::vector<int> color;
    switch (strategy.kind) {
        case StrategyKind::largest_first:
            color = greedy_assign(g, order_largest_first(g));
            break;
        case StrategyKind::random_sequential:
            color = greedy_assign(g, order_random(g, seed));
            break;
        case StrategyKind::smallest_last:
            color = greedy_assign(g, order_smallest_last(g));
            break;
        case StrategyKind::connected_sequential:
            color = greedy_assign(g, order_connected_sequential(g));
            break;
        case StrategyKind::saturation_largest_first:
            color = color_dsatur(g);
            break;
        case StrategyKind::independent_set:
            color = color_independent_sets(g);
            break;
        default:
            throw ValidationError("unreachable strategy kind");
    }
    return to_partition(strategy, color);
}

Partition average_split(const PatchSet& ps, int n, bool shuffled, std::uint64_t seed) {
    if (n < 1) throw ValidationError("average split needs n >= 1");
    if (n > ps.size()) {
        throw ValidationError("average split n=" + std::to_string(n) + " exceeds patch count " +
                              std::to_string(ps.size()));
    }

    std::vector<int> ids(ps.records.size());
    std::iota(ids.begin(), ids.end(), 0);
    if (shuffled) {
        Rng rng(seed);
        rng.shuffle(ids);
    }

    Partition part;
    part.strategy.kind = shuffled ? StrategyKind::avg_shuffled : StrategyKind::avg_unshuffled;
    part.strategy.requested_n = n;
    const int base = ps.size() / n;
    const int extra = ps.size() % n;
    auto it = ids.begin();
    for (int c = 0; c < n; ++c) {
        const int len = base + (c < extra ? 1 : 0);
        part.classes.emplace_back(it, it + len);
        it += len;
        std::sort(part.classes.back().begin(), part.classes.back().end());
    }
    return part;
}

std::vector<std::pair<int, int>> validate_partition(const AdjacencyGraph& g,
                                                    const Partition& part) {
    const std::vector<int> owner = part.class_of(g.n_vertices);
    std::vector<std::pair<int, int>> violations;
    for (const auto& [u, v] : g.edges) {
        if (owner[u] == owner[v]) violations.emplace_back(u, v);
    }
    return violations;
}

void write_partition(std::ostream& out, const Partition& part) {
    out << "# strategy=" << strategy_name(part.strategy.kind) << "\n";
    if (part.strategy.requested_n) out << "# requested_n=" << *part.strategy.requested_n << "\n";
    int total = 0;
    for (const auto& cls : part.classes) total += static_cast<int>(cls.size());
    std::vector<int> owner(total, -1);
    for (int c = 0; c < part.n(); ++c) {
        for (int v : part.classes[c]) owner[v] = c;
    }
    for (int v = 0; v < total; ++v) out << v << "," << owner[v] << "\n";
}

Partition read_partition(std::istream& in, const std::string& source_name) {
    Partition part;
    bool kind_seen = false;
    std::string raw;
    int line_no = 0;
    std::vector<std::pair<int, int>> rows;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.rfind("# strategy=", 0) == 0) {
            part.strategy.kind = parse_strategy_kind(raw.substr(11));
            kind_seen = true;
            continue;
        }
        if (raw.rfind("# requested_n=", 0) == 0) {
            int n = 0;
            const std::string_view tv = std::string_view(raw).substr(14);
            const auto [ptr, ec] = std::from_chars(tv.data(), tv.data() + tv.size(), n);
            if (ec != std::errc{} || ptr != tv.data() + tv.size() || n < 1) {
                throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                      ": bad requested_n header");
            }
            part.strategy.requested_n = n;
            continue;
        }
        if (raw.empty() || raw[0] == '#') continue;
        const auto comma = raw.find(',');
        if (comma == std::string::npos) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                  ": expected 'patch_id,class_id'");
        }
        int patch_id = 0, class_id = 0;
        auto parse = [&](std::string_view tv, int& dst) {
            const auto [ptr, ec] = std::from_chars(tv.data(), tv.data() + tv.size(), dst);
            if (ec != std::errc{} || ptr != tv.data() + tv.size()) {
                throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                      ": not an integer: '" + std::string(tv) + "'");
            }
        };
        parse(std::string_view(raw).substr(0, comma), patch_id);
        parse(std::string_view(raw).substr(comma + 1), class_id);
        rows.emplace_back(patch_id, class_id);
    }
    if (!kind_seen) throw ValidationError(source_name + ": missing '# strategy=' header");
    if (rows.empty()) throw ValidationError(source_name + ": no partition rows");

    int n_classes = 0;
    for (const auto& [pid, cid] : rows) {
        if (pid < 0 || cid < 0) throw ValidationError(source_name + ": negative id");
        n_classes = std::max(n_classes, cid + 1);
    }
    part.classes.assign(n_classes, {});
    for (const auto& [pid, cid] : rows) part.classes[cid].push_back(pid);
    for (auto& cls : part.classes) std::sort(cls.begin(), cls.end());
    part.class_of(static_cast<int>(rows.size()));  // validates density and coverage
    if (!is_graph_strategy(part.strategy.kind) && !part.strategy.requested_n) {
        part.strategy.requested_n = part.n();
    }
    return part;
}

}  // namespace price
