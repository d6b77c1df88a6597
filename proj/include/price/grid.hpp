#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace price {

// One tile of the patched image, identified by its top-left pixel corner.
// The (x, y) pair is the sensitive label the rest of the pipeline protects.
struct PatchRecord {
    int id = 0;
    std::int64_t x = 0;
    std::int64_t y = 0;
};

// Patch ids are dense 0..n-1 and the record order is canonical (row-major for
// generated grids, file order for loaded sets).
struct PatchSet {
    std::int64_t patch_size = 0;
    std::vector<PatchRecord> records;

    int size() const { return static_cast<int>(records.size()); }
};

struct GridMask {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> cells;  // row-major, nonzero = keep

    bool at(int r, int c) const {
        return cells[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + c] != 0;
    }
};

// Undirected patch adjacency. Edges are stored once as (u, v) with u < v and
// sorted; neighbor lists are sorted ascending.
struct AdjacencyGraph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adjacency;

    int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
};

// Full or masked rows x cols grid with patches at (col*p, row*p), row-major ids.
PatchSet generate_grid(int rows, int cols, std::int64_t patch_size,
                       const std::optional<GridMask>& mask = std::nullopt);

// Mask file: one row per line of '0'/'1' characters, '#' comments allowed.
GridMask load_mask(const std::string& path);

// Patch-list file: one `x,y` record per line, '#' comments allowed. Unless
// `irregular`, coordinates must be nonnegative multiples of the patch size.
PatchSet load_patches(const std::string& path, std::int64_t patch_size, bool irregular = false);

// Two patches are adjacent iff they sit one patch apart horizontally,
// vertically, or diagonally (|dx| = |dy| = p, the sqrt(2)*p relation kept in
// exact integer arithmetic). Built via a coordinate hash index, O(n) expected.
AdjacencyGraph build_graph(const PatchSet& ps);

}  // namespace price
