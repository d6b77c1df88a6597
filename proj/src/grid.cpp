#include "price/grid.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>

#include "price/errors.hpp"

namespace price {

namespace {

std::string at_line(const std::string& path, int line_no, const std::string& msg) {
    return path + ":" + std::to_string(line_no) + ": " + msg;
}

// Strips comments, trailing CR and surrounding whitespace; empty result = skip.
std::string clean_line(std::string line) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const char* ws = " \t\r";
    const auto begin = line.find_first_not_of(ws);
    if (begin == std::string::npos) return {};
    const auto end = line.find_last_not_of(ws);
    return line.substr(begin, end - begin + 1);
}

std::int64_t parse_int64(std::string_view text, const std::string& context) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ValidationError(context + ": not an integer: '" + std::string(text) + "'");
    }
    return value;
}

struct CoordKey {
    std::int64_t x;
    std::int64_t y;

    bool operator==(const CoordKey&) const = default;
};

struct CoordKeyHash {
    std::size_t operator()(const CoordKey& k) const {
        std::uint64_t h = 0xCBF29CE484222325ull;
        for (std::uint64_t v : {static_cast<std::uint64_t>(k.x), static_cast<std::uint64_t>(k.y)}) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (8 * i)) & 0xFF;
                h *= 0x100000001B3ull;
            }
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

PatchSet generate_grid(int rows, int cols, std::int64_t patch_size,
                       const std::optional<GridMask>& mask) {
    if (rows < 1 || cols < 1) throw ValidationError("grid needs rows >= 1 and cols >= 1");
    if (patch_size <= 0) throw ValidationError("patch size must be positive");
    if (mask && (mask->rows != rows || mask->cols != cols)) {
        throw ValidationError("mask shape " + std::to_string(mask->rows) + "x" +
                              std::to_string(mask->cols) + " does not match grid " +
                              std::to_string(rows) + "x" + std::to_string(cols));
    }

    PatchSet ps;
    ps.patch_size = patch_size;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (mask && !mask->at(r, c)) continue;
            ps.records.push_back({static_cast<int>(ps.records.size()),
                                  static_cast<std::int64_t>(c) * patch_size,
                                  static_cast<std::int64_t>(r) * patch_size});
        }
    }
    if (ps.records.empty()) throw ValidationError("empty patch set");
    return ps;
}

GridMask load_mask(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open mask file: " + path);

    GridMask mask;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = clean_line(raw);
        if (line.empty()) continue;
        if (mask.cols == 0) {
            mask.cols = static_cast<int>(line.size());
        } else if (static_cast<int>(line.size()) != mask.cols) {
            throw ValidationError(at_line(path, line_no, "mask row width differs from previous rows"));
        }
        for (char c : line) {
            if (c != '0' && c != '1') {
                throw ValidationError(at_line(path, line_no, std::string("mask cell must be 0 or 1, got '") + c + "'"));
            }
            mask.cells.push_back(c == '1' ? 1 : 0);
        }
        ++mask.rows;
    }
    if (mask.rows == 0) throw ValidationError("mask file has no rows: " + path);
    return mask;
}

PatchSet load_patches(const std::string& path, std::int64_t patch_size, bool irregular) {
    if (patch_size <= 0) throw ValidationError("patch size must be positive");
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open patch file: " + path);

    PatchSet ps;
    ps.patch_size = patch_size;
    std::unordered_map<CoordKey, int, CoordKeyHash> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = clean_line(raw);
        if (line.empty()) continue;

        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw ValidationError(at_line(path, line_no, "expected 'x,y'"));
        }
        const std::int64_t x = parse_int64(clean_line(line.substr(0, comma)), at_line(path, line_no, "x"));
        const std::int64_t y = parse_int64(clean_line(line.substr(comma + 1)), at_line(path, line_no, "y"));
        if (x < 0 || y < 0) {
            throw ValidationError(at_line(path, line_no, "coordinates must be nonnegative"));
        }
        if (!irregular && (x % patch_size != 0 || y % patch_size != 0)) {
            throw ValidationError(at_line(path, line_no,
                "coordinate (" + std::to_string(x) + ", " + std::to_string(y) +
                ") is not a multiple of patch size " + std::to_string(patch_size)));
        }
        if (!seen.emplace(CoordKey{x, y}, line_no).second) {
            throw ValidationError(at_line(path, line_no,
                "duplicate coordinate (" + std::to_string(x) + ", " + std::to_string(y) + ")"));
        }
        ps.records.push_back({static_cast<int>(ps.records.size()), x, y});
    }
    if (ps.records.empty()) throw ValidationError("empty patch set: " + path);
    return ps;
}

AdjacencyGraph build_graph(const PatchSet& ps) {
    const std::int64_t p = ps.patch_size;
    if (p <= 0) throw ValidationError("patch size must be positive");

    std::unordered_map<CoordKey, int, CoordKeyHash> index;
    index.reserve(ps.records.size() * 2);
    for (const auto& rec : ps.records) {
        if (!index.emplace(CoordKey{rec.x, rec.y}, rec.id).second) {
            throw ValidationError("duplicate coordinate in patch set");
        }
    }

    AdjacencyGraph g;
    g.n_vertices = ps.size();
    g.adjacency.resize(ps.records.size());

    constexpr int dx[] = {-1, -1, -1, 0, 0, 1, 1, 1};
    constexpr int dy[] = {-1, 0, 1, -1, 1, -1, 0, 1};
    for (const auto& rec : ps.records) {
        for (int d = 0; d < 8; ++d) {
            const auto it = index.find(CoordKey{rec.x + dx[d] * p, rec.y + dy[d] * p});
            if (it == index.end()) continue;
            const int other = it->second;
            if (other > rec.id) g.edges.emplace_back(rec.id, other);
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    for (const auto& [u, v] : g.edges) {
        g.adjacency[u].push_back(v);
        g.adjacency[v].push_back(u);
    }
    for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
    return g;
}

}  // namespace price
