#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "price/errors.hpp"
#include "price/grid.hpp"
#include "price/rng.hpp"

using namespace price;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path dir = fs::path("test_tmp");
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

GridMask random_mask(int rows, int cols, Rng& rng, double keep = 0.7) {
    GridMask mask;
    mask.rows = rows;
    mask.cols = cols;
    mask.cells.resize(static_cast<std::size_t>(rows) * cols);
    bool any = false;
    for (auto& cell : mask.cells) {
        cell = rng.uniform(0, 1) < keep ? 1 : 0;
        any = any || cell;
    }
    if (!any) mask.cells[0] = 1;
    return mask;
}

}  // namespace

TEST_CASE("generate_grid places records row-major at multiples of p") {
    const PatchSet strip = generate_grid(1, 3, 224);
    REQUIRE(strip.size() == 3);
    CHECK(strip.records[0].x == 0);
    CHECK(strip.records[0].y == 0);
    CHECK(strip.records[1].x == 224);
    CHECK(strip.records[1].y == 0);
    CHECK(strip.records[2].x == 448);
    CHECK(strip.records[2].y == 0);

    const PatchSet square = generate_grid(2, 2, 224);
    REQUIRE(square.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(square.records[i].id == i);
}

TEST_CASE("generate_grid honors a mask") {
    // 3x3 with 5 kept cells:
    // 1 0 1
    // 0 1 0
    // 1 0 1
    GridMask mask{3, 3, {1, 0, 1, 0, 1, 0, 1, 0, 1}};
    const PatchSet ps = generate_grid(3, 3, 224, mask);
    REQUIRE(ps.size() == 5);
    const std::set<std::pair<std::int64_t, std::int64_t>> expect = {
        {0, 0}, {448, 0}, {224, 224}, {0, 448}, {448, 448}};
    std::set<std::pair<std::int64_t, std::int64_t>> got;
    for (const auto& rec : ps.records) got.insert({rec.x, rec.y});
    CHECK(got == expect);

    GridMask empty{2, 2, {0, 0, 0, 0}};
    CHECK_THROWS_AS(generate_grid(2, 2, 224, empty), ValidationError);
    CHECK_THROWS_AS(generate_grid(3, 2, 224, empty), ValidationError);  // shape mismatch
}

TEST_CASE("load_patches parses, rejects duplicates and off-lattice coordinates") {
    const auto good = write_temp("patches_good.txt", "# comment\n0,0\n224,0\n");
    const PatchSet ps = load_patches(good.string(), 224);
    REQUIRE(ps.size() == 2);
    CHECK(ps.records[1].x == 224);

    const auto dup = write_temp("patches_dup.txt", "0,0\n0,0\n");
    CHECK_THROWS_WITH_AS(load_patches(dup.string(), 224),
                         doctest::Contains(":2:"), ValidationError);

    const auto offgrid = write_temp("patches_off.txt", "100,0\n");
    CHECK_THROWS_WITH_AS(load_patches(offgrid.string(), 224),
                         doctest::Contains("multiple"), ValidationError);
    CHECK(load_patches(offgrid.string(), 224, /*irregular=*/true).size() == 1);

    const auto bad = write_temp("patches_bad.txt", "0,0\nnope\n");
    CHECK_THROWS_WITH_AS(load_patches(bad.string(), 224),
                         doctest::Contains(":2:"), ValidationError);
    CHECK_THROWS_AS(load_patches("does_not_exist.txt", 224), ValidationError);
}

TEST_CASE("build_graph on strips, blocks and singletons") {
    const AdjacencyGraph strip = build_graph(generate_grid(1, 3, 224));
    const std::vector<std::pair<int, int>> expect_strip = {{0, 1}, {1, 2}};
    CHECK(strip.edges == expect_strip);

    const AdjacencyGraph block = build_graph(generate_grid(2, 2, 224));
    CHECK(block.edges.size() == 6);  // K4

    const AdjacencyGraph single = build_graph(generate_grid(1, 1, 224));
    CHECK(single.edges.empty());
}

TEST_CASE("full-grid edge count matches the king-graph formula and brute force") {
    for (int r = 1; r <= 10; ++r) {
        for (int c = 1; c <= 10; ++c) {
            const PatchSet ps = generate_grid(r, c, 32);
            const AdjacencyGraph g = build_graph(ps);
            const long long expect = static_cast<long long>(r) * (c - 1) +
                                     static_cast<long long>(c) * (r - 1) +
                                     2LL * (r - 1) * (c - 1);
            CHECK(static_cast<long long>(g.edges.size()) == expect);
            CHECK(g.edges == oracle::brute_force_edges(ps));
        }
    }
}

TEST_CASE("build_graph equals the pairwise oracle on random masked grids") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int rows = 1 + static_cast<int>(rng.below(12));
        const int cols = 1 + static_cast<int>(rng.below(12));
        const GridMask mask = random_mask(rows, cols, rng);
        const PatchSet ps = generate_grid(rows, cols, 224, mask);
        CHECK(build_graph(ps).edges == oracle::brute_force_edges(ps));
    }
}

TEST_CASE("permuting record order yields an isomorphic graph") {
    Rng rng(11);
    const GridMask mask = random_mask(6, 7, rng);
    const PatchSet ps = generate_grid(6, 7, 224, mask);

    PatchSet shuffled = ps;
    std::vector<int> perm(ps.size());
    for (int i = 0; i < ps.size(); ++i) perm[i] = i;
    rng.shuffle(perm);
    // perm[i] = original id placed at position i; new id of original v is pos[v].
    std::vector<int> pos(ps.size());
    for (int i = 0; i < ps.size(); ++i) pos[perm[i]] = i;
    for (int i = 0; i < ps.size(); ++i) {
        shuffled.records[i] = ps.records[perm[i]];
        shuffled.records[i].id = i;
    }

    const AdjacencyGraph g = build_graph(ps);
    const AdjacencyGraph h = build_graph(shuffled);
    REQUIRE(g.edges.size() == h.edges.size());

    std::set<std::pair<int, int>> mapped;
    for (const auto& [u, v] : g.edges) {
        const int a = std::min(pos[u], pos[v]);
        const int b = std::max(pos[u], pos[v]);
        mapped.insert({a, b});
    }
    const std::set<std::pair<int, int>> actual(h.edges.begin(), h.edges.end());
    CHECK(mapped == actual);
}

TEST_CASE("interior vertices of a full grid have degree 8") {
    const AdjacencyGraph g = build_graph(generate_grid(6, 9, 224));
    for (int r = 1; r < 5; ++r) {
        for (int c = 1; c < 8; ++c) {
            CHECK(g.degree(r * 9 + c) == 8);
        }
    }
}

TEST_CASE("load_mask reads 0/1 rows and rejects ragged files") {
    const auto good = write_temp("mask_good.txt", "# two rows\n101\n010\n");
    const GridMask mask = load_mask(good.string());
    CHECK(mask.rows == 2);
    CHECK(mask.cols == 3);
    CHECK(mask.at(0, 0));
    CHECK_FALSE(mask.at(1, 0));

    const auto ragged = write_temp("mask_ragged.txt", "101\n01\n");
    CHECK_THROWS_AS(load_mask(ragged.string()), ValidationError);
    const auto junk = write_temp("mask_junk.txt", "10x\n");
    CHECK_THROWS_AS(load_mask(junk.string()), ValidationError);
}
