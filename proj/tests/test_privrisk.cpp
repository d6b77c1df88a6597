#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "price/errors.hpp"
#include "price/privrisk.hpp"
#include "price/rng.hpp"

using namespace price;

namespace {

const std::vector<StrategyKind> kGraphKinds = {
    StrategyKind::largest_first,        StrategyKind::random_sequential,
    StrategyKind::smallest_last,        StrategyKind::independent_set,
    StrategyKind::connected_sequential, StrategyKind::saturation_largest_first,
};

double binary_entropy(double p) {
    if (p <= 0 || p >= 1) return 0;
    return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

void check_against_oracle(const Partition& part, const PatchSet& ps) {
    for (auto axis : {Axis::x, Axis::y}) {
        const std::vector<double> got = min_privacy_risk(part, ps, axis);
        REQUIRE(static_cast<int>(got.size()) == part.n());
        for (int node = 0; node < part.n(); ++node) {
            const double expect =
                oracle::risk_by_enumeration(part, ps, node, axis == Axis::x);
            CHECK(got[node] == doctest::Approx(expect).epsilon(1e-10));
        }
    }
}

}  // namespace

TEST_CASE("entropy of uniform, point-mass and skewed distributions") {
    CHECK(entropy({{0, 1, 2, 3}, {0.25, 0.25, 0.25, 0.25}}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(entropy({{7}, {1.0}}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(entropy({{0, 1, 2}, {0.5, 0.25, 0.25}}) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("entropy validates its distribution") {
    CHECK_THROWS_AS(entropy({{0, 1}, {0.5, 0.4}}), ValidationError);
    CHECK_THROWS_AS(entropy({{0, 0}, {0.5, 0.5}}), ValidationError);
    CHECK_THROWS_AS(entropy({{0, 1}, {1.5, -0.5}}), ValidationError);
}

TEST_CASE("mutual information of independent and identical variables") {
    JointDist independent;
    independent.table = {{{0, 0}, 0.25}, {{0, 1}, 0.25}, {{1, 0}, 0.25}, {{1, 1}, 0.25}};
    CHECK(mutual_information(independent) == doctest::Approx(0.0).epsilon(1e-12));

    JointDist identical;
    identical.table = {{{0, 0}, 0.5}, {{1, 1}, 0.5}};
    CHECK(mutual_information(identical) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mutual information of the correlated binary table") {
    JointDist j;
    j.table = {{{0, 0}, 0.4}, {{0, 1}, 0.1}, {{1, 0}, 0.1}, {{1, 1}, 0.4}};
    // H(S) = H(Z) = 1; H(S,Z) = -(0.8 log2 0.4 + 0.2 log2 0.1)
    const double h_joint = -(0.8 * std::log2(0.4) + 0.2 * std::log2(0.1));
    CHECK(mutual_information(j) == doctest::Approx(2.0 - h_joint).epsilon(1e-12));
    CHECK(mutual_information(j) == doctest::Approx(0.2780719051).epsilon(1e-9));
}

TEST_CASE("both mutual-information forms agree within 1e-12") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        JointDist j;
        const int ns = 2 + static_cast<int>(rng.below(4));
        const int nz = 2 + static_cast<int>(rng.below(4));
        double total = 0;
        for (int s = 0; s < ns; ++s) {
            for (int z = 0; z < nz; ++z) {
                const double w = rng.uniform(0, 1);
                j.table[{s, z}] = w;
                total += w;
            }
        }
        for (auto& [key, p] : j.table) p /= total;

        const double i_direct = mutual_information(j);
        // Conditional form: H(S) - H(S|Z).
        const DiscreteDist zs = j.marginal_second();
        double h_s_given_z = 0;
        for (std::size_t zi = 0; zi < zs.support.size(); ++zi) {
            const double pz = zs.probs[zi];
            double h = 0;
            for (const auto& [key, p] : j.table) {
                if (key.second != zs.support[zi] || p == 0) continue;
                const double cond = p / pz;
                h -= cond * std::log2(cond);
            }
            h_s_given_z += pz * h;
        }
        const double i_cond = entropy(j.marginal_first()) - h_s_given_z;
        CHECK(i_direct == doctest::Approx(i_cond).epsilon(1e-12));

        // bounds
        CHECK(i_direct >= 0.0);
        CHECK(i_direct <= entropy(j.marginal_first()) + 1e-12);
        CHECK(i_direct <= entropy(j.marginal_second()) + 1e-12);
    }
}

TEST_CASE("a single node leaks nothing") {
    const PatchSet ps = generate_grid(2, 3, 224);
    Partition whole;
    whole.strategy = {StrategyKind::avg_unshuffled, 1};
    whole.classes = {{0, 1, 2, 3, 4, 5}};
    for (auto axis : {Axis::x, Axis::y}) {
        const auto risks = min_privacy_risk(whole, ps, axis);
        REQUIRE(risks.size() == 1);
        CHECK(risks[0] == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("four singletons on a 2x2 grid have equal risk") {
    const PatchSet ps = generate_grid(2, 2, 224);
    Partition part;
    part.strategy = {StrategyKind::saturation_largest_first, {}};
    part.classes = {{0}, {1}, {2}, {3}};
    const auto risks = min_privacy_risk(part, ps, Axis::x);
    for (double r : risks) CHECK(r == doctest::Approx(risks[0]).epsilon(1e-12));
    CHECK(risks[0] == doctest::Approx(binary_entropy(0.25)).epsilon(1e-9));
    check_against_oracle(part, ps);
}

TEST_CASE("interleaved strip split matches the enumeration oracle") {
    const PatchSet ps = generate_grid(1, 4, 224);
    Partition part;
    part.strategy = {StrategyKind::avg_shuffled, 2};
    part.classes = {{0, 2}, {1, 3}};
    check_against_oracle(part, ps);
    const auto risks = min_privacy_risk(part, ps, Axis::x);
    CHECK(risks[0] == doctest::Approx(1.0).epsilon(1e-9));  // ownership is a fair coin
}

TEST_CASE("risk equals the oracle for every strategy on small grids") {
    Rng rng(77);
    for (int trial = 0; trial < 6; ++trial) {
        const int rows = 1 + static_cast<int>(rng.below(4));
        const int cols = 1 + static_cast<int>(rng.below(4));
        const PatchSet ps = generate_grid(rows, cols, 224);
        const AdjacencyGraph g = build_graph(ps);
        for (StrategyKind kind : kGraphKinds) {
            check_against_oracle(greedy_color(g, {kind, std::nullopt}, rng.next()), ps);
        }
        for (int n = 1; n <= std::min(4, ps.size()); ++n) {
            check_against_oracle(average_split(ps, n, true, rng.next()), ps);
            check_against_oracle(average_split(ps, n, false, rng.next()), ps);
        }
    }
}

TEST_CASE("equal-size classes of symmetric grids have identical per-node risk") {
    const PatchSet ps = generate_grid(4, 4, 224);
    const Partition part = average_split(ps, 4, false, 0);
    for (auto axis : {Axis::x, Axis::y}) {
        const auto risks = min_privacy_risk(part, ps, axis);
        for (double r : risks) CHECK(r == risks[0]);
    }
}

TEST_CASE("average_min_risk aggregates means and sample deviations") {
    const RiskReport single = average_min_risk("largest_first", 1, {0.0}, {0.0});
    CHECK(single.mean_x == 0.0);
    CHECK(single.mean_y == 0.0);
    CHECK(single.mean_sum == 0.0);
    CHECK(single.std_x == 0.0);

    const RiskReport two = average_min_risk("smallest_last", 2, {0.1, 0.3}, {0.2, 0.2});
    CHECK(two.mean_x == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(two.std_x == doctest::Approx(0.1414213562).epsilon(1e-9));
    CHECK(two.std_y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(two.mean_sum == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(two.per_node.size() == 2);

    CHECK_THROWS_AS(average_min_risk("x", 0, {}, {}), ValidationError);
}

TEST_CASE("risk rows round-trip through the report format") {
    std::vector<RiskReport> rows;
    rows.push_back(average_min_risk("largest_first", 2, {0.125, 0.25}, {0.0625, 0.5}));
    rows.push_back(average_min_risk("avg_shuffled", 4, {0.1, 0.1, 0.1, 0.1}, {0.2, 0.2, 0.2, 0.2}));

    std::stringstream ss;
    write_risk_rows(ss, rows);
    const auto back = read_risk_rows(ss, "mem");
    REQUIRE(back.size() == 2);
    CHECK(back[0].strategy == "largest_first");
    CHECK(back[0].n_datasets == 2);
    CHECK(back[0].mean_x == doctest::Approx(rows[0].mean_x).epsilon(1e-11));
    CHECK(back[1].mean_sum == doctest::Approx(rows[1].mean_sum).epsilon(1e-11));

    std::stringstream bad("largest_first,2,0.1\n");
    CHECK_THROWS_AS(read_risk_rows(bad, "mem"), ValidationError);
}
