#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "price/grid.hpp"
#include "price/splitting.hpp"

namespace price {

struct DiscreteDist {
    std::vector<std::int64_t> support;  // unique symbols
    std::vector<double> probs;          // nonnegative, sums to 1 within 1e-9
};

struct JointDist {
    std::map<std::pair<std::int64_t, std::int64_t>, double> table;

    DiscreteDist marginal_first() const;
    DiscreteDist marginal_second() const;
};

// Shannon entropy in bits, 0*log0 := 0.
double entropy(const DiscreteDist& d);

// I = H(S) + H(Z) - H(S,Z), clamped at 0 against rounding.
double mutual_information(const JointDist& j);

// Exact-count routes: the empirical probabilities are rationals (count/total)
// and enter floating point only inside log2, via
//   H = log2(total) - (sum_c c*log2(c)) / total.
double entropy_from_counts(const std::vector<std::int64_t>& counts, std::int64_t total);
double mi_from_counts(const std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t>& joint,
                      std::int64_t total);

enum class Axis { x, y };

// Minimal per-node privacy risk with all other N-1 nodes corrupted, over the
// cell-ownership channel: a patch U is drawn uniformly from the full set; the
// honest node's variable is U's axis coordinate when it owns U (else a
// distinguished blank), the adversary's view is the complement. Returns one
// value in bits per class of the partition.
std::vector<double> min_privacy_risk(const Partition& part, const PatchSet& ps, Axis axis);

struct RiskReport {
    std::string strategy;  // plain strategy name
    int n_datasets = 0;

    struct NodeRisk {
        int node = 0;
        double rho_x = 0;
        double rho_y = 0;
    };
    std::vector<NodeRisk> per_node;

    double mean_x = 0, mean_y = 0, mean_sum = 0;  // mean_sum = mean_x + mean_y
    double std_x = 0, std_y = 0;                  // sample std across nodes
};

RiskReport average_min_risk(const std::string& strategy, int n_datasets,
                            const std::vector<double>& rho_x,
                            const std::vector<double>& rho_y);

// Risk report file: `strategy,N,rho_x_mean,rho_x_std,rho_y_mean,rho_y_std,rho_sum`.
void write_risk_rows(std::ostream& out, const std::vector<RiskReport>& rows);
std::vector<RiskReport> read_risk_rows(std::istream& in, const std::string& source_name);

}  // namespace price
