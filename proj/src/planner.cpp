#include "price/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "price/errors.hpp"
#include "price/rng.hpp"

namespace price {

namespace {

constexpr double kInf = 1e100;
constexpr double kCostTol = 1e-9;   // absolute, for min-cost equality tests
constexpr double kF1Tol = 1e-9;     // dominance tolerance on f1 only

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Min-cost perfect matching of all rows into distinct columns (rows <= cols),
// successive shortest augmenting paths with potentials. Disallowed pairs cost
// kInf; returns nullopt when no perfect matching over allowed pairs exists.
std::optional<std::vector<int>> min_cost_matching(const std::vector<std::vector<double>>& cost,
                                                  const std::vector<std::vector<char>>& allowed) {
    const int n = static_cast<int>(cost.size());
    if (n == 0) return std::vector<int>{};
    const int m = static_cast<int>(cost[0].size());

    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> match(m + 1, 0);  // column -> row (1-based), 0 = free
    std::vector<int> way(m + 1, 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double edge = allowed[i0 - 1][j - 1] ? cost[i0 - 1][j - 1] : kInf;
                const double cur = edge - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (j1 < 0 || delta >= kInf / 2) return std::nullopt;  // row i unmatchable
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
    }
    return row_to_col;
}

struct PairTables {
    std::vector<std::vector<double>> total_time;  // dataset x instance
    std::vector<std::vector<double>> cost;
};

PairTables make_tables(const Partition& part, const std::vector<InstanceSpec>& catalog,
                       const Workload& workload) {
    PairTables t;
    const int n = part.n();
    const int m = static_cast<int>(catalog.size());
    t.total_time.assign(n, std::vector<double>(m, 0.0));
    t.cost.assign(n, std::vector<double>(m, 0.0));
    for (int d = 0; d < n; ++d) {
        const auto n_patches = static_cast<std::int64_t>(part.classes[d].size());
        if (n_patches == 0) throw ValidationError("partition has an empty class");
        for (int k = 0; k < m; ++k) {
            const TimeEstimate est = estimate_times(n_patches, catalog[k], workload);
            t.total_time[d][k] = est.total();
            t.cost[d][k] = est.total() / 3600.0 * catalog[k].price_per_hour;
        }
    }
    return t;
}

double canonical_cost(const std::vector<int>& instance_of, const PairTables& t) {
    double cost = 0;
    for (std::size_t d = 0; d < instance_of.size(); ++d) cost += t.cost[d][instance_of[d]];
    return cost;
}

double canonical_makespan(const std::vector<int>& instance_of, const PairTables& t) {
    double span = 0;
    for (std::size_t d = 0; d < instance_of.size(); ++d) {
        span = std::max(span, t.total_time[d][instance_of[d]]);
    }
    return span;
}

// Lexicographically smallest (in catalog order, dataset by dataset) matching
// with every pair total <= eps and total cost <= target + tolerance.
std::optional<std::vector<int>> lex_smallest_matching(const PairTables& t, double eps,
                                                      double target) {
    const int n = static_cast<int>(t.cost.size());
    const int m = static_cast<int>(t.cost[0].size());

    std::vector<int> fixed(n, -1);
    std::vector<char> instance_used(m, 0);
    double fixed_cost = 0;

    for (int d = 0; d < n; ++d) {
        bool placed = false;
        for (int k = 0; k < m && !placed; ++k) {
            if (instance_used[k] || t.total_time[d][k] > eps) continue;
            // Min-cost completion of the remaining datasets over free instances.
            const int rest = n - d - 1;
            std::vector<int> free_cols;
            for (int j = 0; j < m; ++j) {
                if (!instance_used[j] && j != k) free_cols.push_back(j);
            }
            std::vector<std::vector<double>> sub_cost(rest);
            std::vector<std::vector<char>> sub_allowed(rest);
            for (int r = 0; r < rest; ++r) {
                const int dd = d + 1 + r;
                sub_cost[r].reserve(free_cols.size());
                sub_allowed[r].reserve(free_cols.size());
                for (int j : free_cols) {
                    sub_cost[r].push_back(t.cost[dd][j]);
                    sub_allowed[r].push_back(t.total_time[dd][j] <= eps ? 1 : 0);
                }
            }
            const auto sub = min_cost_matching(sub_cost, sub_allowed);
            if (!sub) continue;
            double completion = fixed_cost + t.cost[d][k];
            for (int r = 0; r < rest; ++r) completion += sub_cost[r][(*sub)[r]];
            if (completion <= target + kCostTol) {
                fixed[d] = k;
                instance_used[k] = 1;
                fixed_cost += t.cost[d][k];
                placed = true;
            }
        }
        if (!placed) return std::nullopt;
    }
    return fixed;
}

bool finite3(const CandidateSolution& c) {
    return std::isfinite(c.f1) && std::isfinite(c.f2) && std::isfinite(c.f3);
}

}  // namespace

std::vector<BiObjectivePoint> biobjective_solve(const Partition& part,
                                                const std::vector<InstanceSpec>& catalog,
                                                const Workload& workload, double budget) {
    if (!(budget >= 0)) throw ValidationError("budget must be nonnegative");
    const int n = part.n();
    const int m = static_cast<int>(catalog.size());
    if (n > m) {
        throw InfeasibleError("partition needs " + std::to_string(n) + " instances but the catalog has " +
                              std::to_string(m));
    }

    const PairTables t = make_tables(part, catalog, workload);

    std::vector<double> eps_values;
    eps_values.reserve(static_cast<std::size_t>(n) * m);
    for (const auto& row : t.total_time) eps_values.insert(eps_values.end(), row.begin(), row.end());
    std::sort(eps_values.begin(), eps_values.end());
    eps_values.erase(std::unique(eps_values.begin(), eps_values.end()), eps_values.end());

    // Sweep the makespan bound over every achievable pair total.
    std::map<std::pair<double, double>, std::vector<int>> points;  // (cost, makespan)
    for (const double eps : eps_values) {
        std::vector<std::vector<char>> allowed(n, std::vector<char>(m, 0));
        for (int d = 0; d < n; ++d) {
            for (int k = 0; k < m; ++k) allowed[d][k] = t.total_time[d][k] <= eps ? 1 : 0;
        }
        const auto match = min_cost_matching(t.cost, allowed);
        if (!match) continue;
        const double cost = canonical_cost(*match, t);
        if (cost > budget) continue;
        points.try_emplace({cost, canonical_makespan(*match, t)}, *match);
    }

    // Nondominated (cost, makespan) pairs; exact comparison per the contract.
    std::vector<std::pair<double, double>> keys;
    keys.reserve(points.size());
    for (const auto& [key, match] : points) keys.push_back(key);
    std::vector<BiObjectivePoint> frontier;
    for (const auto& [cost, mk] : keys) {
        bool dominated = false;
        for (const auto& [c2, m2] : keys) {
            if (c2 <= cost && m2 <= mk && (c2 < cost || m2 < mk)) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        BiObjectivePoint pt;
        pt.assignment.instance_of = points.at({cost, mk});
        if (const auto lex = lex_smallest_matching(t, mk, cost);
            lex && canonical_cost(*lex, t) == cost && canonical_makespan(*lex, t) == mk) {
            pt.assignment.instance_of = *lex;
        }
        pt.cost = cost;
        pt.makespan = mk;
        frontier.push_back(std::move(pt));
    }
    std::sort(frontier.begin(), frontier.end(),
              [](const BiObjectivePoint& a, const BiObjectivePoint& b) { return a.cost < b.cost; });
    return frontier;
}

bool dominates(const CandidateSolution& a, const CandidateSolution& b) {
    const bool leq = a.f1 <= b.f1 + kF1Tol && a.f2 <= b.f2 && a.f3 <= b.f3;
    const bool strict = a.f1 < b.f1 - kF1Tol || a.f2 < b.f2 || a.f3 < b.f3;
    return leq && strict;
}

std::vector<char> pareto_flags(const std::vector<CandidateSolution>& candidates) {
    for (const auto& c : candidates) {
        if (!finite3(c)) throw ValidationError("candidate objectives must be finite");
    }
    std::vector<char> keep(candidates.size(), 1);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            if (i != j && dominates(candidates[j], candidates[i])) {
                keep[i] = 0;
                break;
            }
        }
    }
    return keep;
}

ParetoSet pareto_filter_3d(const std::vector<CandidateSolution>& candidates) {
    const std::vector<char> keep = pareto_flags(candidates);
    ParetoSet front;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (keep[i]) {
            front.solutions.push_back(candidates[i]);
            front.solutions.back().is_pareto = true;
        }
    }
    return front;
}

namespace {

// Reruns a stage with "stage <name>, strategy <label>:" prefixed onto any
// error, preserving the exception type for the CLI's exit-code mapping.
template <typename Fn>
void run_stage(const char* stage, const std::string& label, Fn&& fn) {
    const auto prefix = [&](const std::exception& e) {
        return "stage " + std::string(stage) + ", strategy " + label + ": " + e.what();
    };
    try {
        fn();
    } catch (const InfeasibleError& e) {
        throw InfeasibleError(prefix(e));
    } catch (const std::exception& e) {
        throw ValidationError(prefix(e));
    }
}

}  // namespace

StrategyArtifacts run_strategy(const SplitStrategy& strategy, const PatchSet& ps,
                               const AdjacencyGraph* graph,
                               const std::vector<InstanceSpec>& catalog,
                               const Workload& workload, double budget,
                               std::uint64_t master_seed, int k_components) {
    StrategyArtifacts art;
    art.strategy = strategy;
    art.label = strategy_label(strategy);

    run_stage("split", art.label, [&] {
        const std::uint64_t split_seed = derive_seed(master_seed, "split", art.label);
        if (is_graph_strategy(strategy.kind)) {
            if (graph == nullptr) throw ValidationError("graph strategies need an adjacency graph");
            art.partition = greedy_color(*graph, strategy, split_seed);
        } else {
            if (!strategy.requested_n) {
                throw ValidationError(strategy_name(strategy.kind) + " requires a requested N");
            }
            art.partition = average_split(ps, *strategy.requested_n,
                                          strategy.kind == StrategyKind::avg_shuffled, split_seed);
        }
    });

    run_stage("encrypt", art.label, [&] {
        for (int c = 0; c < art.partition.n(); ++c) {
            SubDataset sub = make_sub_dataset(ps, art.partition.classes[c]);
            auto [centered, stats] = normalize(sub.coords);
            EigenBasis basis = eigen_basis(centered, k_components);
            const std::uint64_t enc_seed =
                derive_seed(master_seed, "encrypt", art.label + "/c" + std::to_string(c));
            art.encrypted.push_back(encrypt_labels(sub, basis, stats, enc_seed));
            art.subs.push_back(std::move(sub));
            art.stats.push_back(stats);
            art.bases.push_back(basis);
        }
    });

    run_stage("risk", art.label, [&] {
        const std::vector<double> rho_x = min_privacy_risk(art.partition, ps, Axis::x);
        const std::vector<double> rho_y = min_privacy_risk(art.partition, ps, Axis::y);
        art.risk = average_min_risk(strategy_name(strategy.kind), art.partition.n(), rho_x, rho_y);
    });

    run_stage("plan", art.label, [&] {
        art.points = biobjective_solve(art.partition, catalog, workload, budget);
    });
    return art;
}

PlanResult plan(const std::vector<SplitStrategy>& strategies, const PatchSet& ps,
                const std::vector<InstanceSpec>& catalog, const Workload& workload,
                double budget, std::uint64_t seed, int k_components) {
    if (strategies.empty()) throw ValidationError("strategy set is empty");

    const bool needs_graph = std::any_of(strategies.begin(), strategies.end(),
                                         [](const SplitStrategy& s) { return is_graph_strategy(s.kind); });
    AdjacencyGraph graph;
    if (needs_graph) graph = build_graph(ps);

    PlanResult result;
    for (const auto& strategy : strategies) {
        StrategyArtifacts art = run_strategy(strategy, ps, needs_graph ? &graph : nullptr,
                                             catalog, workload, budget, seed, k_components);
        result.risk_reports.push_back(art.risk);
        if (art.points.empty()) {
            result.warnings.push_back("strategy " + art.label +
                                      ": no feasible assignment under budget " + fmt12(budget));
            continue;
        }
        for (const auto& pt : art.points) {
            CandidateSolution cand;
            cand.strategy = strategy_name(strategy.kind);
            cand.family = family_of(strategy.kind);
            cand.n_datasets = art.partition.n();
            cand.f1 = art.risk.mean_sum;
            cand.f2 = pt.cost;
            cand.f3 = pt.makespan;
            for (int k : pt.assignment.instance_of) cand.assigned_instance_ids.push_back(catalog[k].id);
            result.pool.push_back(std::move(cand));
        }
    }

    const std::vector<char> keep = pareto_flags(result.pool);
    for (std::size_t i = 0; i < result.pool.size(); ++i) result.pool[i].is_pareto = keep[i] != 0;
    for (const auto& cand : result.pool) {
        if (cand.is_pareto) result.front.solutions.push_back(cand);
    }
    return result;
}

void write_candidates(std::ostream& out, const std::vector<CandidateSolution>& candidates) {
    out << "# strategy,N,f1_bits,f2_cost,f3_seconds,is_pareto,assignment\n";
    for (const auto& c : candidates) {
        out << c.strategy << "," << c.n_datasets << "," << fmt12(c.f1) << "," << fmt12(c.f2) << ","
            << fmt12(c.f3) << "," << (c.is_pareto ? 1 : 0) << ",";
        for (std::size_t d = 0; d < c.assigned_instance_ids.size(); ++d) {
            if (d) out << ";";
            out << "d" << d << ":" << c.assigned_instance_ids[d];
        }
        out << "\n";
    }
}

std::vector<CandidateSolution> read_candidates(std::istream& in, const std::string& source_name) {
    std::vector<CandidateSolution> candidates;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty() || raw[0] == '#') continue;

        std::stringstream ss(raw);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                  ": expected 7 comma-separated fields");
        }
        CandidateSolution c;
        try {
            c.strategy = fields[0];
            c.family = family_of(parse_strategy_kind(fields[0]));
            c.n_datasets = std::stoi(fields[1]);
            c.f1 = std::stod(fields[2]);
            c.f2 = std::stod(fields[3]);
            c.f3 = std::stod(fields[4]);
            c.is_pareto = std::stoi(fields[5]) != 0;
        } catch (const std::exception& e) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                  ": malformed candidate row (" + e.what() + ")");
        }
        std::stringstream as(fields[6]);
        std::string part;
        while (std::getline(as, part, ';')) {
            const auto colon = part.find(':');
            if (colon == std::string::npos) {
                throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                      ": malformed assignment entry '" + part + "'");
            }
            c.assigned_instance_ids.push_back(part.substr(colon + 1));
        }
        if (static_cast<int>(c.assigned_instance_ids.size()) != c.n_datasets) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                  ": assignment length does not match N");
        }
        candidates.push_back(std::move(c));
    }
    return candidates;
}

}  // namespace price
