#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "price/hybridcloud.hpp"
#include "price/labelcrypt.hpp"
#include "price/privrisk.hpp"
#include "price/splitting.hpp"

namespace price {

// Injective dataset -> instance map (one dataset per instance).
struct Assignment {
    std::vector<int> instance_of;  // dataset index -> catalog index
};

struct BiObjectivePoint {
    double cost = 0;      // f2
    double makespan = 0;  // f3, seconds
    Assignment assignment;
};

// Exact (cost, makespan) frontier of injective assignments with cost <= budget,
// via epsilon-constraint over the finite set of pair completion times and a
// min-cost perfect matching per epsilon. One representative assignment per
// point: ties in cost break by smaller makespan, then lexicographically
// smallest assignment in catalog order. Sorted by ascending cost.
std::vector<BiObjectivePoint> biobjective_solve(const Partition& part,
                                                const std::vector<InstanceSpec>& catalog,
                                                const Workload& workload, double budget);

struct CandidateSolution {
    std::string strategy;  // plain strategy name
    StrategyFamily family = StrategyFamily::graph;
    int n_datasets = 0;
    double f1 = 0;  // mean minimal privacy risk, x+y bits
    double f2 = 0;  // cost
    double f3 = 0;  // makespan seconds
    std::vector<std::string> assigned_instance_ids;  // dataset index -> instance id
    bool is_pareto = false;
};

struct ParetoSet {
    std::vector<CandidateSolution> solutions;
};

// a dominates b: <= in all objectives and < in at least one; f2/f3 compare
// exactly, f1 with a 1e-9 absolute tolerance.
bool dominates(const CandidateSolution& a, const CandidateSolution& b);

// Survivor flag per candidate: nondominated within the whole pool. Candidates
// with identical objective vectors are all retained.
std::vector<char> pareto_flags(const std::vector<CandidateSolution>& candidates);
ParetoSet pareto_filter_3d(const std::vector<CandidateSolution>& candidates);

// Everything one strategy contributes to a run.
struct StrategyArtifacts {
    SplitStrategy strategy;
    std::string label;
    Partition partition;
    std::vector<SubDataset> subs;
    std::vector<NormStats> stats;
    std::vector<EigenBasis> bases;
    std::vector<EncryptedLabelSet> encrypted;
    RiskReport risk;
    std::vector<BiObjectivePoint> points;
};

// split -> encrypt -> risk -> bi-objective solve for one strategy. The graph
// is required for graph strategies and ignored for avg kinds. Stage seeds
// derive from the master seed by stage name and strategy label.
StrategyArtifacts run_strategy(const SplitStrategy& strategy, const PatchSet& ps,
                               const AdjacencyGraph* graph,
                               const std::vector<InstanceSpec>& catalog,
                               const Workload& workload, double budget,
                               std::uint64_t master_seed, int k_components);

struct PlanResult {
    std::vector<CandidateSolution> pool;  // feasible per-strategy frontiers, pareto-flagged
    ParetoSet front;
    std::vector<RiskReport> risk_reports;
    std::vector<std::string> warnings;  // strategies that contributed no candidate
};

PlanResult plan(const std::vector<SplitStrategy>& strategies, const PatchSet& ps,
                const std::vector<InstanceSpec>& catalog, const Workload& workload,
                double budget, std::uint64_t seed, int k_components = 2);

// Candidates file: `strategy,N,f1_bits,f2_cost,f3_seconds,is_pareto,assignment`
// with assignment rendered `d0:inst;d1:inst;...`.
void write_candidates(std::ostream& out, const std::vector<CandidateSolution>& candidates);
std::vector<CandidateSolution> read_candidates(std::istream& in, const std::string& source_name);

}  // namespace price
