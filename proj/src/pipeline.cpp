#include "price/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "price/errors.hpp"

namespace price {

namespace {

namespace fs = std::filesystem;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

SplitStrategy parse_strategy_token(const std::string& token) {
    SplitStrategy s;
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
        s.kind = parse_strategy_kind(token);
    } else {
        s.kind = parse_strategy_kind(token.substr(0, colon));
        int n = 0;
        try {
            n = std::stoi(token.substr(colon + 1));
        } catch (const std::exception&) {
            throw ValidationError("bad strategy token '" + token + "': N must be an integer");
        }
        if (n < 1) throw ValidationError("bad strategy token '" + token + "': N must be >= 1");
        if (!is_graph_strategy(s.kind)) s.requested_n = n;  // graph kinds ignore a requested N
    }
    if (!is_graph_strategy(s.kind) && !s.requested_n) {
        throw ValidationError("strategy '" + token + "' needs an N, e.g. '" + token + ":4'");
    }
    return s;
}

// Tracks files written by one run so a failure leaves no partial output.
class OutputTracker {
public:
    std::ofstream open(const fs::path& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ValidationError("cannot write file: " + path.string());
        paths_.push_back(path.string());
        return out;
    }

    void discard_all() {
        std::error_code ec;
        for (const auto& p : paths_) fs::remove(p, ec);
        paths_.clear();
    }

    std::vector<std::string> take() { return std::move(paths_); }

private:
    std::vector<std::string> paths_;
};

void write_manifest(std::ostream& out, const RunConfig& cfg) {
    out << "budget=" << fmt12(cfg.budget) << "\n";
    out << "catalog=" << cfg.catalog_path << "\n";
    if (cfg.patches_path.empty()) {
        out << "grid=" << cfg.grid_rows << "x" << cfg.grid_cols << "\n";
    } else {
        out << "patches=" << cfg.patches_path << "\n";
    }
    out << "irregular=" << (cfg.irregular ? 1 : 0) << "\n";
    out << "k=" << cfg.k_components << "\n";
    out << "mask=" << cfg.mask_path << "\n";
    out << "patch_size=" << cfg.patch_size << "\n";
    out << "seed=" << cfg.seed << "\n";
    out << "strategies=";
    for (std::size_t i = 0; i < cfg.strategies.size(); ++i) {
        if (i) out << ",";
        out << strategy_label(cfg.strategies[i]);
    }
    out << "\n";
    out << "workload=" << cfg.workload_path << "\n";
}

}  // namespace

PatchSet load_patch_source(const RunConfig& cfg) {
    if (!cfg.patches_path.empty()) {
        if (!cfg.mask_path.empty()) {
            throw ValidationError("a mask applies to generated grids, not loaded patch files");
        }
        return load_patches(cfg.patches_path, cfg.patch_size, cfg.irregular);
    }
    std::optional<GridMask> mask;
    if (!cfg.mask_path.empty()) mask = load_mask(cfg.mask_path);
    return generate_grid(cfg.grid_rows, cfg.grid_cols, cfg.patch_size, mask);
}

std::vector<SplitStrategy> parse_strategy_list(const std::string& list) {
    std::vector<SplitStrategy> strategies;
    std::stringstream ss(list);
    std::string token;
    auto add_graph_kinds = [&strategies]() {
        for (StrategyKind kind :
             {StrategyKind::largest_first, StrategyKind::random_sequential,
              StrategyKind::smallest_last, StrategyKind::independent_set,
              StrategyKind::connected_sequential, StrategyKind::saturation_largest_first}) {
            strategies.push_back({kind, std::nullopt});
        }
    };
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        if (token == "graph") {
            add_graph_kinds();
        } else if (token == "all") {
            add_graph_kinds();
            for (int n = 4; n <= 8; ++n) strategies.push_back({StrategyKind::avg_shuffled, n});
            for (int n = 4; n <= 8; ++n) strategies.push_back({StrategyKind::avg_unshuffled, n});
        } else {
            strategies.push_back(parse_strategy_token(token));
        }
    }
    if (strategies.empty()) throw ValidationError("strategy list is empty");

    std::set<std::string> labels;
    for (const auto& s : strategies) {
        if (!labels.insert(strategy_label(s)).second) {
            throw ValidationError("duplicate strategy '" + strategy_label(s) + "' in list");
        }
    }
    return strategies;
}

RunResult price_run(const RunConfig& cfg) {
    if (cfg.strategies.empty()) throw ValidationError("strategy list is empty");
    if (!(cfg.budget >= 0)) throw ValidationError("budget must be nonnegative");
    if (cfg.k_components != 1 && cfg.k_components != 2) {
        throw ValidationError("k must be 1 or 2");
    }
    if (cfg.out_dir.empty()) throw ValidationError("output directory is required");

    const PatchSet ps = load_patch_source(cfg);
    const std::vector<InstanceSpec> catalog = load_catalog(cfg.catalog_path);
    const Workload workload = load_workload(cfg.workload_path);

    const bool needs_graph =
        std::any_of(cfg.strategies.begin(), cfg.strategies.end(),
                    [](const SplitStrategy& s) { return is_graph_strategy(s.kind); });
    AdjacencyGraph graph;
    if (needs_graph) graph = build_graph(ps);

    fs::create_directories(cfg.out_dir);
    OutputTracker tracker;
    RunResult result;
    try {
        std::vector<RiskReport> risk_rows;
        std::vector<CandidateSolution> pool;

        for (const auto& strategy : cfg.strategies) {
            StrategyArtifacts art =
                run_strategy(strategy, ps, needs_graph ? &graph : nullptr, catalog, workload,
                             cfg.budget, cfg.seed, cfg.k_components);

            {
                auto out = tracker.open(fs::path(cfg.out_dir) / ("partition_" + art.label + ".csv"));
                write_partition(out, art.partition);
            }
            for (int c = 0; c < art.partition.n(); ++c) {
                const std::string suffix = art.label + "_c" + std::to_string(c);
                {
                    auto out = tracker.open(fs::path(cfg.out_dir) / ("labels_" + suffix + ".csv"));
                    write_labels(out, art.encrypted[c]);
                }
                {
                    auto out = tracker.open(fs::path(cfg.out_dir) / ("basis_" + suffix + ".txt"));
                    write_basis(out, art.bases[c], art.stats[c]);
                }
            }

            risk_rows.push_back(art.risk);
            if (art.points.empty()) {
                result.plan.warnings.push_back("strategy " + art.label +
                                               ": no feasible assignment under budget " +
                                               fmt12(cfg.budget));
            }
            for (const auto& pt : art.points) {
                CandidateSolution cand;
                cand.strategy = strategy_name(strategy.kind);
                cand.family = family_of(strategy.kind);
                cand.n_datasets = art.partition.n();
                cand.f1 = art.risk.mean_sum;
                cand.f2 = pt.cost;
                cand.f3 = pt.makespan;
                for (int k : pt.assignment.instance_of) {
                    cand.assigned_instance_ids.push_back(catalog[k].id);
                }
                pool.push_back(std::move(cand));
            }
        }

        const std::vector<char> keep = pareto_flags(pool);
        for (std::size_t i = 0; i < pool.size(); ++i) pool[i].is_pareto = keep[i] != 0;

        result.plan.risk_reports = risk_rows;
        result.plan.pool = pool;
        for (const auto& cand : pool) {
            if (cand.is_pareto) result.plan.front.solutions.push_back(cand);
        }

        {
            auto out = tracker.open(fs::path(cfg.out_dir) / "risk_report.csv");
            write_risk_rows(out, risk_rows);
        }
        {
            auto out = tracker.open(fs::path(cfg.out_dir) / "candidates.csv");
            write_candidates(out, pool);
        }
        {
            auto out = tracker.open(fs::path(cfg.out_dir) / "manifest.txt");
            write_manifest(out, cfg);
        }
    } catch (...) {
        tracker.discard_all();
        throw;
    }

    result.written_files = tracker.take();
    return result;
}

}  // namespace price
