#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "price/errors.hpp"
#include "price/pipeline.hpp"
#include "price/rng.hpp"

namespace {

namespace fs = std::filesystem;
using namespace price;

struct PatchSourceOpts {
    std::string grid;
    int rows = 0;
    int cols = 0;
    std::string patches;
    std::string mask;
    bool irregular = false;
    std::int64_t patch_size = 224;
};

void add_patch_source(CLI::App* cmd, PatchSourceOpts& opts) {
    cmd->add_option("--grid", opts.grid, "Full grid as RxC, e.g. 50x50");
    cmd->add_option("--rows", opts.rows, "Grid rows (alternative to --grid)");
    cmd->add_option("--cols", opts.cols, "Grid columns (alternative to --grid)");
    cmd->add_option("--patches", opts.patches, "Patch-list file (x,y per line)");
    cmd->add_option("--mask-file", opts.mask, "0/1 mask applied to the generated grid");
    cmd->add_flag("--irregular", opts.irregular, "Allow coordinates off the patch-size lattice");
    cmd->add_option("--patch-size", opts.patch_size, "Patch side length in pixels")
        ->default_val(224);
}

void fill_patch_source(const PatchSourceOpts& opts, RunConfig& cfg) {
    cfg.patch_size = opts.patch_size;
    cfg.mask_path = opts.mask;
    cfg.irregular = opts.irregular;
    if (!opts.patches.empty()) {
        if (!opts.grid.empty() || opts.rows || opts.cols) {
            throw ValidationError("give either --patches or a grid, not both");
        }
        cfg.patches_path = opts.patches;
        return;
    }
    int rows = opts.rows, cols = opts.cols;
    if (!opts.grid.empty()) {
        if (rows || cols) throw ValidationError("give either --grid or --rows/--cols, not both");
        const auto x = opts.grid.find('x');
        try {
            if (x == std::string::npos) throw std::invalid_argument("no x");
            rows = std::stoi(opts.grid.substr(0, x));
            cols = std::stoi(opts.grid.substr(x + 1));
        } catch (const std::exception&) {
            throw ValidationError("--grid expects RxC, e.g. 50x50, got '" + opts.grid + "'");
        }
    }
    if (rows < 1 || cols < 1) {
        throw ValidationError("a patch source is required: --grid RxC (or --rows/--cols) or --patches FILE");
    }
    cfg.grid_rows = rows;
    cfg.grid_cols = cols;
}

std::ofstream open_out(const std::string& path) {
    if (const fs::path parent = fs::path(path).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw ValidationError("missing " + what + " file: " + path);
    return in;
}

int cmd_run(const PatchSourceOpts& src, const std::string& strategies,
            const std::string& catalog, const std::string& workload, double budget, int k,
            std::uint64_t seed, const std::string& out_dir) {
    RunConfig cfg;
    fill_patch_source(src, cfg);
    cfg.strategies = parse_strategy_list(strategies);
    cfg.catalog_path = catalog;
    cfg.workload_path = workload;
    cfg.budget = budget;
    cfg.k_components = k;
    cfg.seed = seed;
    cfg.out_dir = out_dir;

    const RunResult result = price_run(cfg);
    for (const auto& warning : result.plan.warnings) std::cerr << "warning: " << warning << "\n";
    std::cout << "pool: " << result.plan.pool.size() << " candidate(s), front: "
              << result.plan.front.solutions.size() << " pareto-optimal, written to " << out_dir
              << "\n";
    return 0;
}

int cmd_split(const PatchSourceOpts& src, const std::string& strategy_token, int n,
              std::uint64_t seed, const std::string& out_path) {
    RunConfig cfg;
    fill_patch_source(src, cfg);
    const PatchSet ps = load_patch_source(cfg);

    SplitStrategy strategy;
    strategy.kind = parse_strategy_kind(strategy_token);
    if (!is_graph_strategy(strategy.kind)) {
        if (n < 1) throw ValidationError("--n is required for average-split strategies");
        strategy.requested_n = n;
    }

    const std::uint64_t split_seed = derive_seed(seed, "split", strategy_label(strategy));
    Partition part;
    if (is_graph_strategy(strategy.kind)) {
        part = greedy_color(build_graph(ps), strategy, split_seed);
    } else {
        part = average_split(ps, n, strategy.kind == StrategyKind::avg_shuffled, split_seed);
    }
    auto out = open_out(out_path);
    write_partition(out, part);
    std::cout << strategy_label(strategy) << ": N=" << part.n() << " -> " << out_path << "\n";
    return 0;
}

int cmd_encrypt(const PatchSourceOpts& src, const std::string& partition_path, int k,
                std::uint64_t seed, const std::string& out_dir) {
    RunConfig cfg;
    fill_patch_source(src, cfg);
    const PatchSet ps = load_patch_source(cfg);

    auto pin = open_in(partition_path, "partition");
    const Partition part = read_partition(pin, partition_path);
    part.class_of(ps.size());
    const std::string label = strategy_label(part.strategy);

    fs::create_directories(out_dir);
    for (int c = 0; c < part.n(); ++c) {
        const SubDataset sub = make_sub_dataset(ps, part.classes[c]);
        auto [centered, stats] = normalize(sub.coords);
        const EigenBasis basis = eigen_basis(centered, k);
        const std::uint64_t enc_seed = derive_seed(seed, "encrypt", label + "/c" + std::to_string(c));
        const EncryptedLabelSet enc = encrypt_labels(sub, basis, stats, enc_seed);

        const std::string suffix = label + "_c" + std::to_string(c);
        auto lout = open_out((fs::path(out_dir) / ("labels_" + suffix + ".csv")).string());
        write_labels(lout, enc);
        auto bout = open_out((fs::path(out_dir) / ("basis_" + suffix + ".txt")).string());
        write_basis(bout, basis, stats);
    }
    std::cout << label << ": " << part.n() << " encrypted sub-dataset(s) -> " << out_dir << "\n";
    return 0;
}

int cmd_risk(const PatchSourceOpts& src, const std::vector<std::string>& partition_paths,
             const std::string& out_path) {
    RunConfig cfg;
    fill_patch_source(src, cfg);
    const PatchSet ps = load_patch_source(cfg);

    std::vector<RiskReport> rows;
    for (const auto& path : partition_paths) {
        auto pin = open_in(path, "partition");
        const Partition part = read_partition(pin, path);
        const std::vector<double> rho_x = min_privacy_risk(part, ps, Axis::x);
        const std::vector<double> rho_y = min_privacy_risk(part, ps, Axis::y);
        rows.push_back(average_min_risk(strategy_name(part.strategy.kind), part.n(), rho_x, rho_y));
    }
    auto out = open_out(out_path);
    write_risk_rows(out, rows);
    std::cout << rows.size() << " risk row(s) -> " << out_path << "\n";
    return 0;
}

int cmd_plan(const std::vector<std::string>& partition_paths, const std::string& risk_path,
             const std::string& catalog_path, const std::string& workload_path, double budget,
             const std::string& out_path) {
    const std::vector<InstanceSpec> catalog = load_catalog(catalog_path);
    const Workload workload = load_workload(workload_path);
    auto rin = open_in(risk_path, "risk report");
    const std::vector<RiskReport> risk_rows = read_risk_rows(rin, risk_path);

    std::vector<CandidateSolution> pool;
    for (const auto& path : partition_paths) {
        auto pin = open_in(path, "partition");
        const Partition part = read_partition(pin, path);
        const std::string name = strategy_name(part.strategy.kind);

        const RiskReport* risk = nullptr;
        for (const auto& row : risk_rows) {
            if (row.strategy == name && row.n_datasets == part.n()) {
                risk = &row;
                break;
            }
        }
        if (risk == nullptr) {
            throw ValidationError(risk_path + ": no risk row for strategy " + name + " with N=" +
                                  std::to_string(part.n()) + " (run `price risk` first)");
        }

        for (const auto& pt : biobjective_solve(part, catalog, workload, budget)) {
            CandidateSolution cand;
            cand.strategy = name;
            cand.family = family_of(part.strategy.kind);
            cand.n_datasets = part.n();
            cand.f1 = risk->mean_sum;
            cand.f2 = pt.cost;
            cand.f3 = pt.makespan;
            for (int k : pt.assignment.instance_of) cand.assigned_instance_ids.push_back(catalog[k].id);
            pool.push_back(std::move(cand));
        }
    }

    const std::vector<char> keep = pareto_flags(pool);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i].is_pareto = keep[i] != 0;
    auto out = open_out(out_path);
    write_candidates(out, pool);
    std::cout << pool.size() << " candidate(s) -> " << out_path << "\n";
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_path) {
    std::vector<CandidateSolution> pool;
    for (const auto& path : inputs) {
        auto in = open_in(path, "candidates");
        for (auto& cand : read_candidates(in, path)) pool.push_back(std::move(cand));
    }
    const std::vector<char> keep = pareto_flags(pool);
    int front = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i].is_pareto = keep[i] != 0;
        front += pool[i].is_pareto ? 1 : 0;
    }
    auto out = open_out(out_path);
    write_candidates(out, pool);
    std::cout << "merged " << pool.size() << " candidate(s), front of " << front << " -> "
              << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Privacy-aware patch-grid splitting and hybrid-cloud schedule planning"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Full pipeline: split, encrypt, risk, plan, report");
    PatchSourceOpts run_src;
    add_patch_source(run, run_src);
    std::string run_strategies = "all";
    std::string run_catalog, run_workload, run_out;
    double run_budget = 0;
    int run_k = 2;
    std::uint64_t run_seed = 0;
    run->add_option("--strategies", run_strategies,
                    "Comma list: graph kinds by name, avg kinds as name:N; 'graph' and 'all' expand");
    run->add_option("--catalog", run_catalog, "Instance catalog file")->required();
    run->add_option("--workload", run_workload, "Workload config file")->required();
    run->add_option("--budget", run_budget, "Cost budget")->required();
    run->add_option("--k", run_k, "Retained eigen components (1 or 2)")->default_val(2);
    run->add_option("--seed", run_seed, "Master seed")->default_val(0);
    run->add_option("--out", run_out, "Output directory")->required();

    // split
    auto* split = app.add_subcommand("split", "Split the patch set with one strategy");
    PatchSourceOpts split_src;
    add_patch_source(split, split_src);
    std::string split_strategy, split_out;
    int split_n = 0;
    std::uint64_t split_seed = 0;
    split->add_option("--strategy", split_strategy, "Strategy name")->required();
    split->add_option("--n", split_n, "Number of classes (avg strategies only)");
    split->add_option("--seed", split_seed, "Master seed")->default_val(0);
    split->add_option("--out", split_out, "Partition file to write")->required();

    // encrypt
    auto* encrypt = app.add_subcommand("encrypt", "Perturb the labels of each sub-dataset");
    PatchSourceOpts enc_src;
    add_patch_source(encrypt, enc_src);
    std::string enc_partition, enc_out;
    int enc_k = 2;
    std::uint64_t enc_seed = 0;
    encrypt->add_option("--partition", enc_partition, "Partition file from `split`")->required();
    encrypt->add_option("--k", enc_k, "Retained eigen components (1 or 2)")->default_val(2);
    encrypt->add_option("--seed", enc_seed, "Master seed")->default_val(0);
    encrypt->add_option("--out-dir", enc_out, "Directory for label and basis files")->required();

    // risk
    auto* risk = app.add_subcommand("risk", "Score the privacy risk of partition(s)");
    PatchSourceOpts risk_src;
    add_patch_source(risk, risk_src);
    std::vector<std::string> risk_partitions;
    std::string risk_out;
    risk->add_option("--partition", risk_partitions, "Partition file(s) from `split`")->required();
    risk->add_option("--out", risk_out, "Risk report file to write")->required();

    // plan
    auto* plan = app.add_subcommand("plan", "Solve the budgeted bi-objective assignment");
    std::vector<std::string> plan_partitions;
    std::string plan_risk, plan_catalog, plan_workload, plan_out;
    double plan_budget = 0;
    plan->add_option("--partition", plan_partitions, "Partition file(s) from `split`")->required();
    plan->add_option("--risk-report", plan_risk, "Risk report from `risk`")->required();
    plan->add_option("--catalog", plan_catalog, "Instance catalog file")->required();
    plan->add_option("--workload", plan_workload, "Workload config file")->required();
    plan->add_option("--budget", plan_budget, "Cost budget")->required();
    plan->add_option("--out", plan_out, "Candidates file to write")->required();

    // report
    auto* report = app.add_subcommand("report", "Merge candidates files and re-filter the front");
    std::vector<std::string> report_inputs;
    std::string report_out;
    report->add_option("inputs", report_inputs, "Candidates files to merge")->required();
    report->add_option("--out", report_out, "Merged candidates file to write")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) {
            return cmd_run(run_src, run_strategies, run_catalog, run_workload, run_budget, run_k,
                           run_seed, run_out);
        }
        if (split->parsed()) {
            return cmd_split(split_src, split_strategy, split_n, split_seed, split_out);
        }
        if (encrypt->parsed()) {
            return cmd_encrypt(enc_src, enc_partition, enc_k, enc_seed, enc_out);
        }
        if (risk->parsed()) return cmd_risk(risk_src, risk_partitions, risk_out);
        if (plan->parsed()) {
            return cmd_plan(plan_partitions, plan_risk, plan_catalog, plan_workload, plan_budget,
                            plan_out);
        }
        if (report->parsed()) return cmd_report(report_inputs, report_out);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const price::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
