#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "price/planner.hpp"

namespace price {

struct RunConfig {
    int grid_rows = 0;  // used when patches_path is empty
    int grid_cols = 0;
    std::string patches_path;
    std::string mask_path;
    bool irregular = false;
    std::int64_t patch_size = 224;
    std::vector<SplitStrategy> strategies;
    std::string catalog_path;
    std::string workload_path;
    double budget = 0;
    int k_components = 2;
    std::uint64_t seed = 0;
    std::string out_dir;
};

struct RunResult {
    PlanResult plan;
    std::vector<std::string> written_files;
};

PatchSet load_patch_source(const RunConfig& cfg);

// Comma-separated strategy list. Graph kinds by name, avg kinds as name:N;
// `graph` expands to the six graph strategies, `all` adds both avg kinds at
// N=4..8. Duplicate labels are rejected.
std::vector<SplitStrategy> parse_strategy_list(const std::string& list);

// Full pipeline: per strategy a partition file, encrypted label files with
// basis sidecars and a risk row; globally the flagged candidates file and a
// manifest. Outputs are a pure function of (config, seed); on error every file
// written so far is removed.
RunResult price_run(const RunConfig& cfg);

}  // namespace price
