#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace price {

enum class Provider { private_cloud, commercial };

struct InstanceSpec {
    std::string id;
    Provider provider = Provider::commercial;
    std::string region;
    double perf_factor = 1.0;     // throughput relative to the reference GPU
    double price_per_hour = 0.0;  // 0 for private instances
    double bandwidth_mbps = 0.0;
};

// Inference workload model. The estimator uses the first three fields; the
// rest is descriptive metadata carried through for reporting.
struct Workload {
    double model_bytes = 0;
    double per_patch_ref_seconds = 0;
    double patch_bytes = 0;
    double total_parameters = 0;
    double flops_per_patch = 0;
    double batch_size = 0;
    double memory_bytes = 0;
};

struct TimeEstimate {
    double t_comm = 0;   // seconds
    double t_compt = 0;  // seconds

    double total() const { return t_comm + t_compt; }
};

// Catalog file: `id,provider,region,perf_factor,price_per_hour,bandwidth_mbps`
// per line, provider in {private, commercial}, '#' comments allowed.
std::vector<InstanceSpec> load_catalog(const std::string& path);

// Workload config: `key = value` lines, '#' comments allowed.
Workload load_workload(const std::string& path);

// t_comm = 8*(model_bytes + n*patch_bytes) / (bandwidth_mbps*1e6)
// t_compt = n * per_patch_ref_seconds / perf_factor
TimeEstimate estimate_times(std::int64_t n_patches, const InstanceSpec& inst, const Workload& w);

// Pay-as-you-go: sum over assigned instances of total hours x unit price.
// instance_of maps dataset index -> catalog index; times is row-aligned.
double cost_of(const std::vector<int>& instance_of, const std::vector<TimeEstimate>& times,
               const std::vector<InstanceSpec>& catalog);

// Completion time of the slowest assigned instance; 0 for an empty assignment.
double makespan_of(const std::vector<TimeEstimate>& times);

}  // namespace price
