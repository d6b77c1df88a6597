#include "price/hybridcloud.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "price/errors.hpp"

namespace price {

namespace {

std::string at_line(const std::string& path, int line_no, const std::string& msg) {
    return path + ":" + std::to_string(line_no) + ": " + msg;
}

std::string clean_line(std::string line) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const char* ws = " \t\r";
    const auto begin = line.find_first_not_of(ws);
    if (begin == std::string::npos) return {};
    const auto end = line.find_last_not_of(ws);
    return line.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("trailing chars");
        return v;
    } catch (const std::exception&) {
        throw ValidationError(context + ": not a number: '" + text + "'");
    }
}

}  // namespace

std::vector<InstanceSpec> load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open catalog file: " + path);

    std::vector<InstanceSpec> catalog;
    std::set<std::string> ids;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = clean_line(raw);
        if (line.empty()) continue;

        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(clean_line(field));
        if (fields.size() != 6) {
            throw ValidationError(at_line(path, line_no,
                "expected id,provider,region,perf_factor,price_per_hour,bandwidth_mbps"));
        }

        InstanceSpec spec;
        spec.id = fields[0];
        if (spec.id.empty()) throw ValidationError(at_line(path, line_no, "empty instance id"));
        // ids end up in the candidates file's d0:id;d1:id assignment column
        if (spec.id.find_first_of(",;: \t") != std::string::npos) {
            throw ValidationError(at_line(path, line_no,
                "instance id '" + spec.id + "' may not contain ',', ';', ':' or whitespace"));
        }
        if (!ids.insert(spec.id).second) {
            throw ValidationError(at_line(path, line_no, "duplicate instance id '" + spec.id + "'"));
        }
        if (fields[1] == "private") {
            spec.provider = Provider::private_cloud;
        } else if (fields[1] == "commercial") {
            spec.provider = Provider::commercial;
        } else {
            throw ValidationError(at_line(path, line_no,
                "provider must be 'private' or 'commercial', got '" + fields[1] + "'"));
        }
        spec.region = fields[2];
        spec.perf_factor = parse_double(fields[3], at_line(path, line_no, "perf_factor"));
        spec.price_per_hour = parse_double(fields[4], at_line(path, line_no, "price_per_hour"));
        spec.bandwidth_mbps = parse_double(fields[5], at_line(path, line_no, "bandwidth_mbps"));

        if (!(spec.perf_factor > 0) || !std::isfinite(spec.perf_factor)) {
            throw ValidationError(at_line(path, line_no, "perf_factor must be positive"));
        }
        if (!(spec.bandwidth_mbps > 0) || !std::isfinite(spec.bandwidth_mbps)) {
            throw ValidationError(at_line(path, line_no, "bandwidth_mbps must be positive"));
        }
        if (!(spec.price_per_hour >= 0) || !std::isfinite(spec.price_per_hour)) {
            throw ValidationError(at_line(path, line_no, "price_per_hour must be nonnegative"));
        }
        if (spec.provider == Provider::private_cloud && spec.price_per_hour != 0.0) {
            throw ValidationError(at_line(path, line_no,
                "private instance '" + spec.id + "' must have price 0"));
        }
        catalog.push_back(std::move(spec));
    }
    if (catalog.empty()) throw ValidationError("catalog is empty: " + path);
    return catalog;
}

Workload load_workload(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open workload file: " + path);

    Workload w;
    std::set<std::string> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = clean_line(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(at_line(path, line_no, "expected 'key = value'"));
        }
        const std::string key = clean_line(line.substr(0, eq));
        const std::string value = clean_line(line.substr(eq + 1));
        if (!seen.insert(key).second) {
            throw ValidationError(at_line(path, line_no, "duplicate key '" + key + "'"));
        }
        const double v = parse_double(value, at_line(path, line_no, key));
        if (key == "model_bytes") {
            w.model_bytes = v;
        } else if (key == "per_patch_ref_seconds") {
            w.per_patch_ref_seconds = v;
        } else if (key == "patch_bytes") {
            w.patch_bytes = v;
        } else if (key == "total_parameters") {
            w.total_parameters = v;
        } else if (key == "flops_per_patch") {
            w.flops_per_patch = v;
        } else if (key == "batch_size") {
            w.batch_size = v;
        } else if (key == "memory_bytes") {
            w.memory_bytes = v;
        } else {
            throw ValidationError(at_line(path, line_no, "unknown workload key '" + key + "'"));
        }
    }
    if (!(w.per_patch_ref_seconds > 0)) {
        throw ValidationError(path + ": per_patch_ref_seconds must be positive");
    }
    if (w.model_bytes < 0 || w.patch_bytes < 0) {
        throw ValidationError(path + ": byte sizes must be nonnegative");
    }
    return w;
}

TimeEstimate estimate_times(std::int64_t n_patches, const InstanceSpec& inst, const Workload& w) {
    if (n_patches < 1) throw ValidationError("time estimate needs at least one patch");
    TimeEstimate t;
    const double bits = 8.0 * (w.model_bytes + static_cast<double>(n_patches) * w.patch_bytes);
    t.t_comm = bits / (inst.bandwidth_mbps * 1e6);
    t.t_compt = static_cast<double>(n_patches) * w.per_patch_ref_seconds / inst.perf_factor;
    return t;
}

double cost_of(const std::vector<int>& instance_of, const std::vector<TimeEstimate>& times,
               const std::vector<InstanceSpec>& catalog) {
    if (instance_of.size() != times.size()) {
        throw ValidationError("assignment and time estimates differ in length");
    }
    double cost = 0;
    for (std::size_t d = 0; d < instance_of.size(); ++d) {
        const int k = instance_of[d];
        if (k < 0 || k >= static_cast<int>(catalog.size())) {
            throw ValidationError("assignment references instance index " + std::to_string(k) +
                                  " outside the catalog");
        }
        cost += times[d].total() / 3600.0 * catalog[k].price_per_hour;
    }
    return cost;
}

double makespan_of(const std::vector<TimeEstimate>& times) {
    double span = 0;
    for (const auto& t : times) span = std::max(span, t.total());
    return span;
}

}  // namespace price
