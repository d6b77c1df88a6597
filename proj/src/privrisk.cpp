#include "price/privrisk.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "price/errors.hpp"

namespace price {

namespace {

constexpr double kProbTolerance = 1e-9;

// Distinguished "not visible" symbol; coordinates are nonnegative so the
// sentinel can never collide with a real value.
constexpr std::int64_t kBlank = std::numeric_limits<std::int64_t>::min();

void check_prob_vector(const std::vector<double>& probs) {
    double sum = 0;
    for (double p : probs) {
        if (!(p >= -1e-12) || !std::isfinite(p)) {
            throw ValidationError("probabilities must be nonnegative and finite");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTolerance) {
        throw ValidationError("probabilities sum to " + std::to_string(sum) + ", not 1");
    }
}

double plogp_sum(const std::vector<double>& probs) {
    double h = 0;
    for (double p : probs) {
        if (p > 0) h -= p * std::log2(p);
    }
    return h;
}

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

DiscreteDist JointDist::marginal_first() const {
    std::map<std::int64_t, double> acc;
    for (const auto& [key, p] : table) acc[key.first] += p;
    DiscreteDist d;
    for (const auto& [s, p] : acc) {
        d.support.push_back(s);
        d.probs.push_back(p);
    }
    return d;
}

DiscreteDist JointDist::marginal_second() const {
    std::map<std::int64_t, double> acc;
    for (const auto& [key, p] : table) acc[key.second] += p;
    DiscreteDist d;
    for (const auto& [z, p] : acc) {
        d.support.push_back(z);
        d.probs.push_back(p);
    }
    return d;
}

double entropy(const DiscreteDist& d) {
    if (d.support.size() != d.probs.size()) {
        throw ValidationError("distribution support and probabilities differ in length");
    }
    std::vector<std::int64_t> symbols = d.support;
    std::sort(symbols.begin(), symbols.end());
    if (std::adjacent_find(symbols.begin(), symbols.end()) != symbols.end()) {
        throw ValidationError("distribution support has duplicate symbols");
    }
    check_prob_vector(d.probs);
    return plogp_sum(d.probs);
}

double mutual_information(const JointDist& j) {
    std::vector<double> joint_probs;
    joint_probs.reserve(j.table.size());
    for (const auto& [key, p] : j.table) joint_probs.push_back(p);
    check_prob_vector(joint_probs);

    const double hs = plogp_sum(j.marginal_first().probs);
    const double hz = plogp_sum(j.marginal_second().probs);
    const double hsz = plogp_sum(joint_probs);
    return std::max(0.0, hs + hz - hsz);
}

double entropy_from_counts(const std::vector<std::int64_t>& counts, std::int64_t total) {
    std::int64_t check = 0;
    for (std::int64_t c : counts) {
        if (c < 0) throw ValidationError("negative count");
        check += c;
    }
    if (check != total || total <= 0) {
        throw ValidationError("counts do not sum to the stated total");
    }
    double sum = 0;
    for (std::int64_t c : counts) {
        if (c > 0) sum += static_cast<double>(c) * std::log2(static_cast<double>(c));
    }
    return std::log2(static_cast<double>(total)) - sum / static_cast<double>(total);
}

double mi_from_counts(const std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t>& joint,
                      std::int64_t total) {
    std::map<std::int64_t, std::int64_t> s_counts;
    std::map<std::int64_t, std::int64_t> z_counts;
    std::vector<std::int64_t> joint_counts;
    joint_counts.reserve(joint.size());
    for (const auto& [key, c] : joint) {
        s_counts[key.first] += c;
        z_counts[key.second] += c;
        joint_counts.push_back(c);
    }
    auto values_of = [](const std::map<std::int64_t, std::int64_t>& m) {
        std::vector<std::int64_t> v;
        v.reserve(m.size());
        for (const auto& [sym, c] : m) v.push_back(c);
        return v;
    };
    const double hs = entropy_from_counts(values_of(s_counts), total);
    const double hz = entropy_from_counts(values_of(z_counts), total);
    const double hsz = entropy_from_counts(joint_counts, total);
    return std::max(0.0, hs + hz - hsz);
}

std::vector<double> min_privacy_risk(const Partition& part, const PatchSet& ps, Axis axis) {
    const std::vector<int> owner = part.class_of(ps.size());
    const std::int64_t total = ps.size();

    std::vector<double> risks(part.n(), 0.0);
    for (int node = 0; node < part.n(); ++node) {
        std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> joint;
        for (const auto& rec : ps.records) {
            const std::int64_t coord = (axis == Axis::x) ? rec.x : rec.y;
            if (owner[rec.id] == node) {
                ++joint[{coord, kBlank}];
            } else {
                ++joint[{kBlank, coord}];
            }
        }
        risks[node] = mi_from_counts(joint, total);
    }
    return risks;
}

RiskReport average_min_risk(const std::string& strategy, int n_datasets,
                            const std::vector<double>& rho_x,
                            const std::vector<double>& rho_y) {
    if (rho_x.empty() || rho_x.size() != rho_y.size()) {
        throw ValidationError("risk lists must be nonempty and aligned");
    }
    RiskReport report;
    report.strategy = strategy;
    report.n_datasets = n_datasets;

    const int n = static_cast<int>(rho_x.size());
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        report.per_node.push_back({i, rho_x[i], rho_y[i]});
        sx += rho_x[i];
        sy += rho_y[i];
    }
    report.mean_x = sx / n;
    report.mean_y = sy / n;
    report.mean_sum = report.mean_x + report.mean_y;

    if (n > 1) {
        double vx = 0, vy = 0;
        for (int i = 0; i < n; ++i) {
            vx += (rho_x[i] - report.mean_x) * (rho_x[i] - report.mean_x);
            vy += (rho_y[i] - report.mean_y) * (rho_y[i] - report.mean_y);
        }
        report.std_x = std::sqrt(vx / (n - 1));
        report.std_y = std::sqrt(vy / (n - 1));
    }
    return report;
}

void write_risk_rows(std::ostream& out, const std::vector<RiskReport>& rows) {
    out << "# strategy,N,rho_x_mean,rho_x_std,rho_y_mean,rho_y_std,rho_sum\n";
    for (const auto& r : rows) {
        out << r.strategy << "," << r.n_datasets << "," << fmt12(r.mean_x) << ","
            << fmt12(r.std_x) << "," << fmt12(r.mean_y) << "," << fmt12(r.std_y) << ","
            << fmt12(r.mean_sum) << "\n";
    }
}

std::vector<RiskReport> read_risk_rows(std::istream& in, const std::string& source_name) {
    std::vector<RiskReport> rows;
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
        RiskReport r;
        try {
            r.strategy = fields[0];
            r.n_datasets = std::stoi(fields[1]);
            r.mean_x = std::stod(fields[2]);
            r.std_x = std::stod(fields[3]);
            r.mean_y = std::stod(fields[4]);
            r.std_y = std::stod(fields[5]);
            r.mean_sum = std::stod(fields[6]);
        } catch (const std::exception&) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                  ": malformed risk row");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace price
