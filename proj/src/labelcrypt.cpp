#include "price/labelcrypt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

#include "price/errors.hpp"
#include "price/privrisk.hpp"
#include "price/rng.hpp"

namespace price {

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_finite(const CoordMatrix& a, const char* what) {
    for (const auto& row : a.rows) {
        if (!std::isfinite(row[0]) || !std::isfinite(row[1])) {
            throw ValidationError(std::string(what) + " contains a non-finite value");
        }
    }
}

// Key a real value by its bit pattern (with -0 folded into +0) so the
// empirical joint never merges distinct values.
std::int64_t value_key(double v) {
    if (!std::isfinite(v)) throw ValidationError("non-finite value in utility input");
    if (v == 0.0) v = 0.0;
    return std::bit_cast<std::int64_t>(v);
}

}  // namespace

SubDataset make_sub_dataset(const PatchSet& ps, const std::vector<int>& patch_ids) {
    SubDataset sub;
    sub.patch_ids = patch_ids;
    sub.coords.rows.reserve(patch_ids.size());
    for (int id : patch_ids) {
        if (id < 0 || id >= ps.size()) {
            throw ValidationError("patch id " + std::to_string(id) + " outside the patch set");
        }
        const auto& rec = ps.records[id];
        sub.coords.rows.push_back({static_cast<double>(rec.x), static_cast<double>(rec.y)});
    }
    return sub;
}

std::pair<CoordMatrix, NormStats> normalize(const CoordMatrix& a) {
    const int n = a.n_rows();
    if (n < 2) throw ValidationError("degenerate sub-dataset: fewer than 2 rows");
    check_finite(a, "coordinate matrix");

    NormStats stats;
    for (int c = 0; c < 2; ++c) {
        double sum = 0;
        for (const auto& row : a.rows) sum += row[c];
        stats.mean[c] = sum / n;

        double sq = 0;
        for (const auto& row : a.rows) {
            const double d = row[c] - stats.mean[c];
            sq += d * d;
        }
        const double sd = std::sqrt(sq / (n - 1));
        // Constant column: record the guard value 1 and center to all zeros.
        stats.stddev[c] = (sd > 1e-12 * (std::abs(stats.mean[c]) + 1.0)) ? sd : 1.0;
    }
    return {apply_stats(a, stats), stats};
}

CoordMatrix apply_stats(const CoordMatrix& a, const NormStats& stats) {
    CoordMatrix out;
    out.rows.reserve(a.rows.size());
    for (const auto& row : a.rows) {
        out.rows.push_back({(row[0] - stats.mean[0]) / stats.stddev[0],
                            (row[1] - stats.mean[1]) / stats.stddev[1]});
    }
    return out;
}

EigenBasis eigen_basis(const CoordMatrix& centered, int k) {
    if (k != 1 && k != 2) throw ValidationError("k must be 1 or 2");
    const int n = centered.n_rows();
    if (n < 2) throw ValidationError("degenerate sub-dataset: fewer than 2 rows");
    check_finite(centered, "centered matrix");

    double c00 = 0, c01 = 0, c11 = 0;
    for (const auto& row : centered.rows) {
        c00 += row[0] * row[0];
        c01 += row[0] * row[1];
        c11 += row[1] * row[1];
    }
    c00 /= n - 1;
    c01 /= n - 1;
    c11 /= n - 1;

    // Closed-form symmetric 2x2 eigendecomposition via a Jacobi rotation; the
    // columns are orthonormal by construction.
    const double theta = 0.5 * std::atan2(2.0 * c01, c00 - c11);
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);

    double lambda0 = c00 * cs * cs + 2.0 * c01 * cs * sn + c11 * sn * sn;
    double lambda1 = c00 * sn * sn - 2.0 * c01 * cs * sn + c11 * cs * cs;
    std::array<double, 2> v0{cs, sn};
    std::array<double, 2> v1{-sn, cs};
    if (lambda1 > lambda0) {
        std::swap(lambda0, lambda1);
        std::swap(v0, v1);
    }
    // Deterministic sign: the dominant component of each column is positive.
    for (auto* v : {&v0, &v1}) {
        const int dom = (std::abs((*v)[0]) >= std::abs((*v)[1])) ? 0 : 1;
        if ((*v)[dom] < 0) {
            (*v)[0] = -(*v)[0];
            (*v)[1] = -(*v)[1];
        }
    }

    EigenBasis basis;
    basis.eigenvalues = {lambda0, lambda1};
    basis.vectors[0] = {v0[0], v1[0]};
    basis.vectors[1] = {v0[1], v1[1]};
    basis.k = k;
    return basis;
}

std::uint64_t basis_fingerprint(const EigenBasis& basis, const NormStats& stats) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto mix64 = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xFF;
            h *= 0x100000001B3ull;
        }
    };
    auto mixd = [&](double v) { mix64(std::bit_cast<std::uint64_t>(v)); };
    for (double v : stats.mean) mixd(v);
    for (double v : stats.stddev) mixd(v);
    for (double v : basis.eigenvalues) mixd(v);
    for (const auto& row : basis.vectors) {
        for (double v : row) mixd(v);
    }
    mix64(static_cast<std::uint64_t>(basis.k));
    return h;
}

EncryptedLabelSet encrypt_labels(const SubDataset& sub, const EigenBasis& basis,
                                 const NormStats& stats, std::uint64_t seed) {
    const int n = sub.coords.n_rows();
    if (n != static_cast<int>(sub.patch_ids.size())) {
        throw ValidationError("sub-dataset ids and coordinates differ in length");
    }
    const CoordMatrix centered = apply_stats(sub.coords, stats);
    const int k = basis.k;

    // A_e = centered * V_k, n x k.
    std::vector<std::array<double, 2>> transformed(n, {0.0, 0.0});
    double lo = 0, hi = 0;
    bool first = true;
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c) {
            const double e = centered.rows[i][0] * basis.vectors[0][c] +
                             centered.rows[i][1] * basis.vectors[1][c];
            transformed[i][c] = e;
            if (first) {
                lo = hi = e;
                first = false;
            } else {
                lo = std::min(lo, e);
                hi = std::max(hi, e);
            }
        }
    }

    EncryptedLabelSet enc;
    enc.patch_ids = sub.patch_ids;
    enc.basis_id = basis_fingerprint(basis, stats);
    enc.k = k;
    enc.records.reserve(n);

    Rng rng(seed);
    std::set<std::uint64_t> used_tokens;
    for (int i = 0; i < n; ++i) {
        EncryptedRecord rec;
        do {
            rec.token = rng.next();
        } while (!used_tokens.insert(rec.token).second);
        rec.components = transformed[i];
        // Pad missing components from the observed component range so every
        // record carries the same number of values as the original labels.
        for (int c = k; c < 2; ++c) rec.components[c] = rng.uniform(lo, hi);
        enc.records.push_back(rec);
    }
    return enc;
}

CoordMatrix decrypt_labels(const EncryptedLabelSet& enc, const EigenBasis& basis,
                           const NormStats& stats, std::int64_t patch_size) {
    if (patch_size <= 0) throw ValidationError("patch size must be positive");
    if (enc.basis_id != basis_fingerprint(basis, stats) || enc.k != basis.k) {
        throw ValidationError("basis mismatch: encrypted set was produced with a different basis");
    }

    const double p = static_cast<double>(patch_size);
    CoordMatrix out;
    out.rows.reserve(enc.records.size());
    for (const auto& rec : enc.records) {
        std::array<double, 2> estimate{0.0, 0.0};
        for (int j = 0; j < 2; ++j) {
            double acc = 0;
            for (int c = 0; c < basis.k; ++c) {  // padding components beyond k are dropped
                acc += rec.components[c] * basis.vectors[j][c];
            }
            const double denorm = acc * stats.stddev[j] + stats.mean[j];
            estimate[j] = static_cast<double>(std::llround(denorm / p)) * p;
        }
        out.rows.push_back(estimate);
    }
    return out;
}

std::array<double, 2> output_utility(const CoordMatrix& original, const CoordMatrix& estimated) {
    if (original.n_rows() != estimated.n_rows()) {
        throw ValidationError("utility inputs must be row-aligned");
    }
    if (original.n_rows() == 0) throw ValidationError("utility inputs are empty");

    std::array<double, 2> utility{0.0, 0.0};
    for (int axis = 0; axis < 2; ++axis) {
        std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> joint;
        for (int i = 0; i < original.n_rows(); ++i) {
            ++joint[{value_key(original.rows[i][axis]), value_key(estimated.rows[i][axis])}];
        }
        utility[axis] = mi_from_counts(joint, original.n_rows());
    }
    return utility;
}

double label_entropy(const CoordMatrix& values, int axis) {
    if (axis != 0 && axis != 1) throw ValidationError("axis must be 0 or 1");
    if (values.n_rows() == 0) throw ValidationError("entropy input is empty");
    std::map<std::int64_t, std::int64_t> counts;
    for (const auto& row : values.rows) ++counts[value_key(row[axis])];
    std::vector<std::int64_t> c;
    c.reserve(counts.size());
    for (const auto& [sym, cnt] : counts) c.push_back(cnt);
    return entropy_from_counts(c, values.n_rows());
}

void write_labels(std::ostream& out, const EncryptedLabelSet& enc) {
    out << "# r_hex,e1,e2\n";
    char hex[32];
    for (const auto& rec : enc.records) {
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(rec.token));
        out << hex << "," << fmt12(rec.components[0]) << "," << fmt12(rec.components[1]) << "\n";
    }
}

void write_basis(std::ostream& out, const EigenBasis& basis, const NormStats& stats) {
    out << "k=" << basis.k << "\n";
    out << "mean_x=" << fmt17(stats.mean[0]) << "\n";
    out << "mean_y=" << fmt17(stats.mean[1]) << "\n";
    out << "std_x=" << fmt17(stats.stddev[0]) << "\n";
    out << "std_y=" << fmt17(stats.stddev[1]) << "\n";
    out << "eigenvalue_0=" << fmt17(basis.eigenvalues[0]) << "\n";
    out << "eigenvalue_1=" << fmt17(basis.eigenvalues[1]) << "\n";
    out << "v00=" << fmt17(basis.vectors[0][0]) << "\n";
    out << "v01=" << fmt17(basis.vectors[0][1]) << "\n";
    out << "v10=" << fmt17(basis.vectors[1][0]) << "\n";
    out << "v11=" << fmt17(basis.vectors[1][1]) << "\n";
}

}  // namespace price
