#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "price/grid.hpp"

namespace price {

// Rows are the patches of one sub-dataset, columns the (x, y) coordinate
// features. Rows = samples keeps the covariance 2x2 and the eigen step cheap
// at any patch count.
struct CoordMatrix {
    std::vector<std::array<double, 2>> rows;

    int n_rows() const { return static_cast<int>(rows.size()); }
};

struct NormStats {
    std::array<double, 2> mean{0.0, 0.0};
    std::array<double, 2> stddev{1.0, 1.0};  // sample std; constant columns guard to 1
};

struct EigenBasis {
    std::array<double, 2> eigenvalues{0.0, 0.0};     // nonincreasing
    std::array<std::array<double, 2>, 2> vectors{};  // vectors[r][c]; column c is eigenvector c
    int k = 2;                                       // retained leading components
};

// One color class with its coordinates, row-aligned with patch_ids.
struct SubDataset {
    std::vector<int> patch_ids;
    CoordMatrix coords;
};

struct EncryptedRecord {
    std::uint64_t token = 0;             // unique per set; filename obfuscation only
    std::array<double, 2> components{};  // leading k transformed, trailing slots padding
};

struct EncryptedLabelSet {
    std::vector<EncryptedRecord> records;
    std::vector<int> patch_ids;    // private owner-side mapping, row-aligned
    std::uint64_t basis_id = 0;    // fingerprint of the (basis, stats) pair
    int k = 2;
};

SubDataset make_sub_dataset(const PatchSet& ps, const std::vector<int>& patch_ids);

// Columnwise (a - mean) / std with sample std; a zero-variance column records
// std 1 and centers to all zeros. Requires >= 2 rows.
std::pair<CoordMatrix, NormStats> normalize(const CoordMatrix& a);

// Center and scale by previously computed stats.
CoordMatrix apply_stats(const CoordMatrix& a, const NormStats& stats);

// Covariance = centered^T centered / (rows-1), closed-form symmetric 2x2
// eigendecomposition, eigenpairs sorted by nonincreasing eigenvalue.
EigenBasis eigen_basis(const CoordMatrix& centered, int k);

std::uint64_t basis_fingerprint(const EigenBasis& basis, const NormStats& stats);

// A_e = centered * V_k plus a seeded unique token per record; when k < 2 the
// missing component is padded from a seeded uniform over the observed
// component range.
EncryptedLabelSet encrypt_labels(const SubDataset& sub, const EigenBasis& basis,
                                 const NormStats& stats, std::uint64_t seed);

// Y_hat = A_e * V_k^T (padding dropped first), de-normalized, then snapped to
// the nearest multiple of the patch size.
CoordMatrix decrypt_labels(const EncryptedLabelSet& enc, const EigenBasis& basis,
                           const NormStats& stats, std::int64_t patch_size);

// Plug-in mutual information per axis between the empirical joint of
// (original, estimated) values; equals the label entropy exactly when every
// row is estimated exactly.
std::array<double, 2> output_utility(const CoordMatrix& original, const CoordMatrix& estimated);

// H(Y_axis) over the same value keying as output_utility.
double label_entropy(const CoordMatrix& values, int axis);

// Encrypted label file: `r_hex,e1,e2` at 12 significant digits.
void write_labels(std::ostream& out, const EncryptedLabelSet& enc);
// Sidecar: mean, std, eigenvalues, eigenvectors, k as key=value lines.
void write_basis(std::ostream& out, const EigenBasis& basis, const NormStats& stats);

}  // namespace price
