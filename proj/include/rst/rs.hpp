#pragma once

#include <array>
#include <string>
#include <vector>

#include "rst/lattice.hpp"
#include "rst/particles.hpp"
#include "rst/tucker.hpp"

namespace rst {

/// Partition of the quadrature terms into long-range (flat Gaussians) and
/// short-range (localized) parts.
struct SplitSpec {
    enum class Mode { ByInterval, BySupport };
    Mode mode = Mode::ByInterval;
    double sigma = 1.0;     // short-range effective support radius (by-support)
    double delta = 1e-4;    // cutoff magnitude threshold

    static SplitSpec by_interval() { return {Mode::ByInterval, 1.0, 1e-4}; }
    static SplitSpec by_support(double sigma, double delta = 1e-4);
};

struct SplitReference {
    CanonicalTensor long_part;    // P_Rl, term subset of the reference
    CanonicalTensor short_part;   // P_Rs; long + short = reference exactly
    std::vector<int> long_idx, short_idx;
    int R_l() const { return static_cast<int>(long_idx.size()); }
    int R_s() const { return static_cast<int>(short_idx.size()); }
};

/// Term-level split of a reference tensor: by-interval keeps t_k <= 1 long;
/// by-support keeps terms short once exp(-t_k^2 sigma^2) <= delta.
SplitReference split_reference(const ReferenceTensor& ref, const SplitSpec& spec);

/// Range-separated collective potential on the computational grid: a low-rank
/// canonical long part plus one shared short-range reference replicated to the
/// particle centers with per-particle charges, truncated to a cubic window of
/// radius gamma-1 cells (support diameter 2(gamma-1) <= 2 gamma).  Only half
/// of each symmetric short window is stored.
struct RSTensor {
    GridSpec grid;
    CanonicalTensor long_part;                  // weights absorbed into mode 0
    Eigen::MatrixXd short_half;                 // gamma x R0, entries [c..c+gamma-1]
    Eigen::VectorXd short_weights;              // R0
    int gamma = 0;
    std::vector<std::array<int, 3>> centers;    // snapped cell indices
    Eigen::VectorXd charges;

    int R0() const { return static_cast<int>(short_weights.size()); }
    int particle_count() const { return static_cast<int>(centers.size()); }
    double short_mode_value(int term, int offset) const;   // |offset| <= gamma-1
    double entry(int i, int j, int k) const;               // long + short value
};

/// Direct sum of shift-and-window transforms of the split reference: the long
/// part keeps rank R_l * N (compression is a separate step), the short parts
/// are cumulated as localized replicas.
RSTensor collective_potential(const ParticleSystem& sys, const ReferenceTensor& ref,
                              const SplitSpec& spec, int threads = 1);

Eigen::VectorXd full_assemble_rs(const RSTensor& rs,
                                 std::int64_t guard = std::int64_t(1) << 24);

struct CompressResult {
    CanonicalTensor tensor;
    bool compressed = true;
    int tucker_rank = 0;      // max Tucker rank seen in the final pass
    std::string note;
};

/// Add-and-compress: split terms into m0 batches, compress each to Tucker and
/// back, then merge pairwise with recompression.
CompressResult compress_long_range(const CanonicalTensor& long_part, double eps, int m0);

/// Everything rs_energy and the force driver need: the RS tensor, its
/// compressed long part and the long-range reference data.
struct CollectiveField {
    ParticleSystem sys;
    ReferenceTensor ref;          // double-grid reference
    SplitReference split;
    RSTensor rs;
    CanonicalTensor long_compressed;
    double ref_long_center = 0.0;   // P_Rl(0), rescaled by 1/h^3
    double compress_eps = 0.0;
    int tucker_rank = 0;
};

CollectiveField build_collective_field(const ParticleSystem& sys, const ReferenceTensor& ref,
                                       const SplitSpec& spec, double eps, int m0 = 0,
                                       int threads = 1);

/// E = 1/2 <z, p_l> - P_Rl(0)/2 sum z_j^2 from the long-range data alone.
/// Warns (via status) when the particle separation undercuts the short-range
/// support radius.
struct EnergyResult {
    double energy = 0.0;
    bool separation_ok = true;
    double est_error_bound = 0.0;   // short-range leakage estimate when not ok
};
EnergyResult rs_energy(const CollectiveField& field);

/// Per-direction discrete gradient: mode-wise central differences on the long
/// part plus locally differentiated short-range replicas.
std::array<CanonicalTensor, 3> rs_gradient(const RSTensor& rs);

enum class ForceDifference { Backward, Central };

/// Approach (B): forces from one-cell displacements of the energy functional,
/// recomputing only the moved particle's long-range replica.
std::vector<std::array<double, 3>> rs_forces(const CollectiveField& field,
                                             ForceDifference diff = ForceDifference::Backward);

/// F_j = z_j sum_{k != j} z_k (x_j - x_k)/|x_j - x_k|^3 (standard convention);
/// half_convention halves it as printed in some references.
std::vector<std::array<double, 3>> direct_force_oracle(const ParticleSystem& sys,
                                                       bool half_convention = false);

struct StorageReport {
    std::int64_t long_scalars = 0;
    std::int64_t short_list_scalars = 0;
    std::int64_t short_ref_scalars = 0;
    std::int64_t total = 0;
    std::int64_t bound = 0;          // d R_L n + (d+1) N + d R0 gamma
    std::int64_t dense_scalars = 0;  // n^3 comparison
};
StorageReport storage_report(const RSTensor& rs);

} // namespace rst
