#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rst/canonical.hpp"

namespace rst {

/// Orthogonal Tucker tensor: dense core (first index fastest) contracted with
/// column-orthonormal factor matrices.
class TuckerTensor {
public:
    TuckerTensor() = default;
    TuckerTensor(std::vector<int> dims, std::vector<int> ranks,
                 Eigen::VectorXd core, std::vector<Eigen::MatrixXd> factors);

    int order() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    const std::vector<int>& ranks() const { return ranks_; }
    int max_rank() const;
    const Eigen::VectorXd& core() const { return core_; }
    const Eigen::MatrixXd& factor(int l) const { return factors_[l]; }

private:
    std::vector<int> dims_;
    std::vector<int> ranks_;
    Eigen::VectorXd core_;
    std::vector<Eigen::MatrixXd> factors_;
};

struct TuckerOptions {
    double eps = 1e-8;           // per-mode relative singular value threshold
    std::vector<int> max_ranks;  // optional hard caps, one per mode
};

struct ModeSpectrum {
    int mode = 0;
    Eigen::VectorXd singular_values;
};

/// Reduced HOSVD: per-mode SVD of the weighted side matrices (columns scaled
/// by the full term magnitude), truncation at eps * sigma_max per mode, core
/// by projection.  Never forms the dense tensor.
TuckerTensor rhosvd(const CanonicalTensor& a, const TuckerOptions& opt,
                    std::vector<ModeSpectrum>* spectra = nullptr);

inline TuckerTensor canonical_to_tucker(const CanonicalTensor& a, double eps) {
    return rhosvd(a, TuckerOptions{eps, {}});
}

/// Exact canonical form of a Tucker tensor: the largest-rank mode absorbs the
/// core contraction, the remaining modes enumerate core fibers.  Fibers are
/// emitted in descending norm order; fibers below trim * max drop out.
CanonicalTensor tucker_to_canonical(const TuckerTensor& t, double trim = 0.0);

Eigen::VectorXd full_assemble(const TuckerTensor& t,
                              std::int64_t guard = std::int64_t(1) << 24);

/// canonical -> Tucker -> canonical at tolerance eps.
CanonicalTensor compress_canonical(const CanonicalTensor& a, double eps);

} // namespace rst
