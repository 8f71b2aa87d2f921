#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "rst/errors.hpp"

namespace rst {

/// Canonical (CP) tensor: value = sum_k  xi_k * u_k^(1) o ... o u_k^(d).
/// Mode l stores its vectors as the columns of a dims[l] x R matrix.
/// Rank-0 tensors are legal everywhere and behave as exact zeros.
class CanonicalTensor {
public:
    CanonicalTensor() = default;
    explicit CanonicalTensor(std::vector<int> dims);
    CanonicalTensor(std::vector<int> dims, Eigen::VectorXd weights,
                    std::vector<Eigen::MatrixXd> modes);

    int order() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }
    int rank() const { return static_cast<int>(weights_.size()); }
    std::int64_t size() const;

    const Eigen::VectorXd& weights() const { return weights_; }
    Eigen::VectorXd& weights() { return weights_; }
    const Eigen::MatrixXd& mode(int l) const { return modes_[l]; }
    Eigen::MatrixXd& mode(int l) { return modes_[l]; }

    void append_term(double weight, const std::vector<Eigen::VectorXd>& vecs);
    void append_terms(const CanonicalTensor& other);

    double entry(std::span<const int> idx) const;
    double entry(int i, int j, int k) const;

    /// Fold the scalar weights into mode 0 and set all weights to 1.
    void absorb_weights();

private:
    std::vector<int> dims_;
    Eigen::VectorXd weights_;               // R
    std::vector<Eigen::MatrixXd> modes_;    // d matrices, dims[l] x R
};

CanonicalTensor canonical_sum(const CanonicalTensor& a, const CanonicalTensor& b);
CanonicalTensor scaled(const CanonicalTensor& a, double s);

/// <A,B> = sum_{k,m} xi_k zeta_m prod_l <u_k^(l), w_m^(l)>, via per-mode Gram
/// matrices in O(d R_A R_B n).
double canonical_inner(const CanonicalTensor& a, const CanonicalTensor& b);

double frobenius_norm(const CanonicalTensor& a);

/// Dense evaluation, first index fastest.  Guarded against large sizes.
Eigen::VectorXd full_assemble(const CanonicalTensor& a,
                              std::int64_t guard = std::int64_t(1) << 24);

/// Accumulate  out += s * dense(A)  without forming a temporary.
void accumulate_full(Eigen::VectorXd& out, const CanonicalTensor& a, double s);

/// Rank-1 all-ones tensor of the given shape.
CanonicalTensor ones_tensor(const std::vector<int>& dims);

} // namespace rst
