#include "rst/canonical.hpp"

#include <cmath>

namespace rst {

CanonicalTensor::CanonicalTensor(std::vector<int> dims) : dims_(std::move(dims)) {
    require(!dims_.empty(), "CanonicalTensor: order must be >= 1");
    for (int d : dims_) require(d > 0, "CanonicalTensor: dims must be positive");
    weights_.resize(0);
    modes_.resize(dims_.size());
    for (std::size_t l = 0; l < dims_.size(); ++l) modes_[l].resize(dims_[l], 0);
}

CanonicalTensor::CanonicalTensor(std::vector<int> dims, Eigen::VectorXd weights,
                                 std::vector<Eigen::MatrixXd> modes)
    : dims_(std::move(dims)), weights_(std::move(weights)), modes_(std::move(modes)) {
    require(modes_.size() == dims_.size(), "CanonicalTensor: mode count mismatch");
    for (std::size_t l = 0; l < modes_.size(); ++l) {
        require(modes_[l].rows() == dims_[l], "CanonicalTensor: mode length mismatch");
        require(modes_[l].cols() == weights_.size(), "CanonicalTensor: rank mismatch");
    }
}

std::int64_t CanonicalTensor::size() const {
    std::int64_t s = 1;
    for (int d : dims_) s *= d;
    return s;
}

void CanonicalTensor::append_term(double weight, const std::vector<Eigen::VectorXd>& vecs) {
    require(vecs.size() == dims_.size(), "append_term: mode count mismatch");
    const int r = rank();
    weights_.conservativeResize(r + 1);
    weights_[r] = weight;
    for (std::size_t l = 0; l < dims_.size(); ++l) {
        require(vecs[l].size() == dims_[l], "append_term: vector length mismatch");
        modes_[l].conservativeResize(Eigen::NoChange, r + 1);
        modes_[l].col(r) = vecs[l];
    }
}

void CanonicalTensor::append_terms(const CanonicalTensor& other) {
    require(other.dims_ == dims_, "append_terms: dimension mismatch");
    const int r = rank(), ro = other.rank();
    weights_.conservativeResize(r + ro);
    weights_.tail(ro) = other.weights_;
    for (std::size_t l = 0; l < dims_.size(); ++l) {
        modes_[l].conservativeResize(Eigen::NoChange, r + ro);
        modes_[l].rightCols(ro) = other.modes_[l];
    }
}

double CanonicalTensor::entry(std::span<const int> idx) const {
    require(static_cast<int>(idx.size()) == order(), "entry: index order mismatch");
    double s = 0.0;
    for (int k = 0; k < rank(); ++k) {
        double p = weights_[k];
        for (int l = 0; l < order(); ++l) p *= modes_[l](idx[l], k);
        s += p;
    }
    return s;
}

double CanonicalTensor::entry(int i, int j, int k) const {
    const int idx[3] = {i, j, k};
    return entry(std::span<const int>(idx, 3));
}

void CanonicalTensor::absorb_weights() {
    for (int k = 0; k < rank(); ++k) {
        modes_[0].col(k) *= weights_[k];
        weights_[k] = 1.0;
    }
}

CanonicalTensor canonical_sum(const CanonicalTensor& a, const CanonicalTensor& b) {
    require(a.dims() == b.dims(), "canonical_sum: dimension mismatch");
    CanonicalTensor out = a;
    out.append_terms(b);
    return out;
}

CanonicalTensor scaled(const CanonicalTensor& a, double s) {
    CanonicalTensor out = a;
    out.weights() *= s;
    return out;
}

double canonical_inner(const CanonicalTensor& a, const CanonicalTensor& b) {
    require(a.dims() == b.dims(), "canonical_inner: dimension mismatch");
    if (a.rank() == 0 || b.rank() == 0) return 0.0;
    Eigen::MatrixXd g = Eigen::MatrixXd::Ones(a.rank(), b.rank());
    for (int l = 0; l < a.order(); ++l)
        g = g.cwiseProduct(a.mode(l).transpose() * b.mode(l));
    return a.weights().transpose() * g * b.weights();
}

double frobenius_norm(const CanonicalTensor& a) {
    return std::sqrt(std::max(0.0, canonical_inner(a, a)));
}

Eigen::VectorXd full_assemble(const CanonicalTensor& a, std::int64_t guard) {
    if (a.size() > guard)
        throw GuardError("full_assemble: tensor exceeds the dense guard");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size());
    accumulate_full(out, a, 1.0);
    return out;
}

void accumulate_full(Eigen::VectorXd& out, const CanonicalTensor& a, double s) {
    require(out.size() == a.size(), "accumulate_full: size mismatch");
    const int d = a.order();
    std::vector<int> idx(d, 0);
    for (int k = 0; k < a.rank(); ++k) {
        // iterate over all indices of modes 1..d-1; innermost mode-0 slab is
        // a contiguous axpy
        std::fill(idx.begin(), idx.end(), 0);
        const double w = s * a.weights()[k];
        std::int64_t off = 0;
        const std::int64_t n0 = a.dims()[0];
        for (;;) {
            double coef = w;
            for (int l = 1; l < d; ++l) coef *= a.mode(l)(idx[l], k);
            out.segment(off, n0) += coef * a.mode(0).col(k);
            int l = 1;
            for (; l < d; ++l) {
                if (++idx[l] < a.dims()[l]) break;
                idx[l] = 0;
            }
            if (l == d) break;
            off = 0;
            std::int64_t stride = n0;
            for (int m = 1; m < d; ++m) {
                off += idx[m] * stride;
                stride *= a.dims()[m];
            }
        }
    }
}

CanonicalTensor ones_tensor(const std::vector<int>& dims) {
    CanonicalTensor t(dims);
    std::vector<Eigen::VectorXd> vecs;
    for (int dl : dims) vecs.push_back(Eigen::VectorXd::Ones(dl));
    t.append_term(1.0, vecs);
    return t;
}

} // namespace rst
