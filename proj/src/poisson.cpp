#include "rst/poisson.hpp"

#include <cmath>

#include "rst/laplacian.hpp"

namespace rst {

PoissonSolver::PoissonSolver(int n, double h, int guard) : n_(n), h_(h) {
    require(n >= 3, "PoissonSolver: n must be >= 3");
    if (n > guard) throw GuardError("PoissonSolver: n exceeds the solver guard");
    constexpr double kPi = 3.14159265358979323846;
    s_.resize(n, n);
    eig_.resize(n);
    const double norm = std::sqrt(2.0 / (n + 1));
    for (int k = 0; k < n; ++k) {
        eig_[k] = -4.0 / (h * h) * std::pow(std::sin(kPi * (k + 1) / (2.0 * (n + 1))), 2);
        for (int i = 0; i < n; ++i)
            s_(i, k) = norm * std::sin(kPi * (i + 1) * (k + 1) / (n + 1.0));
    }
}

void PoissonSolver::mode_transform(Eigen::VectorXd& x, bool forward) const {
    const int n = n_;
    const Eigen::MatrixXd& m = s_;   // symmetric and orthogonal, S^T = S
    (void)forward;
    // mode 0: contiguous columns
    {
        Eigen::Map<Eigen::MatrixXd> view(x.data(), n, n * n);
        view = m * view;
    }
    // mode 1: per k-slab
    for (int k = 0; k < n; ++k) {
        Eigen::Map<Eigen::MatrixXd> slab(x.data() + static_cast<std::int64_t>(k) * n * n,
                                         n, n);
        slab = slab * m;   // S symmetric
    }
    // mode 2: treat as (n*n) x n
    {
        Eigen::Map<Eigen::MatrixXd> view(x.data(), n * n, n);
        view = view * m;
    }
}

Eigen::VectorXd PoissonSolver::solve(const Eigen::VectorXd& f) const {
    require(f.size() == static_cast<std::int64_t>(n_) * n_ * n_,
            "PoissonSolver: size mismatch");
    Eigen::VectorXd x = f;
    mode_transform(x, true);
    for (int k = 0; k < n_; ++k)
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i < n_; ++i)
                x[static_cast<std::int64_t>(k) * n_ * n_ + j * n_ + i] /=
                    (eig_[i] + eig_[j] + eig_[k]);
    mode_transform(x, false);
    return x;
}

double PoissonSolver::residual(const Eigen::VectorXd& u, const Eigen::VectorXd& f) const {
    const Eigen::VectorXd r = dense_laplacian_3d(u, n_, h_) - f;
    const double fn = f.norm();
    return fn > 0.0 ? r.norm() / fn : r.norm();
}

} // namespace rst
