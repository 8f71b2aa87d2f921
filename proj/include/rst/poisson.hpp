#pragma once

#include <Eigen/Dense>

#include "rst/errors.hpp"

namespace rst {

/// Direct solver for the 7-point Laplacian with homogeneous Dirichlet ends,
/// diagonalized by the discrete sine transform per mode.  Small grids only.
class PoissonSolver {
public:
    PoissonSolver(int n, double h, int guard = 128);

    /// Solve  Delta_h u = f  (f flat, first index fastest).
    Eigen::VectorXd solve(const Eigen::VectorXd& f) const;

    /// Relative residual  |Delta_h u - f| / |f|  of a candidate solution.
    double residual(const Eigen::VectorXd& u, const Eigen::VectorXd& f) const;

    int n() const { return n_; }

private:
    int n_;
    double h_;
    Eigen::MatrixXd s_;       // orthonormal sine transform
    Eigen::VectorXd eig_;     // 1D eigenvalues of the second difference
    void mode_transform(Eigen::VectorXd& x, bool forward) const;
};

} // namespace rst
