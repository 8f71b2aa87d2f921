#pragma once

#include "rst/canonical.hpp"
#include "rst/grid.hpp"

namespace rst {

/// 1D second difference (1, -2, 1)/h^2 with homogeneous Dirichlet ends.
Eigen::VectorXd second_difference(const Eigen::VectorXd& v, double h);

/// Kronecker rank-3 discrete Laplacian applied to a canonical tensor: one
/// derivative per direction, so the rank multiplies by exactly d.
CanonicalTensor apply_laplacian(const CanonicalTensor& a, double h);

/// Dense 7-point stencil application (test oracle for small grids).
Eigen::VectorXd dense_laplacian_3d(const Eigen::VectorXd& u, int n, double h);

} // namespace rst
