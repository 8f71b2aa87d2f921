#pragma once

#include <Eigen/Dense>

#include "rst/grid.hpp"

namespace rst {

/// Exact cell integrals of a 1D Gaussian: entry i is
///   int_{cell i} exp(-t^2 (x - center)^2) dx,
/// evaluated through differences of the error integral.  All entries are
/// strictly positive; for t*h below 1e-8 the closed form cancels and the
/// midpoint value is used instead.
Eigen::VectorXd project_gaussian_mode(const GridSpec& grid, double t,
                                      double center = 0.0);

} // namespace rst
