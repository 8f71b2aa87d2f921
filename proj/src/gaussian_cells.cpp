#include "rst/gaussian_cells.hpp"

#include <cmath>

namespace rst {
namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// int_{lo}^{hi} e^{-s^2} ds / t for 0 <= lo < hi, stable for large arguments:
// erf differences cancel once both ends exceed ~1, erfc differences do not.
double gauss_cell_positive(double lo, double hi, double t) {
    if (lo > 1.0)
        return (kSqrtPi / 2.0) * (std::erfc(lo) - std::erfc(hi)) / t;
    return (kSqrtPi / 2.0) * (std::erf(hi) - std::erf(lo)) / t;
}

} // namespace

Eigen::VectorXd project_gaussian_mode(const GridSpec& grid, double t, double center) {
    require(t > 0.0, "project_gaussian_mode: t must be > 0");
    const int n = grid.points();
    const double h = grid.h();
    Eigen::VectorXd v(n);

    if (t * h < 1e-8) {
        for (int i = 0; i < n; ++i) {
            const double x = grid.coord(i) - center;
            v[i] = h * std::exp(-t * t * x * x);
        }
        return v;
    }

    for (int i = 0; i < n; ++i) {
        double lo = (grid.coord(i) - 0.5 * h - center) * t;
        double hi = lo + h * t;
        if (hi <= 0.0) {           // mirror cells left of the center
            const double tmp = -lo;
            lo = -hi;
            hi = tmp;
        } else if (lo < 0.0) {     // cell straddling the center
            v[i] = gauss_cell_positive(0.0, -lo, t) + gauss_cell_positive(0.0, hi, t);
            continue;
        }
        v[i] = gauss_cell_positive(lo, hi, t);
    }
    return v;
}

} // namespace rst
