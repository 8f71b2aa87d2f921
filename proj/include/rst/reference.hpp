#pragma once

#include "rst/canonical.hpp"
#include "rst/grid.hpp"
#include "rst/kernel.hpp"

namespace rst {

/// Galerkin projection of a radial kernel onto the tensor-product
/// piecewise-constant basis of `grid`, in canonical form.  The kernel is
/// centered on the grid's center cell (+h/2 per axis) so that every shift
/// between cell centers is an integer number of cells.  Entries approximate
/// h^d * p(|x - center|).
struct ReferenceTensor {
    CanonicalTensor tensor;
    GridSpec grid;
    KernelSpec kernel;
    QuadratureRule rule;

    int center_cell() const { return grid.center_cell(); }
    /// Kernel point value at integer cell offset from the center (rescaled
    /// Galerkin entry); offset may be any vector reachable on this grid.
    double value_at_offset(const std::vector<int>& offset) const;
    /// Rescaled center entry, the finite self-interaction value P(0).
    double center_value() const;
};

/// Build the rank-R canonical reference tensor; one shared axis vector per
/// quadrature term since the kernel is isotropic.  `order` generalizes to
/// d-dimensional lattices; grid evaluation elsewhere assumes d = 3.
ReferenceTensor build_reference_kernel(const GridSpec& grid, const QuadratureRule& rule,
                                       const KernelSpec& kernel, int order = 3,
                                       int threads = 1);

/// eps-driven convenience: quadrature targeted at [3h, diam(double box)].
ReferenceTensor build_reference_kernel(const GridSpec& grid, const KernelSpec& kernel,
                                       double eps, int order = 3, int threads = 1);

/// Max over sampled grid cells with |x - center| > exclusion of the relative
/// deviation of entry/h^3 from p(|x - center|).  Cells are enumerated
/// exhaustively when the grid is small, otherwise over a deterministic
/// sample (axes, diagonals, seeded random cells).
double kernel_pointwise_error(const ReferenceTensor& ref, double exclusion,
                              std::int64_t sample_budget = 1 << 20);

} // namespace rst
