#pragma once

#include "rst/errors.hpp"

namespace rst {

/// Uniform Cartesian grid axis for the computational box [-b,b]^3 with n
/// cells per axis (n even), mesh size h = 2b/n.  The doubled companion grid
/// keeps the same h and carries 2n cells on [-2b,2b]; reference kernels live
/// there so that shift-and-window stays pure index arithmetic.
struct GridSpec {
    int n = 0;          // cells per axis of the computational grid
    double b = 0.0;     // half-width of the computational box
    bool doubled = false;

    GridSpec() = default;
    GridSpec(int n_, double b_, bool doubled_ = false) : n(n_), b(b_), doubled(doubled_) {
        require(n > 0 && n % 2 == 0, "GridSpec: n must be positive and even");
        require(b > 0.0, "GridSpec: b must be positive");
    }

    double h() const { return 2.0 * b / n; }
    int points() const { return doubled ? 2 * n : n; }   // cells on this axis
    double extent() const { return doubled ? 2.0 * b : b; }

    // Cell centers; no cell straddles the origin (boundaries at multiples of h).
    double coord(int i) const { return -extent() + (i + 0.5) * h(); }

    // Cell whose center sits at +h/2; reference kernels are centered here so
    // that window shifts between cell centers are integers.
    int center_cell() const { return points() / 2; }
    double center_coord() const { return coord(center_cell()); }

    GridSpec companion() const { return GridSpec(n, b, true); }
    GridSpec base() const { return GridSpec(n, b, false); }
};

} // namespace rst
