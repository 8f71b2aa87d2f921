#pragma once

#include <array>
#include <vector>

#include "rst/canonical.hpp"
#include "rst/reference.hpp"

namespace rst {

/// Rectangular lattice whose nodes coincide with grid cells: node k (0-based
/// per axis) sits at cell  origin[l] + k * stride  of the computational grid;
/// stride = a1/h must be a positive integer.  Slabs and other anisotropic
/// boxes carry per-axis node counts.
struct LatticeSpec {
    int d = 3;
    int L = 1;                 // nodes per axis (cubic shorthand)
    int stride = 1;
    std::vector<int> origin;   // cell index of node (0,...,0); size d
    std::vector<int> counts;   // per-axis node counts; defaults to L each

    LatticeSpec() = default;
    LatticeSpec(int d_, int L_, int stride_, std::vector<int> origin_);
    LatticeSpec(std::vector<int> counts_, int stride_, std::vector<int> origin_);
    static LatticeSpec centered(const GridSpec& grid, int d, int L, int stride);

    int count(int l) const { return counts[l]; }
    std::int64_t nodes() const;
    int node_cell(int l, int k) const { return origin[l] + k * stride; }
    void validate_on(const GridSpec& grid) const;
    double spacing(const GridSpec& grid) const { return stride * grid.h(); }
};

/// Charge tensors over the lattice index space (dims = L per mode).
CanonicalTensor charge_constant(int d, int L, double Z);
CanonicalTensor charge_checkerboard(int d, int L);              // z_k = prod (-1)^{k_l}
CanonicalTensor charge_dipole(int d, int L, double q_plus, double q_minus);  // rank 2

/// Window of a double-grid reference vector for a node at computational-grid
/// cell `node_cell`:  out[i] = ref[n + i - node_cell].
Eigen::VectorXd shift_window_mode(const Eigen::VectorXd& ref_mode, int node_cell,
                                  const GridSpec& grid);

/// Assembled constant-charge lattice potential; rank stays R for every L.
CanonicalTensor assemble_lattice_potential(const ReferenceTensor& ref,
                                           const LatticeSpec& lat, double Z,
                                           int threads = 1);

/// Variable charges in rank-R_Z canonical form; output rank <= R_Z * R.
CanonicalTensor assemble_weighted_lattice(const ReferenceTensor& ref,
                                          const LatticeSpec& lat,
                                          const CanonicalTensor& charges,
                                          int threads = 1);

struct LatticeDefect {
    LatticeSpec sub;
    double charge = 0.0;   // additive override (a vacancy adds a negative copy)
};

/// Composite lattice: base plus additive sub-lattices; rank adds per part.
CanonicalTensor assemble_defected(const ReferenceTensor& ref,
                                  const std::vector<LatticeDefect>& parts,
                                  int threads = 1);

/// Restriction of a grid potential to the lattice nodes, rescaled by 1/h^d;
/// rank is preserved.
CanonicalTensor trace_to_lattice(const CanonicalTensor& p, const LatticeSpec& lat,
                                 const GridSpec& grid);

/// E = Z^2/2 ( <P~, 1> - L^d * P(0) ) with P(0) the rescaled center entry of
/// the reference tensor; O(d R L) once the traces are built.
double lattice_energy_constant(const CanonicalTensor& traced, const ReferenceTensor& ref,
                               const LatticeSpec& lat, double Z);

/// E = 1/2 ( <P~, Z> - P(0) <Z, Z> ) for canonical charges; O(d R_Z R L).
double lattice_energy_variable(const CanonicalTensor& traced, const ReferenceTensor& ref,
                               const CanonicalTensor& charges);

enum class OracleKernel { Analytic, Discrete };

/// O(N^2) pairwise interaction energy.  Discrete mode reads the reference
/// tensor at the separation's grid offset (the values the assembled sum is
/// made of); analytic mode evaluates the kernel profile.
double brute_force_energy(const std::vector<std::array<double, 3>>& centers,
                          const std::vector<double>& charges, OracleKernel mode,
                          const ReferenceTensor* ref = nullptr,
                          std::int64_t pair_guard = 40000);

/// Pairwise lattice energy grouped by offset multiplicity, O(L^3 R); equals
/// the naive pair sum for translation-invariant kernels.
double lattice_energy_oracle(const LatticeSpec& lat, const GridSpec& grid, double Z,
                             OracleKernel mode, const ReferenceTensor* ref = nullptr);

} // namespace rst
