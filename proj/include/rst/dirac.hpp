#pragma once

#include "rst/poisson.hpp"
#include "rst/rs.hpp"

namespace rst {

/// Discretized Dirac delta  delta_h = -(1/4pi) Delta_h P_R  with its exact
/// termwise split into short and long parts.
struct DiracDelta {
    CanonicalTensor delta_h;   // rank 3R
    CanonicalTensor delta_s;   // rank 3R_s
    CanonicalTensor delta_l;   // rank 3R_l
    SplitSpec spec;
};

/// Single-kernel delta on the computational grid; Newton family only.
DiracDelta dirac_delta(const ReferenceTensor& ref, const SplitSpec& spec);

/// Many-particle delta: localized short replicas plus the compressed
/// long-range part of -(1/4pi) Delta_h applied to the collective potential.
struct ManyDelta {
    RSTensor short_replicas;        // windows of the short reference (potential part)
    CanonicalTensor delta_l;        // from the compressed long collective potential
    int tucker_rank = 0;
};
ManyDelta dirac_delta_many(const ParticleSystem& sys, const ReferenceTensor& ref,
                           const SplitSpec& spec, double eps, int m0 = 0,
                           int threads = 1);

/// Energy-preserving regularized right-hand side rho_long = -eps_m Delta u_long
/// built from the compressed long-range collective potential; u_short stays
/// separate for solution reassembly.
struct RegularizedRHS {
    CanonicalTensor rho_long;
    CanonicalTensor u_long;         // compressed long part (grid values)
    RSTensor field;                 // carries the short part
    double eps_m = 1.0;
};
RegularizedRHS build_regularized_rhs(const CollectiveField& field, double eps_m);

struct SolveCheck {
    Eigen::VectorXd solution;
    double residual = 0.0;          // relative, against the dense 7-point system
    double recovery_error = 0.0;    // relative, against the reference grid data
};

/// Solve the free-space discrete problem  -eps_m Delta_h u = rho  and compare
/// with the stored companion field.
SolveCheck free_space_solve_check(const CanonicalTensor& rho, const CanonicalTensor& companion,
                                  const GridSpec& grid, double eps_m, int guard = 128);

} // namespace rst
