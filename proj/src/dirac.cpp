#include "rst/dirac.hpp"

#include <cmath>

#include "rst/laplacian.hpp"

namespace rst {
namespace {

constexpr double kFourPi = 4.0 * 3.14159265358979323846;

} // namespace

DiracDelta dirac_delta(const ReferenceTensor& ref, const SplitSpec& spec) {
    require(ref.kernel.newton_like(), "dirac_delta: Newton-family kernel required");
    require(!ref.grid.doubled, "dirac_delta: expects the computational-grid reference");
    const double h = ref.grid.h();

    SplitReference split = split_reference(ref, spec);
    DiracDelta d;
    d.spec = spec;
    d.delta_s = scaled(apply_laplacian(split.short_part, h), -1.0 / kFourPi);
    d.delta_l = scaled(apply_laplacian(split.long_part, h), -1.0 / kFourPi);
    // Identical term order: short terms first, then long, exactly the
    // concatenation delta_h = delta_s + delta_l.
    d.delta_h = canonical_sum(d.delta_s, d.delta_l);
    return d;
}

ManyDelta dirac_delta_many(const ParticleSystem& sys, const ReferenceTensor& ref,
                           const SplitSpec& spec, double eps, int m0, int threads) {
    require(ref.kernel.newton_like(), "dirac_delta_many: Newton-family kernel required");
    CollectiveField f = build_collective_field(sys, ref, spec, eps, m0, threads);
    ManyDelta out;
    out.short_replicas = f.rs;
    out.delta_l = scaled(apply_laplacian(f.long_compressed, ref.grid.h()), -1.0 / kFourPi);
    out.tucker_rank = f.tucker_rank;
    return out;
}

RegularizedRHS build_regularized_rhs(const CollectiveField& field, double eps_m) {
    require(eps_m > 0.0, "build_regularized_rhs: eps_m must be > 0");
    RegularizedRHS r;
    r.eps_m = eps_m;
    r.u_long = field.long_compressed;
    r.field = field.rs;
    r.rho_long = scaled(apply_laplacian(field.long_compressed, field.rs.grid.h()), -eps_m);
    return r;
}

SolveCheck free_space_solve_check(const CanonicalTensor& rho, const CanonicalTensor& companion,
                                  const GridSpec& grid, double eps_m, int guard) {
    require(rho.order() == 3, "free_space_solve_check: 3D only");
    const int n = grid.n;
    PoissonSolver solver(n, grid.h(), guard);

    const Eigen::VectorXd f = full_assemble(rho);
    // -eps_m Delta u = rho  ->  Delta u = -rho / eps_m
    const Eigen::VectorXd u = solver.solve(Eigen::VectorXd(-f / eps_m));

    SolveCheck chk;
    chk.residual = solver.residual(u, Eigen::VectorXd(-f / eps_m));
    if (chk.residual > 1e-10)
        throw NumericalError("free_space_solve_check: residual above 1e-10");
    chk.solution = u;
    const Eigen::VectorXd want = full_assemble(companion);
    const double wn = want.norm();
    chk.recovery_error = wn > 0.0 ? (u - want).norm() / wn : u.norm();
    return chk;
}

} // namespace rst
