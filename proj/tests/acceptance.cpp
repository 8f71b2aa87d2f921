// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <functional>
#include <string>
#include <vector>

#include "rst/dirac.hpp"
#include "rst/io.hpp"
#include "rst/lattice.hpp"
#include "rst/poisson.hpp"
#include "rst/rs.hpp"

using namespace rst;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    std::string name;
    std::vector<std::string> notes;
    bool ok = true;

    Criterion(int id_, std::string name_) : id(id_), name(std::move(name_)) {}
    void check(bool cond, const std::string& what) {
        if (!cond) ok = false;
        notes.push_back(std::string(cond ? "ok" : "FAILED") + ": " + what);
    }
    template <typename... Args>
    void checkf(bool cond, const char* fmt, Args... args) {
        char buf[256];
        std::snprintf(buf, sizeof buf, fmt, args...);
        check(cond, buf);
    }
};

void run(Criterion& c, const std::function<void(Criterion&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.check(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
    if (!c.ok) ++g_failures;
    std::printf("%s  criterion %2d: %s  [%.2f s]\n", c.ok ? "PASS" : "FAIL", c.id,
                c.name.c_str(), dt);
    for (const auto& n : c.notes) std::printf("        %s\n", n.c_str());
    std::fflush(stdout);
}

double max_rel_on_interval(const QuadratureRule& r, double lo, double hi, int samples) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double z = lo * std::pow(hi / lo, i / double(samples - 1));
        worst = std::max(worst, std::abs(r.evaluate(z) * z - 1.0));
    }
    return worst;
}

Eigen::VectorXd lattice_direct_sum(const ReferenceTensor& ref, const LatticeSpec& lat,
                                   const CanonicalTensor* charges, double Z) {
    const int n = ref.grid.n;
    const int d = lat.d;
    std::int64_t total = 1;
    for (int l = 0; l < d; ++l) total *= n;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(total);
    std::vector<int> node(d, 0);
    for (;;) {
        double zk = Z;
        if (charges) {
            zk = 0.0;
            for (int m = 0; m < charges->rank(); ++m) {
                double p = charges->weights()[m];
                for (int l = 0; l < d; ++l) p *= charges->mode(l)(node[l], m);
                zk += p;
            }
        }
        std::vector<Eigen::MatrixXd> modes(d);
        for (int l = 0; l < d; ++l)
            modes[l] = ref.tensor.mode(l).middleRows(n - lat.node_cell(l, node[l]), n);
        accumulate_full(acc,
                        CanonicalTensor(std::vector<int>(d, n), ref.tensor.weights(),
                                        std::move(modes)),
                        zk);
        int l = 0;
        for (; l < d; ++l) {
            if (++node[l] < lat.count(l)) break;
            node[l] = 0;
        }
        if (l == d) break;
    }
    return acc;
}

double lattice_energy_tensor_path(const GridSpec& g, const LatticeSpec& lat,
                                  const ReferenceTensor& ref, double Z) {
    const CanonicalTensor p = assemble_lattice_potential(ref, lat, Z);
    const CanonicalTensor tr = trace_to_lattice(p, lat, g);
    return lattice_energy_constant(tr, ref, lat, Z);
}

} // namespace

int main() {
    std::printf("acceptance suite\n");

    {
        Criterion c(1, "sinc-quadrature convergence on r in [1e-2, 10]");
        run(c, [](Criterion& c) {
            double prev = 0.0;
            for (int M : {8, 16, 32, 64}) {
                const QuadratureRule r =
                    build_quadrature(KernelSpec::newton(), M, 1e-2, 10.0);
                const double err = max_rel_on_interval(r, 1e-2, 10.0, 3000);
                if (prev > 0.0)
                    c.checkf(err <= 0.1 * prev, "M=%d maxrel %.2e <= 0.1 * %.2e", M, err,
                             prev);
                else
                    c.checkf(true, "M=%d maxrel %.2e", M, err);
                prev = err;
            }
            const QuadratureRule r35 = build_quadrature(KernelSpec::newton(), 17);
            const double e35 = max_rel_on_interval(r35, 1e-2, 10.0, 3000);
            c.checkf(r35.rank() <= 35 && e35 <= 1e-5, "R=%d (<=35), err %.2e <= 1e-5",
                     r35.rank(), e35);
        });
    }

    {
        Criterion c(2, "kernel rank pattern at eps=1e-6, n = 1024..8192, b=10");
        run(c, [](Criterion& c) {
            int prev_rank = 0;
            for (int n : {1024, 2048, 4096, 8192}) {
                const GridSpec g(n, 10.0);
                const ReferenceTensor ref =
                    build_reference_kernel(g, KernelSpec::newton(), 1e-6);
                const int R = ref.tensor.rank();
                if (prev_rank > 0) {
                    const int inc = R - prev_rank;
                    c.checkf(inc >= 0 && inc <= 4, "n=%d rank %d (+%d per doubling)", n,
                             R, inc);
                } else {
                    c.checkf(R >= 30 && R <= 50, "n=%d rank %d (consistent with 34..42)",
                             n, R);
                }
                prev_rank = R;
                if (n == 1024) {
                    const double err = kernel_pointwise_error(ref, 10.0 * g.h(), 1 << 18);
                    c.checkf(err <= 1e-5, "n=1024 pointwise err %.2e <= 1e-5 beyond 10h",
                             err);
                }
            }
        });
    }

    {
        Criterion c(3, "assembled lattice equals the direct replica sum");
        run(c, [](Criterion& c) {
            {
                const GridSpec g(128, 16.0);
                const ReferenceTensor ref =
                    build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-6);
                const LatticeSpec lat = LatticeSpec::centered(g, 3, 4, 16);
                const CanonicalTensor p = assemble_lattice_potential(ref, lat, 1.0);
                c.checkf(p.rank() == ref.tensor.rank(), "d=3 rank stays R=%d",
                         p.rank());
                const Eigen::VectorXd want = lattice_direct_sum(ref, lat, nullptr, 1.0);
                const double err = (full_assemble(p, std::int64_t(1) << 25) - want)
                                       .cwiseAbs()
                                       .maxCoeff() /
                                   want.cwiseAbs().maxCoeff();
                c.checkf(err <= 1e-12, "d=3 L=4 n=128 direct-sum gap %.2e <= 1e-12", err);
            }
            {
                const GridSpec g(32, 4.0);
                const QuadratureRule rule = build_quadrature(
                    KernelSpec::newton(), 10, 3.0 * g.h(), 4.0 * g.extent());
                const ReferenceTensor ref = build_reference_kernel(
                    g.companion(), rule, KernelSpec::newton(), 4);
                const LatticeSpec lat = LatticeSpec::centered(g, 4, 3, 8);
                const CanonicalTensor p = assemble_lattice_potential(ref, lat, 1.0);
                c.checkf(p.rank() == ref.tensor.rank(), "d=4 rank stays R=%d", p.rank());
                const Eigen::VectorXd want = lattice_direct_sum(ref, lat, nullptr, 1.0);
                const double err = (full_assemble(p, std::int64_t(1) << 25) - want)
                                       .cwiseAbs()
                                       .maxCoeff() /
                                   want.cwiseAbs().maxCoeff();
                c.checkf(err <= 1e-12, "d=4 L=3 n=32 direct-sum gap %.2e <= 1e-12", err);
            }
        });
    }

    {
        Criterion c(4, "variable-charge lattices match the weighted oracle");
        run(c, [](Criterion& c) {
            const GridSpec g(128, 16.0);
            const ReferenceTensor ref =
                build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-6);
            const LatticeSpec lat = LatticeSpec::centered(g, 3, 4, 16);
            const CanonicalTensor boards[2] = {charge_checkerboard(3, 4),
                                               charge_dipole(3, 4, 1.0, 0.6)};
            const char* names[2] = {"checkerboard", "dipole"};
            for (int t = 0; t < 2; ++t) {
                const CanonicalTensor p = assemble_weighted_lattice(ref, lat, boards[t]);
                c.checkf(p.rank() <= boards[t].rank() * ref.tensor.rank(),
                         "%s rank %d <= R_Z R = %d", names[t], p.rank(),
                         boards[t].rank() * ref.tensor.rank());
                const Eigen::VectorXd want =
                    lattice_direct_sum(ref, lat, &boards[t], 0.0);
                const double err = (full_assemble(p, std::int64_t(1) << 25) - want)
                                       .cwiseAbs()
                                       .maxCoeff() /
                                   want.cwiseAbs().maxCoeff();
                c.checkf(err <= 1e-12, "%s direct-sum gap %.2e <= 1e-12", names[t], err);
            }
        });
    }

    {
        Criterion c(5, "lattice energies: oracle identity, analytic value, paper row");
        run(c, [](Criterion& c) {
            // L in {2,4,8,16}, spacing 1 bohr, n = 256 L capped at desk scale
            for (int L : {2, 4, 8, 16}) {
                const int stride = 16;
                const int n = std::min(256 * L, 4096);
                const GridSpec g(n, n / 32.0);   // h = 1/16, spacing 1
                const ReferenceTensor ref =
                    build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-6);
                const LatticeSpec lat = LatticeSpec::centered(g, 3, L, stride);
                const double e = lattice_energy_tensor_path(g, lat, ref, 1.0);
                const double disc =
                    lattice_energy_oracle(lat, g, 1.0, OracleKernel::Discrete, &ref);
                c.checkf(std::abs(e - disc) / std::abs(disc) <= 1e-9,
                         "L=%d tensor vs discrete oracle gap %.2e <= 1e-9", L,
                         std::abs(e - disc) / std::abs(disc));
            }
            // L=2 vs analytic with h-halving improvement
            const double analytic = 12.0 + 12.0 / std::sqrt(2.0) + 4.0 / std::sqrt(3.0);
            double prev_gap = 0.0;
            for (int stride : {8, 16, 32}) {
                const int n = 64 * stride / 8;
                const GridSpec g(n, n / (2.0 * stride));   // h = 1/stride, b = n h / 2
                const ReferenceTensor ref =
                    build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-9);
                const LatticeSpec lat = LatticeSpec::centered(g, 3, 2, stride);
                const double e = lattice_energy_tensor_path(g, lat, ref, 1.0);
                const double gap = std::abs(e - analytic) / analytic;
                if (stride == 8)
                    c.checkf(gap < 2e-4, "L=2 h=1/8 analytic gap %.2e", gap);
                if (prev_gap > 0.0)
                    c.checkf(gap < prev_gap / 3.0,
                             "L=2 h=1/%d analytic gap %.2e (improves >= 3x)", stride,
                             gap);
                prev_gap = gap;
            }
            // L=32 row of the published energy table (2-bohr spacing)
            {
                const int L = 32, stride = 16;
                const int n = 2048;                 // h = 1/8, spacing 2
                const GridSpec g(n, n / 16.0);
                const ReferenceTensor ref =
                    build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-6);
                const LatticeSpec lat = LatticeSpec::centered(g, 3, L, stride);
                const double e = lattice_energy_tensor_path(g, lat, ref, 1.0);
                const double oracle =
                    lattice_energy_oracle(lat, g, 1.0, OracleKernel::Analytic, &ref);
                c.checkf(std::abs(e - oracle) / oracle <= 1e-3,
                         "L=32 tensor %.6e vs analytic oracle %.6e", e, oracle);
                c.checkf(e > 1.45e7 && e < 1.65e7,
                         "L=32 energy %.4e consistent with the published 1.5e7", e);
            }
        });
    }

    {
        Criterion c(6, "assembled summation time grows at most 2.5x per L doubling");
        run(c, [](Criterion& c) {
            const GridSpec g(256, 32.0);
            const ReferenceTensor ref =
                build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-6);
            auto time_assembly = [&](int L) {
                const LatticeSpec lat = LatticeSpec::centered(g, 3, L, 2);
                // warm up once, then median of 5 timed repeats
                volatile double sink = 0.0;
                std::vector<double> times;
                for (int rep = 0; rep < 6; ++rep) {
                    const auto t0 = std::chrono::steady_clock::now();
                    for (int inner = 0; inner < 40; ++inner) {
                        const CanonicalTensor p =
                            assemble_lattice_potential(ref, lat, 1.0);
                        sink += p.mode(0)(0, 0);
                    }
                    const double dt = std::chrono::duration<double>(
                                          std::chrono::steady_clock::now() - t0)
                                          .count();
                    if (rep > 0) times.push_back(dt);
                }
                std::sort(times.begin(), times.end());
                return times[times.size() / 2];
            };
            const double t16 = time_assembly(16);
            const double t32 = time_assembly(32);
            const double t64 = time_assembly(64);
            c.checkf(t32 / t16 <= 2.5, "t(32)/t(16) = %.2f <= 2.5", t32 / t16);
            c.checkf(t64 / t32 <= 2.5, "t(64)/t(32) = %.2f <= 2.5", t64 / t32);
        });
    }

    {
        Criterion c(7, "RS energy for N=100 against the analytic pairwise oracle");
        run(c, [](Criterion& c) {
            const GridSpec g(256, 16.0);
            const ReferenceTensor ref =
                build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-6);
            const double sigma = 0.65;
            const ParticleSystem sys =
                random_particles(g, 100, 3.0 * sigma + g.h(), 0.2, 1.2, 2024);
            CollectiveField f = build_collective_field(
                sys, ref, SplitSpec::by_support(sigma, 1e-4), 1e-6);
            const EnergyResult e = rs_energy(f);
            c.checkf(e.separation_ok, "min separation %.3f respects sigma %.2f",
                     sys.min_separation, sigma);
            const double want = brute_force_energy(sys.positions, sys.charges,
                                                   OracleKernel::Analytic, &ref);
            c.checkf(std::abs(e.energy - want) / std::abs(want) <= 1e-3,
                     "energy %.8e vs oracle %.8e (gap %.2e <= 1e-3)", e.energy, want,
                     std::abs(e.energy - want) / std::abs(want));
            // bitwise invariance under short-range perturbation
            f.rs.short_half.setConstant(123.0);
            const EnergyResult e2 = rs_energy(f);
            c.check(e2.energy == e.energy,
                    "energy is bitwise invariant under short-range changes");
        });
    }

    {
        Criterion c(8, "compressed long-range rank is uniform in N");
        run(c, [](Criterion& c) {
            const GridSpec g(256, 16.0);
            const ReferenceTensor ref =
                build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-6);
            std::vector<int> ranks;
            for (int N : {50, 100, 200}) {
                const ParticleSystem sys = random_particles(g, N, 0.9, 0.2, 1.2, 99);
                const CollectiveField f = build_collective_field(
                    sys, ref, SplitSpec::by_interval(), 1e-4);
                ranks.push_back(f.tucker_rank);
                c.checkf(true, "N=%d tucker rank %d (uncompressed %d)", N,
                         f.tucker_rank, f.rs.long_part.rank());
            }
            c.checkf(ranks[2] <= 1.5 * ranks[0],
                     "rank(200)/rank(50) = %.2f <= 1.5",
                     double(ranks[2]) / ranks[0]);
        });
    }

    {
        Criterion c(9, "gradients and approach-B forces");
        run(c, [](Criterion& c) {
            // gradient of the single kernel vs -x/r^3, improving as O(h^2)
            double prev = 0.0;
            for (int n : {128, 256}) {
                const GridSpec g(n, 16.0);
                const ReferenceTensor ref =
                    build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-8);
                const double x0 = g.coord(g.n / 2);
                const ParticleSystem one = make_particle_system(g, {{x0, x0, x0}}, {1.0});
                const RSTensor rs =
                    collective_potential(one, ref, SplitSpec::by_support(1e-9, 0.5));
                const auto grad = rs_gradient(rs);
                const double h3 = std::pow(g.h(), 3);
                double worst = 0.0;
                // fixed physical probes (beyond 10h on every grid in the sweep)
                const int ax = static_cast<int>(std::lround(3.0 / g.h()));
                const int dg = static_cast<int>(std::lround(2.0 / g.h()));
                const std::array<int, 3> probes[2] = {{ax, 0, 0}, {dg, dg, dg}};
                for (const auto& off : probes) {
                    double x[3], r2 = 0.0;
                    for (int l = 0; l < 3; ++l) {
                        x[l] = off[l] * g.h();
                        r2 += x[l] * x[l];
                    }
                    const double r3 = r2 * std::sqrt(r2);
                    for (int dir = 0; dir < 3; ++dir) {
                        if (off[dir] == 0) continue;
                        const double got =
                            grad[dir].entry(one.cells[0][0] + off[0],
                                            one.cells[0][1] + off[1],
                                            one.cells[0][2] + off[2]) /
                            h3;
                        const double want = -x[dir] / r3;
                        worst = std::max(worst, std::abs(got - want) / std::abs(want));
                    }
                }
                c.checkf(worst < 2e-2, "n=%d gradient gap %.2e at r in {2sqrt3, 3}", n,
                         worst);
                if (prev > 0.0)
                    c.checkf(worst < prev / 2.5,
                             "gradient gap improves %.1fx per halving (O(h^2))",
                             prev / worst);
                prev = worst;
            }
            // forces vs the pairwise oracle at n=256, O(h) refinement
            std::vector<std::array<double, 3>> pts;
            std::mt19937_64 rng(7);
            std::uniform_int_distribution<int> cellpick(-28, 28);
            while (pts.size() < 20) {
                // positions on the common h=0.25 lattice so every grid snaps evenly
                std::array<double, 3> p = {cellpick(rng) * 0.25 + 0.125,
                                           cellpick(rng) * 0.25 + 0.125,
                                           cellpick(rng) * 0.25 + 0.125};
                bool ok = true;
                for (const auto& q : pts) {
                    const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
                    if (dx * dx + dy * dy + dz * dz < 2.0 * 2.0) ok = false;
                }
                if (ok) pts.push_back(p);
            }
            std::vector<double> charges(20, 1.0);
            double prev_err = 0.0;
            for (int n : {128, 256, 512}) {
                const GridSpec g(n, 16.0);
                const ReferenceTensor ref =
                    build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-8);
                const ParticleSystem sys = make_particle_system(g, pts, charges);
                const CollectiveField f = build_collective_field(
                    sys, ref, SplitSpec::by_support(0.6, 1e-8), 1e-8);
                const auto got = rs_forces(f, ForceDifference::Backward);
                const auto want = direct_force_oracle(sys);
                double fmax = 0.0, emax = 0.0;
                for (int j = 0; j < 20; ++j)
                    for (int dir = 0; dir < 3; ++dir) {
                        fmax = std::max(fmax, std::abs(want[j][dir]));
                        emax = std::max(emax, std::abs(got[j][dir] - want[j][dir]));
                    }
                const double rel = emax / fmax;
                if (n == 256)
                    c.checkf(rel <= 5e-2, "n=256 force gap %.2e <= 5e-2", rel);
                if (prev_err > 0.0)
                    c.checkf(rel < prev_err / 1.5,
                             "n=%d force gap %.2e (O(h): improves >= 1.5x)", n, rel);
                prev_err = rel;
            }
        });
    }

    {
        Criterion c(10, "discretized Dirac delta identities");
        run(c, [](Criterion& c) {
            const GridSpec g(64, 8.0);
            const ReferenceTensor ref =
                build_reference_kernel(g, KernelSpec::newton(), 1e-6);
            const DiracDelta d = dirac_delta(ref, SplitSpec::by_interval());
            const Eigen::VectorXd dh = full_assemble(d.delta_h);
            bool termwise = d.delta_h.rank() == d.delta_s.rank() + d.delta_l.rank();
            for (int q = 0; termwise && q < d.delta_h.rank(); ++q) {
                const bool s_part = q < d.delta_s.rank();
                const CanonicalTensor& part = s_part ? d.delta_s : d.delta_l;
                const int qq = s_part ? q : q - d.delta_s.rank();
                termwise = d.delta_h.weights()[q] == part.weights()[qq];
                for (int l = 0; termwise && l < 3; ++l)
                    termwise =
                        d.delta_h.mode(l).col(q) == part.mode(l).col(qq);
            }
            c.check(termwise, "delta_h = delta_s + delta_l termwise");
            c.checkf(d.delta_h.rank() == 3 * ref.tensor.rank(), "rank(delta_h) = 3R = %d",
                     d.delta_h.rank());

            PoissonSolver solver(g.n, g.h());
            const Eigen::VectorXd rhs = -4.0 * M_PI * dh;
            const Eigen::VectorXd u = solver.solve(rhs);
            const Eigen::VectorXd want = full_assemble(ref.tensor);
            const double rec = (u - want).norm() / want.norm();
            c.checkf(rec <= 1e-10, "inverse identity recovers P_R: gap %.2e <= 1e-10",
                     rec);

            // regularized RHS: free-space solve returns the stored long part
            const ReferenceTensor dref =
                build_reference_kernel(g.companion(), KernelSpec::newton(), 1e-6);
            const ParticleSystem sys = random_particles(g, 10, 0.8, 0.3, 1.2, 555);
            const CollectiveField f = build_collective_field(
                sys, dref, SplitSpec::by_interval(), 1e-7);
            const RegularizedRHS reg = build_regularized_rhs(f, 2.0);
            const SolveCheck chk = free_space_solve_check(reg.rho_long, reg.u_long, g, 2.0);
            c.checkf(chk.residual <= 1e-10, "free-space residual %.2e <= 1e-10",
                     chk.residual);
            c.checkf(chk.recovery_error <= 1e-10, "u_long recovered: gap %.2e <= 1e-10",
                     chk.recovery_error);

            const double before = rs_energy(f).energy;
            const double h3 = std::pow(g.h(), 3);
            double acc = 0.0, z2 = 0.0;
            for (int j = 0; j < sys.size(); ++j) {
                const auto& cc = sys.cells[j];
                acc += sys.charges[j] *
                       chk.solution[(std::int64_t(cc[2]) * g.n + cc[1]) * g.n + cc[0]] /
                       h3;
                z2 += sys.charges[j] * sys.charges[j];
            }
            const double after = 0.5 * acc - 0.5 * f.ref_long_center * z2;
            c.checkf(std::abs(after - before) <= 1e-9 * std::abs(before),
                     "regularized energy matches to the residual bound (%.2e)",
                     std::abs(after - before) / std::abs(before));
        });
    }

    {
        Criterion c(11, "RHOSVD round trip within 10x the tolerance");
        run(c, [](Criterion& c) {
            std::mt19937_64 rng(4242);
            std::normal_distribution<double> dist;
            for (double eps : {1e-4, 1e-8}) {
                double worst = 0.0;
                for (int trial = 0; trial < 3; ++trial) {
                    CanonicalTensor a(std::vector<int>{32, 32, 32});
                    for (int k = 0; k < 10; ++k) {
                        std::vector<Eigen::VectorXd> vecs;
                        for (int l = 0; l < 3; ++l) {
                            Eigen::VectorXd v(32);
                            for (int i = 0; i < 32; ++i) v[i] = dist(rng);
                            vecs.push_back(v);
                        }
                        a.append_term(dist(rng), vecs);
                    }
                    const CanonicalTensor rt = compress_canonical(a, eps);
                    const Eigen::VectorXd da = full_assemble(a);
                    worst = std::max(worst, (full_assemble(rt) - da).norm() / da.norm());
                }
                c.checkf(worst <= 10.0 * eps, "eps=%.0e worst round-trip gap %.2e <= %.0e",
                         eps, worst, 10.0 * eps);
            }
        });
    }

    std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
