// Command-line front end: rank-structured kernels, lattice sums, RS potentials,
// energies, forces, Dirac deltas and the scaling benchmark.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "rst/dirac.hpp"
#include "rst/io.hpp"
#include "rst/lattice.hpp"
#include "rst/poisson.hpp"
#include "rst/rs.hpp"

using namespace rst;
namespace fs = std::filesystem;

namespace {

struct Options {
    int n = 256;
    double b = 10.0;
    std::string kernel = "newton";
    double eps = 1e-6;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = "rst_out";
    std::string config;

    // subcommand specific
    int M = 0;                      // kernel: M-driven rule when > 0
    bool dump = false;
    double check_exclusion = 0.0;   // kernel: pointwise check, in units of h
    int L = 4, d = 3;
    double spacing = 1.0;
    std::string charges = "constant:1";
    std::string defects;
    int plane = -1;
    std::string particles;
    int random_count = 0;
    double min_sep = 1.0;
    std::string split = "interval";
    bool oracle = false;
    bool central = false;
    int m0 = 0;
    std::string suite = "all";
};

KernelSpec parse_kernel(const std::string& s) {
    if (s == "newton") return KernelSpec::newton();
    if (s.rfind("yukawa:", 0) == 0) return KernelSpec::yukawa(std::stod(s.substr(7)));
    if (s.rfind("slater:", 0) == 0) return KernelSpec::slater(std::stod(s.substr(7)));
    throw InputError("unknown kernel '" + s + "' (newton | yukawa:<k> | slater:<l>)");
}

SplitSpec parse_split(const std::string& s) {
    if (s == "interval") return SplitSpec::by_interval();
    if (s.rfind("support:", 0) == 0) {
        const std::string rest = s.substr(8);
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            return SplitSpec::by_support(std::stod(rest));
        return SplitSpec::by_support(std::stod(rest.substr(0, comma)),
                                     std::stod(rest.substr(comma + 1)));
    }
    throw InputError("unknown split '" + s + "' (interval | support:<sigma>[,<delta>])");
}

void apply_config_defaults(const Options& cli_defaults, Options& opt, CLI::App& app) {
    if (opt.config.empty()) return;
    std::map<std::string, std::string> kv;
    for (const auto& [k, v] : read_config(opt.config)) kv[k] = v;
    auto take = [&](const char* flag, const char* key, auto& field, auto parse) {
        const CLI::Option* o = app.get_option_no_throw(flag);
        if (kv.count(key) && (!o || o->count() == 0)) field = parse(kv.at(key));
    };
    (void)cli_defaults;
    take("--n", "n", opt.n, [](const std::string& s) { return std::stoi(s); });
    take("--b", "b", opt.b, [](const std::string& s) { return std::stod(s); });
    take("--kernel", "kernel", opt.kernel, [](const std::string& s) { return s; });
    take("--eps", "eps", opt.eps, [](const std::string& s) { return std::stod(s); });
    take("--seed", "seed", opt.seed,
         [](const std::string& s) { return std::stoull(s); });
    take("--threads", "threads", opt.threads,
         [](const std::string& s) { return std::stoi(s); });
    take("--out", "out", opt.out, [](const std::string& s) { return s; });
}

void echo_config(const Options& o, const std::string& sub) {
    fs::create_directories(o.out);
    std::ofstream out(fs::path(o.out) / "config_echo.txt");
    out << "subcommand=" << sub << "\n"
        << "n=" << o.n << "\nb=" << o.b << "\nkernel=" << o.kernel
        << "\neps=" << o.eps << "\nseed=" << o.seed << "\nthreads=" << o.threads
        << "\nout=" << o.out << "\nL=" << o.L << "\nd=" << o.d
        << "\nspacing=" << o.spacing << "\ncharges=" << o.charges
        << "\nsplit=" << o.split << "\nparticles=" << o.particles
        << "\nrandom=" << o.random_count << "\nmin_sep=" << o.min_sep
        << "\nm0=" << o.m0 << "\n";
}

ParticleSystem load_particles(const Options& o, const GridSpec& g) {
    if (!o.particles.empty()) return parse_particles(o.particles, g);
    if (o.random_count > 0)
        return random_particles(g, o.random_count, o.min_sep, 0.2, 1.2, o.seed);
    throw InputError("provide --particles <file> or --random <count>");
}

// ---------------------------------------------------------------- kernel ----
int cmd_kernel(const Options& o) {
    echo_config(o, "kernel");
    const GridSpec g(o.n, o.b);
    const KernelSpec kernel = parse_kernel(o.kernel);
    const auto t0 = std::chrono::steady_clock::now();
    const ReferenceTensor ref =
        o.M > 0 ? build_reference_kernel(
                      g, build_quadrature(kernel, o.M, 3.0 * g.h(), 2.0 * std::sqrt(3.0) * g.extent()),
                      kernel, 3, o.threads)
                : build_reference_kernel(g, kernel, o.eps, 3, o.threads);
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const fs::path out(o.out);
    {
        std::ofstream rep(out / "rank_report.txt");
        rep << "kernel=" << kernel.name() << "\nn=" << o.n << "\nh=" << g.h()
            << "\nrank_raw=" << ref.rule.rank()
            << "\nrank_trimmed=" << ref.rule.trimmed_rank()
            << "\nlong_range_terms=" << ref.rule.long_range_count()
            << "\neps_nominal=" << ref.rule.eps << "\ninterval_a=" << ref.rule.a
            << "\ninterval_A=" << ref.rule.A << "\nbuild_seconds=" << dt << "\n";
    }
    {
        std::ofstream rcsv(out / "rule.csv");
        rcsv << "k,t,weight\n";
        char buf[96];
        for (int k = 0; k < ref.rule.rank(); ++k) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", k, ref.rule.points[k],
                          ref.rule.weights[k]);
            rcsv << buf;
        }
    }
    write_mode_profile_csv((out / "mode_profile.csv").string(), ref.tensor, g, 0);
    if (o.dump) write_rstf((out / "kernel.rstf").string(), ref.tensor);
    std::printf("kernel %s n=%d rank=%d (trimmed %d, long %d)\n",
                kernel.name().c_str(), o.n, ref.rule.rank(), ref.rule.trimmed_rank(),
                ref.rule.long_range_count());
    if (o.check_exclusion > 0.0) {
        const double err =
            kernel_pointwise_error(ref, o.check_exclusion * g.h(), 1 << 18);
        std::printf("pointwise error beyond %.1f h: %.3e\n", o.check_exclusion, err);
        if (err > 100.0 * ref.rule.eps)
            throw NumericalError("pointwise error exceeds 100x the target eps");
    }
    return 0;
}

// --------------------------------------------------------------- lattice ----
int cmd_lattice(const Options& o) {
    echo_config(o, "lattice");
    const GridSpec g(o.n, o.b);
    const KernelSpec kernel = parse_kernel(o.kernel);
    const int stride = static_cast<int>(std::lround(o.spacing / g.h()));
    require(stride >= 1 && std::abs(stride * g.h() - o.spacing) < 1e-9 * o.spacing,
            "lattice spacing must be an integer multiple of h");
    const ReferenceTensor ref =
        build_reference_kernel(g.companion(), kernel, o.eps, o.d, o.threads);
    const fs::path out(o.out);

    CanonicalTensor pot(std::vector<int>(o.d, o.n));
    double energy = 0.0;
    std::string kind;
    if (!o.defects.empty()) {
        kind = "defected";
        std::ifstream in(o.defects);
        require(in.good(), "cannot open defects file: " + o.defects);
        std::vector<LatticeDefect> parts;
        std::string line;
        int lineno = 0;
        // per line: counts (d values), stride, origin cells (d values), charge
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::istringstream ls(line);
            std::vector<int> cnt(o.d), origin(o.d);
            int stride_i;
            double q;
            if (!(ls >> cnt[0])) continue;
            for (int l = 1; l < o.d; ++l)
                require(static_cast<bool>(ls >> cnt[l]),
                        "defects line " + std::to_string(lineno) + ": bad counts");
            require(static_cast<bool>(ls >> stride_i),
                    "defects line " + std::to_string(lineno) + ": bad stride");
            for (int l = 0; l < o.d; ++l)
                require(static_cast<bool>(ls >> origin[l]),
                        "defects line " + std::to_string(lineno) + ": bad origin");
            require(static_cast<bool>(ls >> q),
                    "defects line " + std::to_string(lineno) + ": bad charge");
            LatticeDefect def{LatticeSpec(cnt, stride_i, origin), q};
            def.sub.validate_on(g);
            parts.push_back(def);
        }
        require(!parts.empty(), "defects file holds no sub-lattices");
        pot = assemble_defected(ref, parts, o.threads);
        std::printf("defected lattice: %zu parts, rank %d\n", parts.size(), pot.rank());
    } else {
        const LatticeSpec lat = LatticeSpec::centered(g, o.d, o.L, stride);
        if (o.charges.rfind("constant:", 0) == 0) {
            kind = "constant";
            const double Z = std::stod(o.charges.substr(9));
            pot = assemble_lattice_potential(ref, lat, Z, o.threads);
            energy = lattice_energy_constant(trace_to_lattice(pot, lat, g), ref, lat, Z);
        } else {
            CanonicalTensor z(std::vector<int>(o.d, o.L));
            if (o.charges == "checkerboard") {
                z = charge_checkerboard(o.d, o.L);
            } else if (o.charges.rfind("dipole:", 0) == 0) {
                const std::string rest = o.charges.substr(7);
                const auto comma = rest.find(',');
                require(comma != std::string::npos, "--charges dipole:<q+>,<q->");
                z = charge_dipole(o.d, o.L, std::stod(rest.substr(0, comma)),
                                  std::stod(rest.substr(comma + 1)));
            } else if (o.charges.rfind("file:", 0) == 0) {
                z = read_rstf(o.charges.substr(5));
            } else {
                throw InputError("unknown --charges '" + o.charges + "'");
            }
            kind = "variable";
            pot = assemble_weighted_lattice(ref, lat, z, o.threads);
            energy = lattice_energy_variable(trace_to_lattice(pot, lat, g), ref, z);
        }
        std::printf("lattice L=%d d=%d spacing=%g: rank %d, energy %.12g\n", o.L, o.d,
                    o.spacing, pot.rank(), energy);
        std::ofstream rep(out / "lattice_report.txt");
        rep << "kind=" << kind << "\nL=" << o.L << "\nd=" << o.d
            << "\nspacing=" << o.spacing << "\nrank=" << pot.rank()
            << "\nreference_rank=" << ref.tensor.rank() << "\nenergy=" << energy << "\n";
    }
    if (o.plane >= 0 && o.d == 3)
        write_cross_section_csv((out / "cross_section.csv").string(), pot, g, o.plane,
                                1.0 / std::pow(g.h(), 3));
    if (o.dump) write_rstf((out / "lattice.rstf").string(), pot);
    return 0;
}

// ----------------------------------------------------- particles family  ----
CollectiveField build_field(const Options& o, const GridSpec& g) {
    const KernelSpec kernel = parse_kernel(o.kernel);
    const ReferenceTensor ref =
        build_reference_kernel(g.companion(), kernel, o.eps, 3, o.threads);
    const ParticleSystem sys = load_particles(o, g);
    return build_collective_field(sys, ref, parse_split(o.split), o.eps, o.m0,
                                  o.threads);
}

int cmd_particles(const Options& o) {
    echo_config(o, "particles");
    const GridSpec g(o.n, o.b);
    const CollectiveField f = build_field(o, g);
    const StorageReport rep = storage_report(f.rs);
    const fs::path out(o.out);

    std::printf("particles N=%d: long rank %d -> %d (tucker %d), gamma %d\n",
                f.sys.size(), f.rs.long_part.rank(), f.long_compressed.rank(),
                f.tucker_rank, f.rs.gamma);
    std::printf("storage %lld of bound %lld (dense %lld)\n",
                static_cast<long long>(rep.total), static_cast<long long>(rep.bound),
                static_cast<long long>(rep.dense_scalars));
    {
        std::ofstream sr(out / "storage_report.txt");
        sr << "N=" << f.sys.size() << "\nmax_snap=" << f.sys.max_snap
           << "\nmin_separation=" << f.sys.min_separation
           << "\nlong_rank_raw=" << f.rs.long_part.rank()
           << "\nlong_rank_compressed=" << f.long_compressed.rank()
           << "\ntucker_rank=" << f.tucker_rank << "\ngamma=" << f.rs.gamma
           << "\nshort_terms=" << f.rs.R0() << "\nlong_scalars=" << rep.long_scalars
           << "\nshort_list_scalars=" << rep.short_list_scalars
           << "\nshort_ref_scalars=" << rep.short_ref_scalars
           << "\ntotal_scalars=" << rep.total << "\nformat_bound=" << rep.bound
           << "\ndense_scalars=" << rep.dense_scalars << "\n";
    }
    {
        std::vector<ModeSpectrum> spectra;
        if (f.rs.long_part.rank() > 0)
            rhosvd(f.rs.long_part, {o.eps, {}}, &spectra);
        write_spectra_csv((out / "spectra.csv").string(), spectra);
    }
    if (o.plane >= 0) {
        const double s = 1.0 / std::pow(g.h(), 3);
        write_cross_section_csv((out / "plane_long.csv").string(), f.long_compressed, g,
                                o.plane, s);
        // total and short panels from the RS structure plus the error plane
        // against the direct windowed sum of full kernels
        std::ofstream tot(out / "plane_total.csv"), sh(out / "plane_short.csv"),
            errp(out / "plane_error.csv");
        tot << "x,y,value\n";
        sh << "x,y,value\n";
        errp << "x,y,value\n";
        const int nref = f.ref.grid.n;
        char buf[96];
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i) {
                double whole = f.rs.long_part.entry(i, j, o.plane);
                const double lng = whole;
                for (int nu = 0; nu < f.rs.particle_count(); ++nu) {
                    const auto& ctr = f.rs.centers[nu];
                    const int oi = i - ctr[0], oj = j - ctr[1], ok = o.plane - ctr[2];
                    if (std::abs(oi) >= f.rs.gamma || std::abs(oj) >= f.rs.gamma ||
                        std::abs(ok) >= f.rs.gamma)
                        continue;
                    double sv = 0.0;
                    for (int q = 0; q < f.rs.R0(); ++q)
                        sv += f.rs.short_weights[q] *
                              f.rs.short_half(std::abs(oi), q) *
                              f.rs.short_half(std::abs(oj), q) *
                              f.rs.short_half(std::abs(ok), q);
                    whole += f.rs.charges[nu] * sv;
                }
                double direct = 0.0;
                for (int nu = 0; nu < f.sys.size(); ++nu) {
                    double p = 0.0;
                    for (int q = 0; q < f.ref.tensor.rank(); ++q)
                        p += f.ref.tensor.weights()[q] *
                             f.ref.tensor.mode(0)(nref + i - f.sys.cells[nu][0], q) *
                             f.ref.tensor.mode(1)(nref + j - f.sys.cells[nu][1], q) *
                             f.ref.tensor.mode(2)(nref + o.plane - f.sys.cells[nu][2], q);
                    direct += f.sys.charges[nu] * p;
                }
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.coord(i),
                              g.coord(j), whole * s);
                tot << buf;
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.coord(i),
                              g.coord(j), (whole - lng) * s);
                sh << buf;
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.coord(i),
                              g.coord(j), (whole - direct) * s);
                errp << buf;
            }
    }
    if (o.dump) write_rstf((out / "long_part.rstf").string(), f.long_compressed);
    return 0;
}

int cmd_energy(const Options& o) {
    echo_config(o, "energy");
    const GridSpec g(o.n, o.b);
    const CollectiveField f = build_field(o, g);
    const EnergyResult e = rs_energy(f);
    std::printf("energy %.12g (separation %s)\n", e.energy,
                e.separation_ok ? "ok" : "UNDER SIGMA");
    if (!e.separation_ok)
        std::printf("estimated short-range leakage bound %.3e\n", e.est_error_bound);
    if (o.oracle) {
        const double want = brute_force_energy(f.sys.positions, f.sys.charges,
                                               OracleKernel::Analytic, &f.ref);
        const double gap = std::abs(e.energy - want) / std::max(1e-300, std::abs(want));
        std::printf("analytic pairwise oracle %.12g (relative gap %.3e)\n", want, gap);
        if (gap > std::max(1e-3, 100.0 * o.eps))
            throw NumericalError("rs_energy disagrees with the pairwise oracle");
    }
    std::ofstream rep(fs::path(o.out) / "energy.txt");
    rep << "energy=" << std::setprecision(17) << e.energy
        << "\nseparation_ok=" << (e.separation_ok ? 1 : 0) << "\n";
    return 0;
}

int cmd_forces(const Options& o) {
    echo_config(o, "forces");
    const GridSpec g(o.n, o.b);
    const CollectiveField f = build_field(o, g);
    const auto forces =
        rs_forces(f, o.central ? ForceDifference::Central : ForceDifference::Backward);
    write_forces_csv((fs::path(o.out) / "forces.csv").string(), forces);
    std::printf("forces written for N=%d particles\n", f.sys.size());
    if (o.oracle) {
        const auto want = direct_force_oracle(f.sys);
        double fmax = 0.0, emax = 0.0;
        for (int j = 0; j < f.sys.size(); ++j)
            for (int dir = 0; dir < 3; ++dir) {
                fmax = std::max(fmax, std::abs(want[j][dir]));
                emax = std::max(emax, std::abs(want[j][dir] - forces[j][dir]));
            }
        std::printf("pairwise force oracle: max |gap| %.3e of scale %.3e\n", emax, fmax);
        if (emax > 0.1 * fmax)
            throw NumericalError("forces disagree with the pairwise oracle");
    }
    return 0;
}

int cmd_delta(const Options& o) {
    echo_config(o, "delta");
    const GridSpec g(o.n, o.b);
    const KernelSpec kernel = parse_kernel(o.kernel);
    require(kernel.newton_like(), "delta requires the Newton kernel");
    const fs::path out(o.out);
    const SplitSpec spec = parse_split(o.split);

    // single-kernel delta with center-line profiles
    const ReferenceTensor ref = build_reference_kernel(g, kernel, o.eps, 3, o.threads);
    const DiracDelta d = dirac_delta(ref, spec);
    {
        std::ofstream prof(out / "delta_centerline.csv");
        prof << "index,coord,delta_h,delta_s,delta_l\n";
        const int c = g.center_cell();
        char buf[160];
        for (int i = 0; i < g.n; ++i) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", i, g.coord(i),
                          d.delta_h.entry(i, c, c), d.delta_s.entry(i, c, c),
                          d.delta_l.entry(i, c, c));
            prof << buf;
        }
    }
    std::printf("delta ranks: h=%d s=%d l=%d\n", d.delta_h.rank(), d.delta_s.rank(),
                d.delta_l.rank());

    std::ofstream rep(out / "delta_report.txt");
    rep << "rank_h=" << d.delta_h.rank() << "\nrank_s=" << d.delta_s.rank()
        << "\nrank_l=" << d.delta_l.rank() << "\n";

    if (!o.particles.empty() || o.random_count > 0) {
        const ReferenceTensor dref =
            build_reference_kernel(g.companion(), kernel, o.eps, 3, o.threads);
        const ParticleSystem sys = load_particles(o, g);
        const CollectiveField f =
            build_collective_field(sys, dref, spec, o.eps, o.m0, o.threads);
        const ManyDelta md = dirac_delta_many(sys, dref, spec, o.eps, o.m0, o.threads);
        std::printf("many-particle delta: N=%d, compressed rank %d (tucker %d)\n",
                    sys.size(), md.delta_l.rank(), md.tucker_rank);
        rep << "N=" << sys.size() << "\nmany_delta_rank=" << md.delta_l.rank()
            << "\nmany_tucker_rank=" << md.tucker_rank << "\n";
        if (o.dump) write_rstf((out / "delta_long.rstf").string(), md.delta_l);

        if (g.n <= 128) {
            const RegularizedRHS reg = build_regularized_rhs(f, 1.0);
            const SolveCheck chk =
                free_space_solve_check(reg.rho_long, reg.u_long, g, 1.0);
            std::printf("free-space solve: residual %.3e, recovery %.3e\n", chk.residual,
                        chk.recovery_error);
            rep << "solve_residual=" << chk.residual
                << "\nsolve_recovery=" << chk.recovery_error << "\n";
            write_rstf((out / "rho_long.rstf").string(), reg.rho_long);
        }
    }
    return 0;
}

// ------------------------------------------------------------------ bench ----
int cmd_bench(const Options& o) {
    echo_config(o, "bench");
    const fs::path out(o.out);
    std::ofstream csv(out / "bench.csv");
    csv << "suite,size,seconds,rank,accuracy\n";
    char buf[160];

    auto med3 = [](const std::function<void()>& fn) {
        std::vector<double> t;
        for (int i = 0; i < 3; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            fn();
            t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                      t0)
                            .count());
        }
        std::sort(t.begin(), t.end());
        return t[1];
    };

    if (o.suite == "kernel" || o.suite == "all") {
        std::printf("kernel sweep (eps=%.1e, b=%.1f)\n", o.eps, o.b);
        std::printf("%8s %10s %6s %12s\n", "n", "seconds", "rank", "maxrel>10h");
        for (int n : {1024, 2048, 4096, 8192}) {
            const GridSpec g(n, o.b);
            ReferenceTensor ref;
            const double sec = med3([&] {
                ref = build_reference_kernel(g, parse_kernel(o.kernel), o.eps, 3,
                                             o.threads);
            });
            const double err = kernel_pointwise_error(ref, 10.0 * g.h(), 1 << 16);
            std::printf("%8d %10.4f %6d %12.3e\n", n, sec, ref.tensor.rank(), err);
            std::snprintf(buf, sizeof buf, "kernel,%d,%.6f,%d,%.3e\n", n, sec,
                          ref.tensor.rank(), err);
            csv << buf;
        }
    }
    if (o.suite == "lattice" || o.suite == "all") {
        std::printf("lattice sweep (spacing 1, h = 1/16)\n");
        std::printf("%8s %12s %12s %16s %12s\n", "L", "assemble_s", "energy_s",
                    "energy", "oracle_gap");
        for (int L : {2, 4, 8, 16, 32}) {
            const int n = std::min(256 * L, 4096);
            const GridSpec g(n, n / 32.0);
            const ReferenceTensor ref = build_reference_kernel(
                g.companion(), parse_kernel(o.kernel), o.eps, 3, o.threads);
            const LatticeSpec lat = LatticeSpec::centered(g, 3, L, 16);
            CanonicalTensor pot;
            const double t_asm =
                med3([&] { pot = assemble_lattice_potential(ref, lat, 1.0, o.threads); });
            double energy = 0.0;
            const double t_en = med3([&] {
                energy =
                    lattice_energy_constant(trace_to_lattice(pot, lat, g), ref, lat, 1.0);
            });
            double gap = std::nan("");
            if (L <= 16) {
                const double want =
                    lattice_energy_oracle(lat, g, 1.0, OracleKernel::Discrete, &ref);
                gap = std::abs(energy - want) / std::abs(want);
            }
            std::printf("%8d %12.4f %12.4f %16.8e %12.3e\n", L, t_asm, t_en, energy, gap);
            std::snprintf(buf, sizeof buf, "lattice,%d,%.6f,%d,%.3e\n", L,
                          t_asm + t_en, pot.rank(), gap);
            csv << buf;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rank-structured tensor electrostatics"};
    app.require_subcommand(1);
    Options o;

    app.add_option("--n", o.n, "grid cells per axis (even)");
    app.add_option("--b", o.b, "computational box half-width");
    app.add_option("--kernel", o.kernel, "newton | yukawa:<kappa> | slater:<lambda>");
    app.add_option("--eps", o.eps, "target accuracy");
    app.add_option("--seed", o.seed, "RNG seed for synthetic particles");
    app.add_option("--threads", o.threads, "worker threads (default 1, deterministic)");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--config", o.config, "key=value config file (CLI overrides)");

    CLI::App* kernel = app.add_subcommand("kernel", "reference kernel tensor");
    kernel->add_option("--m", o.M, "half-count M for the M-driven rule");
    kernel->add_flag("--dump", o.dump, "write the RSTF1 container");
    kernel->add_option("--check-error", o.check_exclusion,
                       "pointwise check beyond this many h");

    CLI::App* lattice = app.add_subcommand("lattice", "assembled lattice potential");
    lattice->add_option("--L", o.L, "lattice points per axis");
    lattice->add_option("--d", o.d, "lattice dimension");
    lattice->add_option("--spacing", o.spacing, "lattice constant (multiple of h)");
    lattice->add_option("--charges", o.charges,
                        "constant:<Z> | checkerboard | dipole:<q+>,<q-> | file:<rstf>");
    lattice->add_option("--defects", o.defects, "sub-lattice file");
    lattice->add_option("--plane", o.plane, "emit a z-plane cross-section CSV");
    lattice->add_flag("--dump", o.dump, "write the RSTF1 container");

    auto add_particle_opts = [&](CLI::App* sub) {
        sub->add_option("--particles", o.particles, "particle file: x y z q per line");
        sub->add_option("--random", o.random_count, "generate this many particles");
        sub->add_option("--min-sep", o.min_sep, "min separation for --random");
        sub->add_option("--split", o.split, "interval | support:<sigma>[,<delta>]");
        sub->add_option("--m0", o.m0, "add-and-compress batch count");
    };
    CLI::App* particles = app.add_subcommand("particles", "RS collective potential");
    add_particle_opts(particles);
    particles->add_option("--plane", o.plane, "emit z-plane panels");
    particles->add_flag("--dump", o.dump, "write the RSTF1 container");

    CLI::App* energy = app.add_subcommand("energy", "interaction energy");
    add_particle_opts(energy);
    energy->add_flag("--oracle", o.oracle, "compare with the O(N^2) oracle");

    CLI::App* forces = app.add_subcommand("forces", "approach-B force field");
    add_particle_opts(forces);
    forces->add_flag("--oracle", o.oracle, "compare with the pairwise oracle");
    forces->add_flag("--central", o.central, "central differences");

    CLI::App* delta = app.add_subcommand("delta", "discretized Dirac delta");
    add_particle_opts(delta);
    delta->add_flag("--dump", o.dump, "write RSTF1 containers");

    CLI::App* bench = app.add_subcommand("bench", "scaling benchmark");
    bench->add_option("--suite", o.suite, "kernel | lattice | all");

    try {
        app.parse(argc, argv);
        apply_config_defaults(Options{}, o, app);
        require(o.n > 0 && o.n % 2 == 0, "--n must be positive and even");
        require(o.b > 0, "--b must be positive");
        require(o.eps > 0 && o.eps < 1, "--eps must lie in (0,1)");
        require(o.threads >= 1 && o.threads <= 256, "--threads out of range");
        if (kernel->parsed()) return cmd_kernel(o);
        if (lattice->parsed()) return cmd_lattice(o);
        if (particles->parsed()) return cmd_particles(o);
        if (energy->parsed()) return cmd_energy(o);
        if (forces->parsed()) return cmd_forces(o);
        if (delta->parsed()) return cmd_delta(o);
        if (bench->parsed()) return cmd_bench(o);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const GuardError& e) {
        std::fprintf(stderr, "resource guard: %s\n", e.what());
        return 3;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 1;
    }
}
