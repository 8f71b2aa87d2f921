#include "rst/lattice.hpp"

#include <cmath>

#include "rst/parallel.hpp"

namespace rst {

LatticeSpec::LatticeSpec(int d_, int L_, int stride_, std::vector<int> origin_)
    : d(d_), L(L_), stride(stride_), origin(std::move(origin_)),
      counts(std::vector<int>(d_ > 0 ? d_ : 0, L_)) {
    require(d >= 1, "LatticeSpec: d must be >= 1");
    require(L >= 1, "LatticeSpec: L must be >= 1");
    require(stride >= 1, "LatticeSpec: a1/h must be a positive integer");
    require(static_cast<int>(origin.size()) == d, "LatticeSpec: origin size mismatch");
}

LatticeSpec::LatticeSpec(std::vector<int> counts_, int stride_, std::vector<int> origin_)
    : d(static_cast<int>(counts_.size())), L(0), stride(stride_),
      origin(std::move(origin_)), counts(std::move(counts_)) {
    require(d >= 1, "LatticeSpec: d must be >= 1");
    for (int c : counts) {
        require(c >= 1, "LatticeSpec: counts must be >= 1");
        L = std::max(L, c);
    }
    require(stride >= 1, "LatticeSpec: a1/h must be a positive integer");
    require(static_cast<int>(origin.size()) == d, "LatticeSpec: origin size mismatch");
}

std::int64_t LatticeSpec::nodes() const {
    std::int64_t n = 1;
    for (int c : counts) n *= c;
    return n;
}

LatticeSpec LatticeSpec::centered(const GridSpec& grid, int d, int L, int stride) {
    const int span = (L - 1) * stride;
    const int o = grid.n / 2 - span / 2;
    LatticeSpec lat(d, L, stride, std::vector<int>(d, o));
    lat.validate_on(grid);
    return lat;
}

void LatticeSpec::validate_on(const GridSpec& grid) const {
    for (int l = 0; l < d; ++l) {
        require(node_cell(l, 0) >= 0 && node_cell(l, counts[l] - 1) < grid.n,
                "LatticeSpec: lattice leaves the computational grid");
    }
}

CanonicalTensor charge_constant(int d, int L, double Z) {
    CanonicalTensor t(std::vector<int>(d, L));
    if (Z == 0.0) return t;
    t.append_term(Z, std::vector<Eigen::VectorXd>(d, Eigen::VectorXd::Ones(L)));
    return t;
}

CanonicalTensor charge_checkerboard(int d, int L) {
    Eigen::VectorXd alt(L);
    for (int k = 0; k < L; ++k) alt[k] = (k % 2 == 0) ? 1.0 : -1.0;
    CanonicalTensor t(std::vector<int>(d, L));
    t.append_term(1.0, std::vector<Eigen::VectorXd>(d, alt));
    return t;
}

CanonicalTensor charge_dipole(int d, int L, double q_plus, double q_minus) {
    // z_k = (q+ - q-)/2 + (q+ + q-)/2 * prod_l (-1)^{k_l}: the two interleaved
    // sub-lattices carry +q_plus and -q_minus.
    CanonicalTensor t(std::vector<int>(d, L));
    Eigen::VectorXd alt(L);
    for (int k = 0; k < L; ++k) alt[k] = (k % 2 == 0) ? 1.0 : -1.0;
    const double s0 = 0.5 * (q_plus - q_minus);
    const double s1 = 0.5 * (q_plus + q_minus);
    if (s0 != 0.0)
        t.append_term(s0, std::vector<Eigen::VectorXd>(d, Eigen::VectorXd::Ones(L)));
    if (s1 != 0.0) t.append_term(s1, std::vector<Eigen::VectorXd>(d, alt));
    return t;
}

Eigen::VectorXd shift_window_mode(const Eigen::VectorXd& ref_mode, int node_cell,
                                  const GridSpec& grid) {
    const int n = grid.n;
    require(ref_mode.size() == 2 * n, "shift_window_mode: reference must live on the double grid");
    require(node_cell >= 0 && node_cell < n, "shift_window_mode: shift outside the grid");
    return ref_mode.segment(n - node_cell, n);
}

CanonicalTensor assemble_lattice_potential(const ReferenceTensor& ref,
                                           const LatticeSpec& lat, double Z,
                                           int threads) {
    require(ref.grid.doubled, "assemble_lattice_potential: reference must be on the double grid");
    require(ref.tensor.order() == lat.d, "assemble_lattice_potential: order mismatch");
    lat.validate_on(ref.grid.base());

    const int n = ref.grid.n;
    const int R = ref.tensor.rank();
    const int d = lat.d;
    std::vector<Eigen::MatrixXd> modes(d, Eigen::MatrixXd::Zero(n, R));
    parallel_for(d * R, threads, [&](int idx) {
        const int l = idx / R, q = idx % R;
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < lat.count(l); ++k) {
            const int c = lat.node_cell(l, k);
            acc += ref.tensor.mode(l).col(q).segment(n - c, n);
        }
        modes[l].col(q) = acc;
    });
    Eigen::VectorXd w = ref.tensor.weights() * Z;
    return CanonicalTensor(std::vector<int>(d, n), std::move(w), std::move(modes));
}

CanonicalTensor assemble_weighted_lattice(const ReferenceTensor& ref,
                                          const LatticeSpec& lat,
                                          const CanonicalTensor& charges,
                                          int threads) {
    require(ref.grid.doubled, "assemble_weighted_lattice: reference must be on the double grid");
    require(charges.order() == lat.d, "assemble_weighted_lattice: charge order mismatch");
    for (int l = 0; l < lat.d; ++l)
        require(charges.dims()[l] == lat.count(l),
                "assemble_weighted_lattice: charge dims mismatch");
    lat.validate_on(ref.grid.base());

    const int n = ref.grid.n;
    const int R = ref.tensor.rank();
    const int RZ = charges.rank();
    const int d = lat.d;
    CanonicalTensor out(std::vector<int>(d, n));
    if (RZ == 0 || R == 0) return out;

    std::vector<Eigen::MatrixXd> modes(d, Eigen::MatrixXd::Zero(n, RZ * R));
    Eigen::VectorXd w(RZ * R);
    for (int m = 0; m < RZ; ++m)
        for (int q = 0; q < R; ++q)
            w[m * R + q] = charges.weights()[m] * ref.tensor.weights()[q];

    parallel_for(d * RZ * R, threads, [&](int idx) {
        const int l = idx / (RZ * R);
        const int m = (idx / R) % RZ;
        const int q = idx % R;
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < lat.count(l); ++k) {
            const int c = lat.node_cell(l, k);
            acc += charges.mode(l)(k, m) * ref.tensor.mode(l).col(q).segment(n - c, n);
        }
        modes[l].col(m * R + q) = acc;
    });
    return CanonicalTensor(std::vector<int>(d, n), std::move(w), std::move(modes));
}

CanonicalTensor assemble_defected(const ReferenceTensor& ref,
                                  const std::vector<LatticeDefect>& parts, int threads) {
    require(!parts.empty(), "assemble_defected: no sub-lattices");
    CanonicalTensor out = assemble_lattice_potential(ref, parts[0].sub, parts[0].charge, threads);
    for (std::size_t i = 1; i < parts.size(); ++i)
        out.append_terms(
            assemble_lattice_potential(ref, parts[i].sub, parts[i].charge, threads));
    return out;
}

CanonicalTensor trace_to_lattice(const CanonicalTensor& p, const LatticeSpec& lat,
                                 const GridSpec& grid) {
    require(p.order() == lat.d, "trace_to_lattice: order mismatch");
    const double invh = 1.0 / grid.h();
    const int R = p.rank();
    std::vector<int> dims(lat.counts.begin(), lat.counts.end());
    std::vector<Eigen::MatrixXd> modes(lat.d);
    for (int l = 0; l < lat.d; ++l) {
        modes[l].resize(lat.count(l), R);
        for (int q = 0; q < R; ++q)
            for (int k = 0; k < lat.count(l); ++k)
                modes[l](k, q) = p.mode(l)(lat.node_cell(l, k), q) * invh;
    }
    return CanonicalTensor(dims, p.weights(), std::move(modes));
}

double lattice_energy_constant(const CanonicalTensor& traced, const ReferenceTensor& ref,
                               const LatticeSpec& lat, double Z) {
    if (Z == 0.0) return 0.0;
    const CanonicalTensor one = ones_tensor(traced.dims());
    const double nodes = static_cast<double>(lat.nodes());
    const double p0 = ref.center_value();
    // traced carries the Z-scaled potential, so one Z stays explicit and the
    // self term carries Z^2
    return 0.5 * (Z * canonical_inner(traced, one) - Z * Z * nodes * p0);
}

double lattice_energy_variable(const CanonicalTensor& traced, const ReferenceTensor& ref,
                               const CanonicalTensor& charges) {
    const double p0 = ref.center_value();
    return 0.5 * (canonical_inner(traced, charges) - p0 * canonical_inner(charges, charges));
}

double brute_force_energy(const std::vector<std::array<double, 3>>& centers,
                          const std::vector<double>& charges, OracleKernel mode,
                          const ReferenceTensor* ref, std::int64_t pair_guard) {
    require(centers.size() == charges.size(), "brute_force_energy: size mismatch");
    const std::int64_t n = static_cast<std::int64_t>(centers.size());
    if (n > pair_guard) throw GuardError("brute_force_energy: pair guard exceeded");
    if (mode == OracleKernel::Discrete)
        require(ref != nullptr, "brute_force_energy: discrete mode needs a reference tensor");

    const double h = ref ? ref->grid.h() : 0.0;
    double e = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < i; ++j) {
            const double dx = centers[i][0] - centers[j][0];
            const double dy = centers[i][1] - centers[j][1];
            const double dz = centers[i][2] - centers[j][2];
            const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
            require(r > 0.0, "brute_force_energy: coincident points");
            double v;
            if (mode == OracleKernel::Analytic) {
                v = ref ? ref->kernel.radial(r) : 1.0 / r;
            } else {
                const std::vector<int> off = {static_cast<int>(std::lround(dx / h)),
                                              static_cast<int>(std::lround(dy / h)),
                                              static_cast<int>(std::lround(dz / h))};
                v = ref->value_at_offset(off);
            }
            e += charges[i] * charges[j] * v;
        }
    }
    return e;
}

double lattice_energy_oracle(const LatticeSpec& lat, const GridSpec& grid, double Z,
                             OracleKernel mode, const ReferenceTensor* ref) {
    require(lat.d == 3, "lattice_energy_oracle: 3D only");
    const int Lx = lat.count(0), Ly = lat.count(1), Lz = lat.count(2);
    const double a1 = lat.spacing(grid);
    double e = 0.0;
    for (int mx = -(Lx - 1); mx <= Lx - 1; ++mx) {
        for (int my = -(Ly - 1); my <= Ly - 1; ++my) {
            for (int mz = -(Lz - 1); mz <= Lz - 1; ++mz) {
                if (mx == 0 && my == 0 && mz == 0) continue;
                const double cnt = double(Lx - std::abs(mx)) * double(Ly - std::abs(my)) *
                                   double(Lz - std::abs(mz));
                double v;
                if (mode == OracleKernel::Analytic) {
                    const double r = a1 * std::sqrt(double(mx) * mx + double(my) * my +
                                                    double(mz) * mz);
                    v = ref ? ref->kernel.radial(r) : 1.0 / r;
                } else {
                    v = ref->value_at_offset(
                        {mx * lat.stride, my * lat.stride, mz * lat.stride});
                }
                e += cnt * v;
            }
        }
    }
    return 0.5 * Z * Z * e;
}

} // namespace rst
