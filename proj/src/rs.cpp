#include "rst/rs.hpp"

#include <algorithm>
#include <cmath>

#include "rst/parallel.hpp"

namespace rst {
namespace {

// Windowed value helper on the double-grid reference: kernel value (times
// h^3) at computational cell i seen from a particle at cell s.
inline double ref_axis(const ReferenceTensor& ref, int q, int i, int s) {
    return ref.tensor.mode(0)(ref.grid.n + i - s, q);
}

} // namespace

SplitSpec SplitSpec::by_support(double sigma, double delta) {
    require(sigma > 0.0, "SplitSpec: sigma must be > 0");
    require(delta > 0.0 && delta < 1.0, "SplitSpec: delta must lie in (0,1)");
    return {Mode::BySupport, sigma, delta};
}

SplitReference split_reference(const ReferenceTensor& ref, const SplitSpec& spec) {
    const QuadratureRule& rule = ref.rule;
    double t_split = 1.0;
    if (spec.mode == SplitSpec::Mode::BySupport)
        t_split = std::sqrt(std::log(1.0 / spec.delta)) / spec.sigma;

    SplitReference out;
    for (int k = 0; k < rule.rank(); ++k) {
        if (rule.points[k] <= t_split)
            out.long_idx.push_back(k);
        else
            out.short_idx.push_back(k);
    }

    auto take = [&](const std::vector<int>& idx) {
        CanonicalTensor part(ref.tensor.dims());
        if (idx.empty()) return part;
        Eigen::VectorXd w(idx.size());
        std::vector<Eigen::MatrixXd> modes(ref.tensor.order());
        for (int l = 0; l < ref.tensor.order(); ++l)
            modes[l].resize(ref.tensor.dims()[l], idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) {
            w[j] = ref.tensor.weights()[idx[j]];
            for (int l = 0; l < ref.tensor.order(); ++l)
                modes[l].col(j) = ref.tensor.mode(l).col(idx[j]);
        }
        return CanonicalTensor(ref.tensor.dims(), std::move(w), std::move(modes));
    };
    out.long_part = take(out.long_idx);
    out.short_part = take(out.short_idx);
    return out;
}

double RSTensor::short_mode_value(int term, int offset) const {
    const int m = std::abs(offset);
    return m < gamma ? short_half(m, term) : 0.0;
}

double RSTensor::entry(int i, int j, int k) const {
    double v = long_part.rank() ? long_part.entry(i, j, k) : 0.0;
    for (int nu = 0; nu < particle_count(); ++nu) {
        const int oi = i - centers[nu][0], oj = j - centers[nu][1], ok = k - centers[nu][2];
        if (std::abs(oi) >= gamma || std::abs(oj) >= gamma || std::abs(ok) >= gamma)
            continue;
        double s = 0.0;
        for (int q = 0; q < R0(); ++q)
            s += short_weights[q] * short_half(std::abs(oi), q) *
                 short_half(std::abs(oj), q) * short_half(std::abs(ok), q);
        v += charges[nu] * s;
    }
    return v;
}

RSTensor collective_potential(const ParticleSystem& sys, const ReferenceTensor& ref,
                              const SplitSpec& spec, int threads) {
    require(ref.grid.doubled, "collective_potential: reference must be on the double grid");
    require(ref.tensor.order() == 3, "collective_potential: 3D only");
    const GridSpec grid = ref.grid.base();
    const int n = grid.n;
    const int N = sys.size();

    SplitReference split = split_reference(ref, spec);
    const int Rl = split.R_l();
    const int Rs = split.R_s();

    RSTensor rs;
    rs.grid = grid;
    rs.centers = sys.cells;
    rs.charges = Eigen::Map<const Eigen::VectorXd>(sys.charges.data(), N);

    // Long part: every particle replicates every long-range term.
    CanonicalTensor lp(std::vector<int>(3, n));
    if (N > 0 && Rl > 0) {
        Eigen::VectorXd w = Eigen::VectorXd::Ones(static_cast<std::int64_t>(N) * Rl);
        std::vector<Eigen::MatrixXd> modes(3, Eigen::MatrixXd(n, N * Rl));
        parallel_for(N, threads, [&](int nu) {
            for (int q = 0; q < Rl; ++q) {
                const int col = nu * Rl + q;
                const double zq = sys.charges[nu] * split.long_part.weights()[q];
                for (int l = 0; l < 3; ++l) {
                    const int s = sys.cells[nu][l];
                    modes[l].col(col) =
                        split.long_part.mode(l).col(q).segment(n - s, n);
                    if (l == 0) modes[l].col(col) *= zq;   // absorb the weight
                }
            }
        });
        lp = CanonicalTensor(std::vector<int>(3, n), std::move(w), std::move(modes));
    }
    rs.long_part = std::move(lp);

    // Shared short-range reference, symmetric half window of radius gamma-1.
    double sigma_eff = spec.sigma;
    if (spec.mode == SplitSpec::Mode::ByInterval && Rs > 0) {
        double t_min = ref.rule.points[split.short_idx.front()];
        sigma_eff = std::sqrt(std::log(1.0 / spec.delta)) / t_min;
    }
    const double gamma_raw = std::ceil(sigma_eff / grid.h()) + 1.0;
    rs.gamma = gamma_raw >= static_cast<double>(n) ? n : static_cast<int>(gamma_raw);
    rs.short_weights.resize(Rs);
    rs.short_half.resize(rs.gamma, Rs);
    const int c = ref.grid.center_cell();
    for (int q = 0; q < Rs; ++q) {
        rs.short_weights[q] = split.short_part.weights()[q];
        for (int m = 0; m < rs.gamma; ++m)
            rs.short_half(m, q) = split.short_part.mode(0)(c + m, q);
    }
    return rs;
}

Eigen::VectorXd full_assemble_rs(const RSTensor& rs, std::int64_t guard) {
    const int n = rs.grid.n;
    if (static_cast<std::int64_t>(n) * n * n > guard)
        throw GuardError("full_assemble_rs: grid exceeds the dense guard");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<std::int64_t>(n) * n * n);
    if (rs.long_part.rank() > 0) accumulate_full(out, rs.long_part, 1.0);
    const int g = rs.gamma;
    for (int nu = 0; nu < rs.particle_count(); ++nu) {
        const auto& ctr = rs.centers[nu];
        for (int q = 0; q < rs.R0(); ++q) {
            const double wq = rs.charges[nu] * rs.short_weights[q];
            for (int dk = -g + 1; dk < g; ++dk) {
                const int k = ctr[2] + dk;
                if (k < 0 || k >= n) continue;
                const double vk = rs.short_half(std::abs(dk), q);
                for (int dj = -g + 1; dj < g; ++dj) {
                    const int j = ctr[1] + dj;
                    if (j < 0 || j >= n) continue;
                    const double vjk = wq * vk * rs.short_half(std::abs(dj), q);
                    for (int di = -g + 1; di < g; ++di) {
                        const int i = ctr[0] + di;
                        if (i < 0 || i >= n) continue;
                        out[static_cast<std::int64_t>(k) * n * n + j * n + i] +=
                            vjk * rs.short_half(std::abs(di), q);
                    }
                }
            }
        }
    }
    return out;
}

CompressResult compress_long_range(const CanonicalTensor& long_part, double eps, int m0) {
    require(eps > 0.0, "compress_long_range: eps must be > 0");
    require(m0 >= 1, "compress_long_range: m0 must be >= 1");
    const int R = long_part.rank();
    if (R <= 1) return {long_part, false, R, "input rank <= 1, nothing to compress"};
    m0 = std::min(m0, R);

    auto compress_once = [&](const CanonicalTensor& t, int* rank_out) {
        TuckerTensor tk = canonical_to_tucker(t, eps);
        if (rank_out) *rank_out = tk.max_rank();
        return tucker_to_canonical(tk);
    };

    // Batch pass.
    std::vector<CanonicalTensor> parts;
    const int base = R / m0, extra = R % m0;
    int pos = 0;
    for (int b = 0; b < m0; ++b) {
        const int cnt = base + (b < extra ? 1 : 0);
        if (cnt == 0) continue;
        CanonicalTensor chunk(long_part.dims());
        Eigen::VectorXd w = long_part.weights().segment(pos, cnt);
        std::vector<Eigen::MatrixXd> modes(long_part.order());
        for (int l = 0; l < long_part.order(); ++l)
            modes[l] = long_part.mode(l).middleCols(pos, cnt);
        chunk = CanonicalTensor(long_part.dims(), std::move(w), std::move(modes));
        parts.push_back(cnt > 1 ? compress_once(chunk, nullptr) : chunk);
        pos += cnt;
    }

    // Pairwise merge tree with recompression.
    int final_rank = 0;
    while (parts.size() > 1) {
        std::vector<CanonicalTensor> next;
        for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
            int rk = 0;
            next.push_back(compress_once(canonical_sum(parts[i], parts[i + 1]), &rk));
            final_rank = std::max(final_rank, rk);
        }
        if (parts.size() % 2 == 1) next.push_back(parts.back());
        parts = std::move(next);
    }
    if (m0 == 1) {
        int rk = 0;
        parts[0] = compress_once(long_part, &rk);
        final_rank = rk;
    }

    CompressResult res;
    res.tensor = std::move(parts[0]);
    res.tucker_rank = final_rank;
    if (res.tensor.rank() >= R) {
        res.tensor = long_part;
        res.compressed = false;
        res.note = "eps too small to reduce the rank; returning the input";
    }
    return res;
}

CollectiveField build_collective_field(const ParticleSystem& sys, const ReferenceTensor& ref,
                                       const SplitSpec& spec, double eps, int m0,
                                       int threads) {
    CollectiveField f{sys, ref, split_reference(ref, spec),
                      collective_potential(sys, ref, spec, threads),
                      CanonicalTensor(std::vector<int>(3, ref.grid.n)), 0.0, eps, 0};
    if (m0 <= 0) m0 = std::max(1, (sys.size() + 31) / 32);
    if (f.rs.long_part.rank() > 0) {
        CompressResult c = compress_long_range(f.rs.long_part, eps, m0);
        f.long_compressed = std::move(c.tensor);
        f.tucker_rank = c.tucker_rank;
    }
    const int cc = ref.grid.center_cell();
    const double h = ref.grid.h();
    double p0 = 0.0;
    for (int q = 0; q < f.split.R_l(); ++q) {
        const double ax = f.split.long_part.mode(0)(cc, q);
        p0 += f.split.long_part.weights()[q] * ax * ax * ax;
    }
    f.ref_long_center = p0 / (h * h * h);
    return f;
}

EnergyResult rs_energy(const CollectiveField& field) {
    const ParticleSystem& sys = field.sys;
    const double h3 = std::pow(field.rs.grid.h(), 3);
    EnergyResult res;

    double acc = 0.0, z2 = 0.0;
    for (int j = 0; j < sys.size(); ++j) {
        const double pl =
            field.long_compressed.entry(sys.cells[j][0], sys.cells[j][1], sys.cells[j][2]) /
            h3;
        acc += sys.charges[j] * pl;
        z2 += sys.charges[j] * sys.charges[j];
    }
    res.energy = 0.5 * acc - 0.5 * field.ref_long_center * z2;

    const double support = (field.rs.gamma - 1) * field.rs.grid.h();
    if (sys.size() > 1 && sys.min_separation < support) {
        res.separation_ok = false;
        double zmax = 0.0;
        for (double z : sys.charges) zmax = std::max(zmax, std::abs(z));
        double shortv = 0.0;
        for (std::size_t k = 0; k < field.split.short_idx.size(); ++k) {
            const int idx = field.split.short_idx[k];
            const double t = field.ref.rule.points[idx];
            shortv += field.ref.rule.weights[idx] *
                      std::exp(-t * t * sys.min_separation * sys.min_separation);
        }
        res.est_error_bound =
            0.5 * zmax * zmax * double(sys.size()) * double(sys.size()) * shortv;
    }
    return res;
}

std::array<CanonicalTensor, 3> rs_gradient(const RSTensor& rs) {
    const int n = rs.grid.n;
    require(n >= 3, "rs_gradient: n must be >= 3");
    const double h = rs.grid.h();

    auto derive = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd d(v.size());
        const int m = static_cast<int>(v.size());
        d[0] = (v[1] - v[0]) / h;
        for (int i = 1; i + 1 < m; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        d[m - 1] = (v[m - 1] - v[m - 2]) / h;
        return d;
    };

    std::array<CanonicalTensor, 3> out = {CanonicalTensor(std::vector<int>(3, n)),
                                          CanonicalTensor(std::vector<int>(3, n)),
                                          CanonicalTensor(std::vector<int>(3, n))};
    for (int dir = 0; dir < 3; ++dir) {
        // Long part: rank preserved, mode `dir` differentiated.
        const CanonicalTensor& lp = rs.long_part;
        if (lp.rank() > 0) {
            std::vector<Eigen::MatrixXd> modes(3);
            for (int l = 0; l < 3; ++l) modes[l] = lp.mode(l);
            for (int q = 0; q < lp.rank(); ++q)
                modes[dir].col(q) = derive(lp.mode(dir).col(q));
            out[dir].append_terms(
                CanonicalTensor(lp.dims(), lp.weights(), std::move(modes)));
        }
        // Short replicas differentiated locally inside their windows.
        for (int nu = 0; nu < rs.particle_count(); ++nu) {
            for (int q = 0; q < rs.R0(); ++q) {
                std::vector<Eigen::VectorXd> vecs(3, Eigen::VectorXd::Zero(n));
                Eigen::VectorXd win = Eigen::VectorXd::Zero(n);
                bool any = false;
                for (int m = -rs.gamma + 1; m < rs.gamma; ++m) {
                    // window may clip at the box boundary
                    for (int l = 0; l < 3; ++l) {
                        const int i = rs.centers[nu][l] + m;
                        if (i >= 0 && i < n) {
                            vecs[l][i] = rs.short_half(std::abs(m), q);
                            any = true;
                        }
                    }
                }
                if (!any) continue;
                vecs[dir] = derive(vecs[dir]);
                CanonicalTensor term(std::vector<int>(3, n));
                term.append_term(rs.charges[nu] * rs.short_weights[q], vecs);
                out[dir].append_terms(term);
            }
        }
    }
    return out;
}

std::vector<std::array<double, 3>> rs_forces(const CollectiveField& field,
                                             ForceDifference diff) {
    const ParticleSystem& sys = field.sys;
    const ReferenceTensor& ref = field.ref;
    const int n = ref.grid.n;
    const int N = sys.size();
    const double h = ref.grid.h();
    const double h3 = h * h * h;
    const double support = (field.rs.gamma - 1) * h;

    // Long-range pair value G(x_m, x_nu) from the split reference windows.
    auto pair_value = [&](const std::array<int, 3>& a, const std::array<int, 3>& b) {
        double s = 0.0;
        for (int q = 0; q < field.split.R_l(); ++q) {
            double p = field.split.long_part.weights()[q];
            for (int l = 0; l < 3; ++l)
                p *= field.split.long_part.mode(l)(n + a[l] - b[l], q);
            s += p;
        }
        return s / h3;
    };

    auto sum_against = [&](int j, const std::array<int, 3>& cell_j) {
        double acc = 0.0;
        for (int m = 0; m < N; ++m) {
            if (m == j) continue;
            acc += sys.charges[m] * pair_value(sys.cells[m], cell_j);
        }
        return sys.charges[j] * acc;
    };

    std::vector<std::array<double, 3>> forces(N, {0.0, 0.0, 0.0});
    for (int j = 0; j < N; ++j) {
        const double base = sum_against(j, sys.cells[j]);
        for (int dir = 0; dir < 3; ++dir) {
            auto displaced = [&](int step) {
                std::array<int, 3> cj = sys.cells[j];
                cj[dir] += step;
                require(cj[dir] >= 0 && cj[dir] < n,
                        "rs_forces: displacement leaves the box");
                for (int m = 0; m < N; ++m) {
                    if (m == j) continue;
                    double r2 = 0.0;
                    for (int l = 0; l < 3; ++l) {
                        const double d = (cj[l] - sys.cells[m][l]) * h;
                        r2 += d * d;
                    }
                    if (r2 < support * support)
                        throw NumericalError(
                            "rs_forces: displaced particle collides with a "
                            "short-range ball");
                }
                return sum_against(j, cj);
            };
            if (diff == ForceDifference::Backward) {
                // F ~ -(E(x) - E(x - h e))/h
                forces[j][dir] = -(base - displaced(-1)) / h;
            } else {
                forces[j][dir] = -(displaced(+1) - displaced(-1)) / (2.0 * h);
            }
        }
    }
    return forces;
}

std::vector<std::array<double, 3>> direct_force_oracle(const ParticleSystem& sys,
                                                       bool half_convention) {
    const int N = sys.size();
    std::vector<std::array<double, 3>> f(N, {0.0, 0.0, 0.0});
    const double fac = half_convention ? 0.5 : 1.0;
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) {
            if (k == j) continue;
            double d[3], r2 = 0.0;
            for (int l = 0; l < 3; ++l) {
                d[l] = sys.positions[j][l] - sys.positions[k][l];
                r2 += d[l] * d[l];
            }
            require(r2 > 0.0, "direct_force_oracle: coincident points");
            const double inv = 1.0 / (r2 * std::sqrt(r2));
            for (int l = 0; l < 3; ++l)
                f[j][l] += fac * sys.charges[j] * sys.charges[k] * d[l] * inv;
        }
    }
    return f;
}

StorageReport storage_report(const RSTensor& rs) {
    StorageReport rep;
    const int d = 3;
    const std::int64_t n = rs.grid.n;
    rep.long_scalars = static_cast<std::int64_t>(rs.long_part.rank()) * d * n;
    rep.short_list_scalars = static_cast<std::int64_t>(d + 1) * rs.particle_count();
    rep.short_ref_scalars = static_cast<std::int64_t>(rs.gamma) * rs.R0() + rs.R0();
    rep.total = rep.long_scalars + rep.short_list_scalars + rep.short_ref_scalars;
    rep.bound = static_cast<std::int64_t>(d) * rs.long_part.rank() * n +
                static_cast<std::int64_t>(d + 1) * rs.particle_count() +
                static_cast<std::int64_t>(d) * rs.R0() * rs.gamma;
    rep.dense_scalars = n * n * n;
    return rep;
}

} // namespace rst
