#include "rst/tucker.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace rst {

TuckerTensor::TuckerTensor(std::vector<int> dims, std::vector<int> ranks,
                           Eigen::VectorXd core, std::vector<Eigen::MatrixXd> factors)
    : dims_(std::move(dims)), ranks_(std::move(ranks)), core_(std::move(core)),
      factors_(std::move(factors)) {
    require(ranks_.size() == dims_.size() && factors_.size() == dims_.size(),
            "TuckerTensor: mode count mismatch");
    std::int64_t cs = 1;
    for (std::size_t l = 0; l < dims_.size(); ++l) {
        require(factors_[l].rows() == dims_[l] && factors_[l].cols() == ranks_[l],
                "TuckerTensor: factor shape mismatch");
        cs *= ranks_[l];
    }
    require(core_.size() == cs, "TuckerTensor: core size mismatch");
}

int TuckerTensor::max_rank() const {
    int r = 0;
    for (int x : ranks_) r = std::max(r, x);
    return r;
}

TuckerTensor rhosvd(const CanonicalTensor& a, const TuckerOptions& opt,
                    std::vector<ModeSpectrum>* spectra) {
    require(opt.eps > 0.0, "rhosvd: eps must be > 0");
    const int d = a.order();
    const int R = a.rank();
    if (!opt.max_ranks.empty()) {
        require(static_cast<int>(opt.max_ranks.size()) == d,
                "rhosvd: max_ranks size mismatch");
        for (int l = 0; l < d; ++l)
            require(opt.max_ranks[l] <= std::min(a.dims()[l], std::max(R, 0)),
                    "rhosvd: requested rank exceeds min(n, R)");
    }

    if (R == 0) {
        std::vector<int> zr(d, 0);
        std::vector<Eigen::MatrixXd> f;
        for (int l = 0; l < d; ++l) f.emplace_back(a.dims()[l], 0);
        return TuckerTensor(a.dims(), zr, Eigen::VectorXd(0), f);
    }

    // Column norms per mode; column k of the mode-l side matrix is scaled by
    // the magnitude of the whole term so truncation reflects term importance.
    Eigen::MatrixXd norms(d, R);
    for (int l = 0; l < d; ++l)
        for (int k = 0; k < R; ++k) norms(l, k) = a.mode(l).col(k).norm();

    std::vector<int> ranks(d);
    std::vector<Eigen::MatrixXd> factors(d);
    for (int l = 0; l < d; ++l) {
        Eigen::MatrixXd side = a.mode(l);
        for (int k = 0; k < R; ++k) {
            double s = std::abs(a.weights()[k]);
            for (int m = 0; m < d; ++m)
                if (m != l) s *= norms(m, k);
            side.col(k) *= s;
        }
        Eigen::BDCSVD<Eigen::MatrixXd> svd(side, Eigen::ComputeThinU);
        const Eigen::VectorXd& sv = svd.singularValues();
        if (spectra) spectra->push_back({l, sv});
        int r = 0;
        const double cut = opt.eps * (sv.size() > 0 ? sv[0] : 0.0);
        while (r < sv.size() && sv[r] > cut) ++r;
        r = std::max(r, 1);
        if (!opt.max_ranks.empty()) r = std::min(r, opt.max_ranks[l]);
        ranks[l] = r;
        factors[l] = svd.matrixU().leftCols(r);
    }

    // Core by projection: beta = sum_k xi_k  o_l (V_l^T u_k^(l)).
    std::vector<Eigen::MatrixXd> proj(d);
    for (int l = 0; l < d; ++l) proj[l] = factors[l].transpose() * a.mode(l);
    CanonicalTensor projected(ranks, a.weights(), proj);
    Eigen::VectorXd core = full_assemble(projected);

    return TuckerTensor(a.dims(), ranks, std::move(core), std::move(factors));
}

CanonicalTensor tucker_to_canonical(const TuckerTensor& t, double trim) {
    const int d = t.order();
    CanonicalTensor out(t.dims());
    std::int64_t fibers = 1;
    for (int l = 0; l < d; ++l) {
        if (t.ranks()[l] == 0) return out;
        fibers *= t.ranks()[l];
    }

    // The largest-rank mode absorbs the contraction; the others enumerate
    // core fibers.
    int ml = 0;
    for (int l = 1; l < d; ++l)
        if (t.ranks()[l] > t.ranks()[ml]) ml = l;
    fibers /= t.ranks()[ml];

    std::vector<std::int64_t> stride(d);
    std::int64_t s = 1;
    for (int l = 0; l < d; ++l) {
        stride[l] = s;
        s *= t.ranks()[l];
    }

    struct Fiber {
        double norm;
        std::vector<int> idx;
        Eigen::VectorXd coeff;
    };
    std::vector<Fiber> all;
    all.reserve(fibers);
    std::vector<int> idx(d, 0);
    const int rml = t.ranks()[ml];
    for (std::int64_t f = 0; f < fibers; ++f) {
        std::int64_t off = 0;
        for (int l = 0; l < d; ++l)
            if (l != ml) off += static_cast<std::int64_t>(idx[l]) * stride[l];
        Eigen::VectorXd coeff(rml);
        for (int v = 0; v < rml; ++v) coeff[v] = t.core()[off + v * stride[ml]];
        all.push_back({coeff.norm(), idx, std::move(coeff)});
        for (int l = 0; l < d; ++l) {
            if (l == ml) continue;
            if (++idx[l] < t.ranks()[l]) break;
            idx[l] = 0;
        }
    }

    std::stable_sort(all.begin(), all.end(),
                     [](const Fiber& x, const Fiber& y) { return x.norm > y.norm; });
    const double cut = trim * (all.empty() ? 0.0 : all.front().norm);

    for (const Fiber& f : all) {
        if (f.norm <= cut || f.norm == 0.0) continue;
        std::vector<Eigen::VectorXd> vecs(d);
        for (int l = 0; l < d; ++l) {
            if (l == ml)
                vecs[l] = t.factor(ml) * (f.coeff / f.norm);
            else
                vecs[l] = t.factor(l).col(f.idx[l]);
        }
        out.append_term(f.norm, vecs);
    }
    return out;
}

Eigen::VectorXd full_assemble(const TuckerTensor& t, std::int64_t guard) {
    const int d = t.order();
    std::int64_t total = 1;
    for (int x : t.dims()) total *= x;
    if (total > guard) throw GuardError("full_assemble: tensor exceeds the dense guard");
    for (int l = 0; l < d; ++l)
        if (t.ranks()[l] == 0) return Eigen::VectorXd::Zero(total);

    // Expand mode by mode: cur has shape (dims[0..l-1], ranks[l..d-1]).
    Eigen::VectorXd cur = t.core();
    std::vector<std::int64_t> shape(d);
    for (int l = 0; l < d; ++l) shape[l] = t.ranks()[l];
    for (int l = 0; l < d; ++l) {
        std::int64_t pre = 1, post = 1;
        for (int m = 0; m < l; ++m) pre *= shape[m];
        for (int m = l + 1; m < d; ++m) post *= shape[m];
        const int r = t.ranks()[l], n = t.dims()[l];
        Eigen::VectorXd next(pre * n * post);
        for (std::int64_t p = 0; p < post; ++p) {
            Eigen::Map<const Eigen::MatrixXd> in(cur.data() + p * pre * r, pre, r);
            Eigen::Map<Eigen::MatrixXd> outm(next.data() + p * pre * n, pre, n);
            outm = in * t.factor(l).transpose();
        }
        cur = std::move(next);
        shape[l] = n;
    }
    return cur;
}

CanonicalTensor compress_canonical(const CanonicalTensor& a, double eps) {
    return tucker_to_canonical(canonical_to_tucker(a, eps));
}

} // namespace rst
