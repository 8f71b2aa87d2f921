#include "rst/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace rst {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;

// Discretization step constant for the log-trapezoid part, calibrated so the
// measured max relative error tracks the nominal eps (Poisson-summation model
// error 2.8 e^{-pi^2/(2h)} with an 8% relaxation absorbed by the Gregory and
// Gauss tail corrections).
constexpr double kStepC = 1.08 * kPi * kPi / 2.0;
constexpr double kBudget = 0.3;   // per-component share of eps

// 6th-order Gregory end weights; they keep the composite rule positive.
constexpr double kGregory[5] = {95.0 / 288.0, 317.0 / 240.0, 23.0 / 30.0,
                                793.0 / 720.0, 157.0 / 160.0};

// 3-point Gauss-Legendre on [-1,1].
constexpr double kGlx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kGlw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

// Fixed point for erfc(tau) ~= frac * eps.
double tau_of_eps(double eps, double frac = kBudget) {
    double x = std::sqrt(std::max(std::log(1.0 / eps), 1.0));
    for (int i = 0; i < 8; ++i) {
        double arg = frac * eps * std::max(x, 1e-8) * kSqrtPi;
        x = std::sqrt(std::max(std::log(1.0 / arg), 1.0));
    }
    return x;
}

// Per-family slack of the measured error over the nominal eps; the Yukawa and
// Slater densities pinch the analyticity strip of the transformed integrand.
double family_safety(const KernelSpec& k) {
    if (k.newton_like()) return 1.0;
    return k.family == KernelFamily::Yukawa ? 30.0 : 10.0;
}

} // namespace

double KernelSpec::radial(double r) const {
    switch (family) {
        case KernelFamily::Newton: return 1.0 / r;
        case KernelFamily::Yukawa: return std::exp(-kappa * r) / r;
        case KernelFamily::Slater: return std::exp(-lambda * r);
    }
    return 0.0;
}

double KernelSpec::density(double t) const {
    switch (family) {
        case KernelFamily::Newton:
            return 2.0 / kSqrtPi;
        case KernelFamily::Yukawa:
            return 2.0 / kSqrtPi * std::exp(-kappa * kappa / (4.0 * t * t));
        case KernelFamily::Slater:
            return lambda / kSqrtPi * std::exp(-lambda * lambda / (4.0 * t * t)) / (t * t);
    }
    return 0.0;
}

std::string KernelSpec::name() const {
    switch (family) {
        case KernelFamily::Newton: return "newton";
        case KernelFamily::Yukawa: return "yukawa:" + std::to_string(kappa);
        case KernelFamily::Slater: return "slater:" + std::to_string(lambda);
    }
    return "?";
}

int QuadratureRule::trimmed_rank(double rel) const {
    double wmax = 0.0;
    for (double w : weights) wmax = std::max(wmax, w);
    int r = 0;
    for (double w : weights)
        if (w > rel * wmax) ++r;
    return r;
}

int QuadratureRule::long_range_count() const {
    int r = 0;
    for (double t : points)
        if (t <= 1.0) ++r;
    return r;
}

double QuadratureRule::evaluate(double z) const {
    double s = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k)
        s += weights[k] * std::exp(-points[k] * points[k] * z * z);
    return s;
}

QuadratureRule build_quadrature_eps(const KernelSpec& kernel, double eps,
                                    double a, double A) {
    require(eps > 0.0 && eps < 1.0, "quadrature eps must lie in (0,1)");
    require(a > 0.0 && A > a, "quadrature interval must satisfy 0 < a < A");

    QuadratureRule rule;
    rule.kernel = kernel;
    rule.eps = eps;
    rule.a = a;
    rule.A = A;

    const double tau = tau_of_eps(eps);
    const double u_hi = std::log(tau / a);
    const bool newton = kernel.newton_like();

    // Left end of the log-trapezoid.  The Newton tail [0, t_cut] is analytic
    // and goes to a small Gauss block; the Yukawa/Slater densities vanish
    // doubly exponentially at t -> 0, so their tails are cut where the
    // density drops below 0.1 eps and need no correction.
    double u_cut;
    double gl_t[3] = {0, 0, 0}, gl_w[3] = {0, 0, 0};
    bool has_tail = false;
    if (newton) {
        const double theta = 0.3 * std::pow(kBudget * eps, 1.0 / 7.0);
        const double t_cut = theta / A;
        u_cut = std::log(t_cut);
        for (int j = 0; j < 3; ++j) {
            gl_t[j] = 0.5 * t_cut * (kGlx[j] + 1.0);
            gl_w[j] = 0.5 * t_cut * kGlw[j] * kernel.density(gl_t[j]);
        }
        has_tail = true;
    } else {
        const double dead = std::sqrt(std::log(1.0 / (0.1 * eps)));
        const double decay = kernel.family == KernelFamily::Yukawa ? kernel.kappa
                                                                   : kernel.lambda;
        u_cut = std::min(std::log(decay / (2.0 * dead)), u_hi - 1.0);
    }

    double h = kStepC / std::log(2.8 * family_safety(kernel) / (kBudget * eps));
    int K = std::max(static_cast<int>(std::ceil((u_hi - u_cut) / h)) + 1, 8);
    h = (u_hi - u_cut) / (K - 1);

    std::vector<double> t(K), w(K);
    for (int k = 0; k < K; ++k) {
        const double u = u_cut + h * k;
        t[k] = std::exp(u);
        w[k] = h * t[k] * kernel.density(t[k]);
    }
    if (newton) {
        for (int k = 0; k < 5; ++k) w[k] *= kGregory[k];
    } else {
        w[0] *= 0.5;
    }
    w[K - 1] *= 0.5;

    if (has_tail) {
        rule.points.assign(gl_t, gl_t + 3);
        rule.weights.assign(gl_w, gl_w + 3);
    }
    rule.points.insert(rule.points.end(), t.begin(), t.end());
    rule.weights.insert(rule.weights.end(), w.begin(), w.end());

    // Drop numerically dead terms (keeps R reported honestly).
    double wmax = 0.0;
    for (double x : rule.weights) wmax = std::max(wmax, x);
    std::vector<double> tp, wp;
    for (std::size_t k = 0; k < rule.points.size(); ++k) {
        if (rule.weights[k] > 1e-16 * wmax) {
            tp.push_back(rule.points[k]);
            wp.push_back(rule.weights[k]);
        }
    }
    rule.points = std::move(tp);
    rule.weights = std::move(wp);
    rule.M = std::max(1, rule.rank() / 2);   // smallest M with R <= 2M+1
    return rule;
}

QuadratureRule build_quadrature(const KernelSpec& kernel, int M, double a, double A) {
    require(M >= 1, "quadrature M must be >= 1");
    if (M < 3)
        throw NumericalError("quadrature M too small to resolve the transform density");

    const int budget = 2 * M + 1;
    // Accuracy schedule: exponential in sqrt(M) so every doubling of M brings
    // a solid factor, clamped to what the node budget can actually deliver.
    const double sched = std::pow(10.0, -1.455 * std::sqrt(static_cast<double>(M)));

    // Bisect for the tightest eps whose rule still fits 2M+1 nodes.
    double lo = -14.0, hi = -0.31;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        QuadratureRule r = build_quadrature_eps(kernel, std::pow(10.0, mid), a, A);
        if (r.rank() > budget)
            lo = mid;
        else
            hi = mid;
    }
    const double fit = std::pow(10.0, hi);

    const double eps = std::max({sched, fit, 1e-14});
    QuadratureRule rule = build_quadrature_eps(kernel, eps, a, A);
    rule.M = M;
    return rule;
}

} // namespace rst
