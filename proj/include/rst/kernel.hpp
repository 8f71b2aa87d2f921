#pragma once

#include <string>
#include <vector>

#include "rst/errors.hpp"

namespace rst {

enum class KernelFamily { Newton, Yukawa, Slater };

/// Radial interaction kernel p(r) together with the weight density of its
/// Laplace-Gauss transform p(z) = int_0^inf  dens(t) exp(-t^2 z^2) dt.
struct KernelSpec {
    KernelFamily family = KernelFamily::Newton;
    double kappa = 0.0;    // Yukawa decay, >= 0
    double lambda = 1.0;   // Slater exponent, > 0

    static KernelSpec newton() { return {KernelFamily::Newton, 0.0, 1.0}; }
    static KernelSpec yukawa(double kappa) {
        require(kappa >= 0.0, "Yukawa kappa must be >= 0");
        return {KernelFamily::Yukawa, kappa, 1.0};
    }
    static KernelSpec slater(double lambda) {
        require(lambda > 0.0, "Slater lambda must be > 0");
        return {KernelFamily::Slater, 0.0, lambda};
    }

    // Yukawa with kappa = 0 degenerates to Newton exactly.
    bool newton_like() const {
        return family == KernelFamily::Newton ||
               (family == KernelFamily::Yukawa && kappa == 0.0);
    }

    double radial(double r) const;   // 1/r, e^{-kr}/r or e^{-lr}
    double density(double t) const;  // Laplace-Gauss weight, > 0
    std::string name() const;
};

/// Gaussian-sum quadrature for a radial kernel: p(z) ~ sum_k w_k e^{-t_k^2 z^2}
/// with positive nodes and weights, accurate on the radial interval [a, A].
struct QuadratureRule {
    KernelSpec kernel;
    int M = 0;           // half-count budget; retained rank R <= 2M+1
    double eps = 0.0;    // nominal accuracy the rule was built for
    double a = 0.0, A = 0.0;
    std::vector<double> points;   // t_k, sorted ascending, > 0
    std::vector<double> weights;  // w_k > 0

    int rank() const { return static_cast<int>(points.size()); }
    int trimmed_rank(double rel = 1e-16) const;
    int long_range_count() const;        // #{ t_k <= 1 }, the by-interval split
    double evaluate(double z) const;
};

/// eps-driven rule on the radial interval [a, A].
QuadratureRule build_quadrature_eps(const KernelSpec& kernel, double eps,
                                    double a, double A);

/// M-driven rule: accuracy follows the schedule eps = 10^(-alpha sqrt(M))
/// clamped so the node count fits the 2M+1 budget.  Larger M buys strictly
/// more accuracy until the double-precision floor.
QuadratureRule build_quadrature(const KernelSpec& kernel, int M,
                                double a = 1e-2, double A = 10.0);

} // namespace rst
