#include "rst/reference.hpp"

#include <cmath>
#include <random>

#include "rst/gaussian_cells.hpp"
#include "rst/parallel.hpp"

namespace rst {

double ReferenceTensor::value_at_offset(const std::vector<int>& offset) const {
    const int c = center_cell();
    const double invh = 1.0 / grid.h();
    double scale = 1.0;
    for (std::size_t l = 0; l < offset.size(); ++l) scale *= invh;
    std::vector<int> idx(offset.size());
    for (std::size_t l = 0; l < offset.size(); ++l) {
        idx[l] = c + offset[l];
        require(idx[l] >= 0 && idx[l] < grid.points(),
                "value_at_offset: offset leaves the grid");
    }
    return tensor.entry(std::span<const int>(idx.data(), idx.size())) * scale;
}

double ReferenceTensor::center_value() const {
    return value_at_offset(std::vector<int>(tensor.order(), 0));
}

ReferenceTensor build_reference_kernel(const GridSpec& grid, const QuadratureRule& rule,
                                       const KernelSpec& kernel, int order, int threads) {
    require(order >= 1, "build_reference_kernel: order must be >= 1");
    const int R = rule.rank();
    const int n = grid.points();
    const double c0 = grid.center_coord();

    Eigen::MatrixXd axis(n, R);
    parallel_for(R, threads, [&](int k) {
        axis.col(k) = project_gaussian_mode(grid, rule.points[k], c0);
    });

    Eigen::VectorXd w(R);
    for (int k = 0; k < R; ++k) w[k] = rule.weights[k];
    std::vector<Eigen::MatrixXd> modes(order, axis);
    CanonicalTensor t(std::vector<int>(order, n), std::move(w), std::move(modes));
    return ReferenceTensor{std::move(t), grid, kernel, rule};
}

ReferenceTensor build_reference_kernel(const GridSpec& grid, const KernelSpec& kernel,
                                       double eps, int order, int threads) {
    const double a = 3.0 * grid.h();
    const double A = 2.0 * std::sqrt(3.0) * grid.extent();
    QuadratureRule rule = build_quadrature_eps(kernel, eps, a, A);
    return build_reference_kernel(grid, rule, kernel, order, threads);
}

double kernel_pointwise_error(const ReferenceTensor& ref, double exclusion,
                              std::int64_t sample_budget) {
    const GridSpec& g = ref.grid;
    const double h = g.h();
    require(exclusion >= h, "kernel_pointwise_error: exclusion radius below h");
    require(ref.tensor.order() == 3, "kernel_pointwise_error: 3D only");

    const int n = g.points();
    const int c = g.center_cell();
    const double h3 = h * h * h;

    auto rel_err = [&](int i, int j, int k) -> double {
        const double dx = (i - c) * h, dy = (j - c) * h, dz = (k - c) * h;
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (r <= exclusion) return 0.0;
        const double p = ref.kernel.radial(r);
        if (p <= 0.0) return 0.0;
        const double v = ref.tensor.entry(i, j, k) / h3;
        return std::abs(v - p) / p;
    };

    double worst = 0.0;
    const std::int64_t total = static_cast<std::int64_t>(n) * n * n;
    if (total <= sample_budget) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) worst = std::max(worst, rel_err(i, j, k));
        return worst;
    }

    // Axes, axis diagonals and a seeded random sample.
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, rel_err(i, c, c));
        worst = std::max(worst, rel_err(c, i, c));
        worst = std::max(worst, rel_err(c, c, i));
        worst = std::max(worst, rel_err(i, i, c));
        worst = std::max(worst, rel_err(i, i, i));
    }
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_int_distribution<int> pick(0, n - 1);
    const std::int64_t draws = sample_budget / 4;
    for (std::int64_t s = 0; s < draws; ++s)
        worst = std::max(worst, rel_err(pick(rng), pick(rng), pick(rng)));
    return worst;
}

} // namespace rst
