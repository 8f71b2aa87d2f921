#include "rst/laplacian.hpp"

namespace rst {

Eigen::VectorXd second_difference(const Eigen::VectorXd& v, double h) {
    const int n = static_cast<int>(v.size());
    require(n >= 3, "second_difference: n must be >= 3");
    Eigen::VectorXd d(n);
    const double inv = 1.0 / (h * h);
    d[0] = (-2.0 * v[0] + v[1]) * inv;
    for (int i = 1; i + 1 < n; ++i) d[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) * inv;
    d[n - 1] = (v[n - 2] - 2.0 * v[n - 1]) * inv;
    return d;
}

CanonicalTensor apply_laplacian(const CanonicalTensor& a, double h) {
    const int d = a.order();
    CanonicalTensor out(a.dims());
    for (int dir = 0; dir < d; ++dir) {
        std::vector<Eigen::MatrixXd> modes(d);
        for (int l = 0; l < d; ++l) modes[l] = a.mode(l);
        for (int q = 0; q < a.rank(); ++q)
            modes[dir].col(q) = second_difference(a.mode(dir).col(q), h);
        out.append_terms(CanonicalTensor(a.dims(), a.weights(), std::move(modes)));
    }
    return out;
}

Eigen::VectorXd dense_laplacian_3d(const Eigen::VectorXd& u, int n, double h) {
    require(u.size() == static_cast<std::int64_t>(n) * n * n,
            "dense_laplacian_3d: size mismatch");
    Eigen::VectorXd out(u.size());
    const double inv = 1.0 / (h * h);
    auto at = [&](int i, int j, int k) -> double {
        if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n) return 0.0;
        return u[static_cast<std::int64_t>(k) * n * n + j * n + i];
    };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                out[static_cast<std::int64_t>(k) * n * n + j * n + i] =
                    (at(i - 1, j, k) + at(i + 1, j, k) + at(i, j - 1, k) +
                     at(i, j + 1, k) + at(i, j, k - 1) + at(i, j, k + 1) -
                     6.0 * at(i, j, k)) *
                    inv;
    return out;
}

} // namespace rst
