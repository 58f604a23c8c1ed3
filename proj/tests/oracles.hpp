#pragma once
// Independent reference computations used to check the library.

#include "nlfb/kernel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Composite Simpson rule with `panels` (even) subintervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

/// Tail mass by direct quadrature of J on [s, R], split at 0 so kinks sit on panel edges.
inline double tail_by_quadrature(const nlfb::Kernel& k, double s, int panels = 200000) {
    const double R = k.support_radius();
    if (s >= R) return 0.0;
    if (s <= -R) return 1.0;
    auto J = [&](double x) { return k(x); };
    if (s < 0.0) return simpson(J, s, 0.0, panels) + simpson(J, 0.0, R, panels);
    return simpson(J, s, R, panels);
}

/// Largest eigenvalue of d (K_w - I) + theta0 with plain trapezoid weights, by a
/// dense symmetric eigensolver on W^{1/2} A W^{-1/2}.
inline double dense_lambda(double d, double theta0, double left, double right, int n,
                           const nlfb::Kernel& k) {
    const double h = (right - left) / (n - 1);
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
    w(0) = w(n - 1) = 0.5 * h;
    Eigen::MatrixXd S(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double xi = left + i * h, xj = left + j * h;
            S(i, j) = d * std::sqrt(w(i) * w(j)) * k(xi - xj);
        }
        S(i, i) += theta0 - d;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

/// Bisection for the length where dense_lambda(d1, a, .) = 0 with node spacing <= spacing.
inline double dense_critical_length(double d1, double a, const nlfb::Kernel& k, double spacing,
                                    double lo, double hi, double tol = 1e-7) {
    auto f = [&](double len) {
        const int n = std::max(8, static_cast<int>(std::ceil(len / spacing)) + 1);
        return dense_lambda(d1, a, 0.0, len, n, k);
    };
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// sum_j w_j J(x_i - x_j) f_j, written as a plain double loop.
inline std::vector<double> brute_convolution(const nlfb::Kernel& k, const std::vector<double>& x,
                                             const std::vector<double>& f) {
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double wj = 0.0;
            if (j > 0) wj += 0.5 * (x[j] - x[j - 1]);
            if (j + 1 < n) wj += 0.5 * (x[j + 1] - x[j]);
            out[i] += wj * k(x[i] - x[j]) * f[j];
        }
    }
    return out;
}

/// integral over x in [g, h], y in [h, h + R] of J(x - y) u(x), midpoint rule on an m x m grid.
inline double outward_flux_2d(const nlfb::Kernel& k, double g, double h,
                              const std::function<double(double)>& u, int m) {
    const double R = k.support_radius();
    const double dx = (h - g) / m, dy = R / m;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        const double x = g + (i + 0.5) * dx;
        const double ux = u(x);
        if (ux == 0.0) continue;
        double inner = 0.0;
        for (int j = 0; j < m; ++j) inner += k(x - (h + (j + 0.5) * dy));
        acc += ux * inner * dy;
    }
    return acc * dx;
}

/// Positive steady state of u_t = d (K u - u) + u (theta0 - u) on uniform nodes,
/// by damped fixed-point iteration of u = [-(d - theta0) + sqrt((d - theta0)^2 + 4 d Ku)] / 2
/// with plain trapezoid weights.
inline std::vector<double> logistic_steady_state(double d, double theta0, double left, double right,
                                                 int n, const nlfb::Kernel& k,
                                                 int iterations = 20000, double damping = 0.5) {
    std::vector<double> x(n), u(n, theta0);
    const double h = (right - left) / (n - 1);
    for (int i = 0; i < n; ++i) x[i] = left + i * h;
    const double s = d - theta0;
    const int band = static_cast<int>(std::ceil(k.support_radius() / h));
    std::vector<double> ku(n);
    for (int it = 0; it < iterations; ++it) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = std::max(0, i - band); j <= std::min(n - 1, i + band); ++j) {
                const double wj = (j == 0 || j == n - 1) ? 0.5 * h : h;
                acc += wj * k(x[i] - x[j]) * u[j];
            }
            ku[i] = acc;
        }
        double change = 0.0;
        for (int i = 0; i < n; ++i) {
            const double target = 0.5 * (-s + std::sqrt(s * s + 4.0 * d * ku[i]));
            const double next = (1.0 - damping) * u[i] + damping * target;
            change = std::max(change, std::abs(next - u[i]));
            u[i] = next;
        }
        if (change < 1e-13) break;
    }
    return u;
}

}  // namespace oracle
