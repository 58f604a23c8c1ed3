#include "nlfb/eigen.hpp"

#include "nlfb/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nlfb {

namespace {

struct BandedOperator {
    std::vector<double> stencil;  // mass-normalized h J(m h)
    std::vector<double> end_factor;  // trapezoid weight / h
    std::vector<double> weights;
    double d = 1.0;

    // y = d * K_w x, the nonnegative part of the operator
    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        const auto n = static_cast<std::ptrdiff_t>(x.size());
        const auto band = static_cast<std::ptrdiff_t>(stencil.size());
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - band + 1);
            const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + band - 1);
            double acc = 0.0;
            for (std::ptrdiff_t j = lo; j <= hi; ++j) {
                acc += end_factor[j] * stencil[std::abs(i - j)] * x[j];
            }
            y[i] = d * acc;
        }
    }
};

// LU factors of sigma I - d K_w in band storage; no pivoting is needed because the
// matrix is strictly diagonally dominant by rows when sigma exceeds every row sum.
struct ShiftedSolver {
    std::ptrdiff_t n = 0;
    std::ptrdiff_t p = 0;       // half bandwidth
    std::vector<double> band;  // row i, column j stored at i * (2p + 1) + (j - i + p)

    double& at(std::ptrdiff_t i, std::ptrdiff_t j) {
        return band[static_cast<std::size_t>(i * (2 * p + 1) + (j - i + p))];
    }
    double at(std::ptrdiff_t i, std::ptrdiff_t j) const {
        return band[static_cast<std::size_t>(i * (2 * p + 1) + (j - i + p))];
    }

    ShiftedSolver(const BandedOperator& op, std::ptrdiff_t size, double sigma)
        : n(size), p(static_cast<std::ptrdiff_t>(op.stencil.size()) - 1) {
        band.assign(static_cast<std::size_t>(n * (2 * p + 1)), 0.0);
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - p);
                 j <= std::min(n - 1, i + p); ++j) {
                at(i, j) = -op.d * op.end_factor[j] * op.stencil[std::abs(i - j)];
            }
            at(i, i) += sigma;
        }
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            const double pivot = at(k, k);
            if (!(pivot > 0.0)) {
                throw Error(ErrorKind::LinearAlgebra, "eigen: shifted matrix lost dominance");
            }
            const std::ptrdiff_t last = std::min(n - 1, k + p);
            for (std::ptrdiff_t i = k + 1; i <= last; ++i) {
                const double factor = at(i, k) / pivot;
                at(i, k) = factor;
                if (factor == 0.0) continue;
                for (std::ptrdiff_t j = k + 1; j <= last; ++j) at(i, j) -= factor * at(k, j);
            }
        }
    }

    // x <- (sigma I - d K_w)^{-1} x
    void solve(std::vector<double>& x) const {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            double acc = x[i];
            for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - p); j < i; ++j) {
                acc -= at(i, j) * x[j];
            }
            x[i] = acc;
        }
        for (std::ptrdiff_t i = n - 1; i >= 0; --i) {
            double acc = x[i];
            for (std::ptrdiff_t j = i + 1; j <= std::min(n - 1, i + p); ++j) acc -= at(i, j) * x[j];
            x[i] = acc / at(i, i);
        }
    }
};

void check_problem(const EigenProblem& prob) {
    if (!(prob.d > 0.0)) throw Error(ErrorKind::InvalidParameter, "eigen: d must be > 0");
    if (!std::isfinite(prob.theta0)) {
        throw Error(ErrorKind::InvalidParameter, "eigen: theta0 must be finite");
    }
    if (!(prob.right > prob.left)) {
        throw Error(ErrorKind::InvalidParameter, "eigen: interval must satisfy right > left");
    }
    if (prob.n < 8) throw Error(ErrorKind::InvalidParameter, "eigen: n must be >= 8");
    const double R = prob.kernel.support_radius();
    if (!(prob.spacing() < 0.25 * R)) {
        throw Error(ErrorKind::Resolution,
                    "eigen: node spacing " + std::to_string(prob.spacing()) +
                        " does not resolve the kernel (need < R/4 = " +
                        std::to_string(0.25 * R) + ")");
    }
}

BandedOperator assemble(const EigenProblem& prob) {
    BandedOperator op;
    op.d = prob.d;
    const double h = prob.spacing();
    op.stencil = uniform_stencil(prob.kernel, h);
    op.end_factor.assign(static_cast<std::size_t>(prob.n), 1.0);
    op.end_factor.front() = op.end_factor.back() = 0.5;
    op.weights.assign(static_cast<std::size_t>(prob.n), h);
    op.weights.front() = op.weights.back() = 0.5 * h;
    return op;
}

std::vector<double> make_nodes(const EigenProblem& prob) {
    std::vector<double> x(static_cast<std::size_t>(prob.n));
    const double h = prob.spacing();
    for (int k = 0; k < prob.n; ++k) x[k] = prob.left + k * h;
    x.back() = prob.right;
    return x;
}

}  // namespace

int nodes_for_spacing(double length, double max_spacing) {
    // strictly below max_spacing
    const double intervals = std::floor(length / max_spacing) + 1.0;
    return std::max(8, static_cast<int>(intervals) + 1);
}

std::vector<double> apply_operator(const EigenProblem& prob, const std::vector<double>& phi) {
    check_problem(prob);
    if (phi.size() != static_cast<std::size_t>(prob.n)) {
        throw Error(ErrorKind::Shape, "apply_operator: vector length must equal n");
    }
    const BandedOperator op = assemble(prob);
    std::vector<double> y(phi.size());
    op.apply(phi, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += (prob.theta0 - prob.d) * phi[i];
    return y;
}

double rayleigh_quotient(const EigenProblem& prob, const std::vector<double>& phi) {
    const std::vector<double> Aphi = apply_operator(prob, phi);
    const BandedOperator op = assemble(prob);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        num += op.weights[i] * phi[i] * Aphi[i];
        den += op.weights[i] * phi[i] * phi[i];
    }
    if (!(den > 0.0)) throw Error(ErrorKind::InvalidParameter, "rayleigh_quotient: zero vector");
    return num / den;
}

EigenResult lambda_p(const EigenProblem& prob, const EigenOptions& opts) {
    check_problem(prob);
    const BandedOperator op = assemble(prob);
    const auto n = static_cast<std::size_t>(prob.n);

    // Positive even start close to the large-domain profile.
    std::vector<double> phi(n), next(n);
    for (std::size_t k = 0; k < n; ++k) {
        phi[k] = 0.5 + std::sin(std::numbers::pi * (static_cast<double>(k) + 0.5) /
                                static_cast<double>(n));
    }

    // Inverse iteration with a fixed shift above every row sum: the inverse is
    // entrywise positive, so its dominant eigenvector is the Perron vector of K_w.
    std::vector<double> ones(n, 1.0), rows(n);
    op.apply(ones, rows);
    const double row_max = *std::max_element(rows.begin(), rows.end());
    const double sigma = row_max * (1.0 + 1e-10) + 1e-300;
    const ShiftedSolver solver(op, static_cast<std::ptrdiff_t>(n), sigma);

    int it = 0;
    double change = 1.0;
    while (it < opts.max_iterations) {
        next = phi;
        solver.solve(next);
        ++it;
        const double top = *std::max_element(next.begin(), next.end());
        if (!(top > 0.0) || !std::isfinite(top)) {
            throw Error(ErrorKind::NumericalBlowup, "eigen: iterate lost positivity");
        }
        change = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            next[k] /= top;
            change = std::max(change, std::abs(next[k] - phi[k]));
        }
        phi.swap(next);
        if (change < opts.tolerance) break;
    }

    EigenResult res;
    res.iterations = it;
    res.nodes = make_nodes(prob);
    res.weights = op.weights;

    // Rayleigh quotient of the nonnegative part, then shift back by theta0 - d.
    op.apply(phi, next);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        num += op.weights[k] * phi[k] * next[k];
        den += op.weights[k] * phi[k] * phi[k];
    }
    const double top_eig = num / den;
    double residual = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        residual = std::max(residual, std::abs(next[k] - top_eig * phi[k]));
    }
    res.lambda_p = (prob.theta0 - prob.d) + top_eig;
    res.residual = residual;
    res.eigenfunction = std::move(phi);

    if (change >= opts.tolerance || residual >= opts.residual_tolerance) {
        throw ConvergenceError("eigen: inverse iteration did not converge in " +
                                   std::to_string(it) + " iterations (last change " +
                                   std::to_string(change) + ", residual " +
                                   std::to_string(residual) + ")",
                               residual, it);
    }
    for (double v : res.eigenfunction) {
        if (!(v > 0.0)) {
            throw Error(ErrorKind::NumericalBlowup, "eigen: eigenfunction is not strictly positive");
        }
    }
    return res;
}

double nystrom_extend(const EigenProblem& prob, const EigenResult& res, double x) {
    const double denom = res.lambda_p - prob.theta0 + prob.d;
    const double h = prob.spacing();
    const double scale = uniform_stencil(prob.kernel, h)[0] / (h * prob.kernel(0.0));
    double acc = 0.0;
    for (std::size_t j = 0; j < res.nodes.size(); ++j) {
        acc += res.weights[j] * prob.kernel(x - res.nodes[j]) * res.eigenfunction[j];
    }
    return prob.d * scale * acc / denom;
}

namespace {

double lambda_at(double d1, double a, const Kernel& k, double length, int n,
                 const EigenOptions& opts) {
    EigenProblem prob{d1, a, 0.0, length, n, k};
    return lambda_p(prob, opts).lambda_p;
}

}  // namespace

CriticalLength critical_length(double d1, double a, const Kernel& k, double tol,
                               const CriticalLengthOptions& opts) {
    if (!(d1 > 0.0) || !(a > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "critical_length: d1 and a must be > 0");
    }
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "critical_length: tol must be > 0");
    if (a >= d1) {
        throw Error(ErrorKind::NoRoot,
                    "critical_length: a >= d1, lambda_p(L_I + a) > 0 for every interval so no "
                    "critical length exists");
    }
    const double R = k.support_radius();
    const double spacing = opts.max_spacing_fraction * R;
    const double limit = opts.search_limit > 0.0 ? opts.search_limit : 1000.0 * R;

    auto eval_adaptive = [&](double len) {
        return lambda_at(d1, a, k, len, nodes_for_spacing(len, spacing), opts.eigen);
    };

    // Lower end: lambda < 0 for short intervals since the limit there is a - d1 < 0.
    double lo = 8.0 * spacing;
    while (eval_adaptive(lo) >= 0.0) {
        lo *= 0.5;
        if (lo < 1e-12 * R) {
            throw Error(ErrorKind::SearchRange, "critical_length: no negative eigenvalue found");
        }
    }
    // Upper end: geometric expansion, first inside the initial bracket then beyond it.
    double hi = lo;
    double lam_hi = -1.0;
    while (lam_hi <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > limit) {
            throw Error(ErrorKind::SearchRange,
                        "critical_length: lambda_p stays negative up to length " +
                            std::to_string(limit));
        }
        lam_hi = eval_adaptive(hi);
    }

    // Bisection with a frozen node count so lambda is continuous in the length.
    const int n = nodes_for_spacing(hi, spacing);
    auto eval = [&](double len) { return lambda_at(d1, a, k, len, n, opts.eigen); };
    while (eval(lo) >= 0.0) lo *= 0.5;
    while (eval(hi) <= 0.0) hi *= 1.25;

    CriticalLength out;
    out.n = n;
    double mid = 0.5 * (lo + hi);
    double lam_mid = eval(mid);
    int steps = 0;
    while (steps < 200) {
        if (hi - lo < tol && std::abs(lam_mid) < opts.lambda_tolerance) break;
        if (lam_mid < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        mid = 0.5 * (lo + hi);
        lam_mid = eval(mid);
        ++steps;
    }
    out.ell_star = mid;
    out.lambda_at_ell_star = lam_mid;
    out.bracket_low = lo;
    out.bracket_high = hi;
    out.bisections = steps;
    return out;
}

}  // namespace nlfb
