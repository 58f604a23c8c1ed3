#include "nlfb/eigen.hpp"
#include "nlfb/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nlfb;

namespace {

EigenProblem problem(double d, double theta0, double left, double right, int n,
                     KernelFamily fam = KernelFamily::Tent) {
    EigenProblem p;
    p.d = d;
    p.theta0 = theta0;
    p.left = left;
    p.right = right;
    p.n = n;
    p.kernel = make_kernel(fam, 1.0);
    return p;
}

double lam(double length, int n, double theta0 = 0.5) {
    return lambda_p(problem(1.0, theta0, 0.0, length, n)).lambda_p;
}

}  // namespace

TEST_CASE("short and long interval limits") {
    CHECK(std::abs(lam(1e-3, 8) + 0.5) < 1e-2);
    const double long_lambda = lam(40.0, nodes_for_spacing(40.0, 0.2));
    CHECK(long_lambda < 0.5);
    CHECK(long_lambda > 0.49);
}

TEST_CASE("lambda_p increases with length and stays in [theta0 - d, theta0]") {
    double prev = -1.0;
    for (double len : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        const double l = lam(len, nodes_for_spacing(len, 0.05));
        CHECK(l > prev);
        CHECK(l >= -0.5);
        CHECK(l <= 0.5);
        prev = l;
    }
}

TEST_CASE("constant shifts of theta0 shift lambda_p exactly") {
    const double base = lam(3.0, 61, 0.3);
    for (double s : {0.3, -0.7, 2.0}) {
        CHECK(std::abs(lam(3.0, 61, 0.3 + s) - (base + s)) < 1e-12);
    }
    CHECK(lam(3.0, 61, 0.3) < lam(3.0, 61, 0.6));
}

TEST_CASE("translation invariance") {
    const double a = lambda_p(problem(1.0, 0.0, 0.0, 2.0, 81)).lambda_p;
    const double b = lambda_p(problem(1.0, 0.0, 5.0, 7.0, 81)).lambda_p;
    CHECK(std::abs(a - b) < 1e-12);
}

TEST_CASE("eigenpair quality") {
    const EigenProblem p = problem(1.3, 0.2, -1.0, 2.5, 71, KernelFamily::ParabolicBump);
    const EigenResult r = lambda_p(p);
    double top = 0.0;
    for (double v : r.eigenfunction) {
        CHECK(v > 0.0);
        top = std::max(top, v);
    }
    CHECK(top == 1.0);
    CHECK(r.residual < 1e-8);
    CHECK(r.lambda_p >= p.theta0 - p.d);
    CHECK(r.lambda_p <= p.theta0);
    CHECK(std::abs(rayleigh_quotient(p, r.eigenfunction) - r.lambda_p) < 1e-10);
    for (int i = 0; i < p.n; ++i) {
        CHECK(nystrom_extend(p, r, r.nodes[i]) ==
              doctest::Approx(r.eigenfunction[i]).epsilon(1e-9));
    }
}

TEST_CASE("random positive trial vectors never beat lambda_p") {
    const EigenProblem p = problem(1.0, 0.5, 0.0, 3.0, 61);
    const EigenResult r = lambda_p(p);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.01, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> phi(p.n);
        for (double& v : phi) v = U(rng);
        CHECK(rayleigh_quotient(p, phi) <= r.lambda_p + 1e-10);
    }
}

TEST_CASE("agrees with a dense eigensolver") {
    for (KernelFamily fam : {KernelFamily::Tent, KernelFamily::TruncatedGaussian}) {
        const EigenProblem p = problem(1.0, 0.5, 0.0, 2.0, 161, fam);
        const double ours = lambda_p(p).lambda_p;
        const double dense = oracle::dense_lambda(1.0, 0.5, 0.0, 2.0, 4 * 160 + 1, p.kernel);
        CHECK(std::abs(ours - dense) < 1e-4);
    }
}

TEST_CASE("second-order grid convergence") {
    // spacings 1/8, 1/16, 1/32, 1/64 on (0, 4): nodes align with the kernel kinks
    double l[4];
    for (int i = 0; i < 4; ++i) l[i] = lam(4.0, 32 * (1 << i) + 1);
    const double d1 = std::abs(l[1] - l[0]), d2 = std::abs(l[2] - l[1]), d3 = std::abs(l[3] - l[2]);
    CHECK(d1 / d2 >= 3.0);
    CHECK(d2 / d3 >= 3.0);
}

TEST_CASE("unresolved kernels and bad problems are rejected") {
    try {
        (void)lambda_p(problem(1.0, 0.5, 0.0, 10.0, 9));
        FAIL("expected a resolution error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Resolution);
    }
    CHECK_THROWS_AS(lambda_p(problem(1.0, 0.5, 0.0, 1.0, 4)), Error);
    CHECK_THROWS_AS(lambda_p(problem(0.0, 0.5, 0.0, 1.0, 16)), Error);
    CHECK_THROWS_AS(lambda_p(problem(1.0, 0.5, 1.0, 1.0, 16)), Error);
}

TEST_CASE("iteration cap raises a convergence error with the last residual") {
    EigenOptions opts;
    opts.max_iterations = 3;
    try {
        (void)lambda_p(problem(1.0, 0.5, 0.0, 8.0, 161), opts);
        FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
        CHECK(e.kind() == ErrorKind::Convergence);
        CHECK(e.iterations() == 3);
        CHECK(e.last_residual() > 0.0);
    }
}

TEST_CASE("critical length") {
    const Kernel k = make_kernel(KernelFamily::Tent, 1.0);
    const CriticalLength c = critical_length(1.0, 0.5, k, 1e-6);
    CHECK(std::abs(c.lambda_at_ell_star) < 1e-6);
    CHECK(c.bracket_high - c.bracket_low < 1e-6);
    EigenProblem lo = problem(1.0, 0.5, 0.0, c.bracket_low, c.n);
    EigenProblem hi = problem(1.0, 0.5, 0.0, c.bracket_high, c.n);
    CHECK(lambda_p(lo).lambda_p <= 0.0);
    CHECK(lambda_p(hi).lambda_p >= 0.0);

    const double dense = oracle::dense_critical_length(1.0, 0.5, k, 0.0025, 0.3, 1.2);
    CHECK(std::abs(c.ell_star - dense) < 0.01 * dense);

    const double l3 = critical_length(1.0, 0.3, k, 1e-6).ell_star;
    const double l6 = critical_length(1.0, 0.6, k, 1e-6).ell_star;
    CHECK(l3 > l6);
}

TEST_CASE("no critical length when a >= d1") {
    const Kernel k = make_kernel(KernelFamily::Tent, 1.0);
    for (double a : {1.0, 1.5}) {
        try {
            (void)critical_length(1.0, a, k, 1e-6);
            FAIL("expected a no-root error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NoRoot);
        }
    }
}

TEST_CASE("search range is bounded") {
    const Kernel k = make_kernel(KernelFamily::Tent, 1.0);
    CriticalLengthOptions opts;
    opts.search_limit = 0.4;
    try {
        (void)critical_length(1.0, 0.5, k, 1e-6, opts);
        FAIL("expected a search-range error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SearchRange);
    }
}
