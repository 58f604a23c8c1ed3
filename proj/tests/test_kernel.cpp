#include "nlfb/error.hpp"
#include "nlfb/kernel.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace nlfb;

namespace {

const KernelFamily kFamilies[] = {KernelFamily::Tent, KernelFamily::ParabolicBump,
                                  KernelFamily::TruncatedGaussian};

std::vector<double> uniform(double a, double b, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
    x.back() = b;
    return x;
}

}  // namespace

TEST_CASE("kernel shape invariants") {
    for (KernelFamily fam : kFamilies) {
        for (double R : {0.5, 1.0, 2.0}) {
            CAPTURE(to_string(fam));
            CAPTURE(R);
            const Kernel k = make_kernel(fam, R);
            CHECK(k(0.0) > 0.0);
            CHECK(k(R) == 0.0);
            CHECK(k(1.5 * R) == 0.0);
            CHECK(k(-1.01 * R) == 0.0);
            for (int i = 0; i <= 1000; ++i) {
                const double s = -1.2 * R + 2.4 * R * i / 1000.0;
                CHECK(k(s) == k(-s));
                CHECK(k(s) >= 0.0);
            }
            const double mass = oracle::simpson([&](double s) { return k(s); }, -R, 0.0, 200000) +
                                oracle::simpson([&](double s) { return k(s); }, 0.0, R, 200000);
            CHECK(std::abs(mass - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("recorded Lipschitz constant bounds every difference quotient") {
    for (KernelFamily fam : kFamilies) {
        const Kernel k = make_kernel(fam, 1.3);
        const double L = k.lipschitz_constant();
        const double step = 2.0 * 1.4 / 20000;
        for (int i = 0; i < 20000; ++i) {
            const double s = -1.4 + i * step;
            CHECK(std::abs(k(s + step) - k(s)) <= L * step * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("positivity pair") {
    for (KernelFamily fam : kFamilies) {
        const Kernel k = make_kernel(fam, 1.0);
        CHECK(k.positivity_radius() == doctest::Approx(0.5));
        CHECK(k.positivity_floor() > 0.0);
        for (int i = 0; i < 1000; ++i) {
            const double s = k.positivity_radius() * (i / 1000.0);
            CHECK(k(s) > k.positivity_floor());
        }
    }
}

TEST_CASE("closed-form values") {
    const Kernel tent = make_kernel(KernelFamily::Tent, 1.0);
    CHECK(tent(0.0) == 1.0);
    const Kernel bump = make_kernel(KernelFamily::ParabolicBump, 2.0);
    CHECK(bump(0.7) == bump(-0.7));
    CHECK(bump(0.0) == doctest::Approx(3.0 / 8.0));
}

TEST_CASE("non-positive radius is rejected") {
    for (double R : {0.0, -1.0}) {
        try {
            (void)make_kernel(KernelFamily::Tent, R);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidParameter);
        }
    }
}

TEST_CASE("tail mass anchors and monotonicity") {
    for (KernelFamily fam : kFamilies) {
        const double R = 1.7;
        const Kernel k = make_kernel(fam, R);
        CHECK(k.tail_mass(-R) == 1.0);
        CHECK(k.tail_mass(-5.0 * R) == 1.0);
        CHECK(k.tail_mass(0.0) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(k.tail_mass(R) == 0.0);
        CHECK(k.tail_mass(3.0 * R) == 0.0);
        double prev = 2.0;
        for (int i = 0; i < 1000; ++i) {
            const double s = -1.1 * R + 2.2 * R * i / 999.0;
            const double t = k.tail_mass(s);
            CHECK(t <= prev);
            prev = t;
        }
    }
}

TEST_CASE("tail mass agrees with quadrature of the kernel") {
    const Kernel tent = make_kernel(KernelFamily::Tent, 1.0);
    CHECK(tent.tail_mass(1.0) == 0.0);
    CHECK(tent.tail_mass(0.5) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(std::abs(oracle::tail_by_quadrature(tent, 0.5) - 0.125) < 1e-12);
    for (KernelFamily fam : kFamilies) {
        const Kernel k = make_kernel(fam, 1.3);
        for (double s : {-1.0, -0.4, 0.1, 0.3, 0.77, 1.2}) {
            CAPTURE(s);
            CHECK(std::abs(k.tail_mass(s) - oracle::tail_by_quadrature(k, s)) < 1e-10);
        }
    }
}

TEST_CASE("nonlocal_apply of zero and constant fields") {
    const Kernel k = make_kernel(KernelFamily::Tent, 1.0);
    const auto x = uniform(0.0, 40.0, 801);
    const auto w = trapezoid_weights(x);
    const std::vector<double> zero(x.size(), 0.0), one(x.size(), 1.0);
    for (double v : nonlocal_apply(k, x, w, zero)) CHECK(v == 0.0);
    const auto out = nonlocal_apply(k, x, w, one);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(out[i] <= 1.0 + 1e-12);
        CHECK(out[i] >= 0.0);
        if (x[i] > 1.0 && x[i] < 39.0) CHECK(std::abs(out[i] - 1.0) < 1e-6);
    }
}

TEST_CASE("nonlocal_apply matches a brute-force double loop") {
    const Kernel k = make_kernel(KernelFamily::Tent, 1.0);
    // three-node toy grid
    const std::vector<double> x{0.0, 0.3, 0.7};
    const std::vector<double> f{0.2, 1.0, 0.5};
    const auto w = trapezoid_weights(x);
    const auto got = nonlocal_apply(k, x, w, f);
    const auto want = oracle::brute_convolution(k, x, f);
    for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));

    // and the coarse sum approximates the integral of the interpolated field computed at 10x
    const auto coarse = uniform(0.0, 0.8, 9);
    std::vector<double> fc(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) fc[i] = std::sin(2.0 * coarse[i]) + 1.0;
    const auto fine = uniform(0.0, 0.8, 81);
    std::vector<double> ff(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) ff[i] = std::sin(2.0 * fine[i]) + 1.0;
    const auto cw = trapezoid_weights(coarse);
    const auto c_out = nonlocal_apply(k, coarse, cw, fc);
    const auto f_out = oracle::brute_convolution(k, fine, ff);
    const double h = 0.1;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        CHECK(std::abs(c_out[i] - f_out[10 * i]) < 0.5 * h * h);
    }
}

TEST_CASE("nonlocal_apply is linear, positive and weighted self-adjoint") {
    const Kernel k = make_kernel(KernelFamily::ParabolicBump, 0.8);
    const auto x = uniform(-1.0, 2.0, 61);
    const auto w = trapezoid_weights(x);
    std::vector<double> f(x.size()), g(x.size()), fg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        f[i] = 1.0 + std::cos(x[i]);
        g[i] = x[i] * x[i];
        fg[i] = 2.0 * f[i] - 3.0 * g[i];
    }
    const auto kf = nonlocal_apply(k, x, w, f), kg = nonlocal_apply(k, x, w, g),
               kfg = nonlocal_apply(k, x, w, fg);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(kfg[i] == doctest::Approx(2.0 * kf[i] - 3.0 * kg[i]).epsilon(1e-12));
        CHECK(kf[i] >= 0.0);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double mij = w[j] * k(x[i] - x[j]);
            const double mji = w[i] * k(x[j] - x[i]);
            CHECK(w[i] * mij == doctest::Approx(w[j] * mji).epsilon(1e-15));
        }
    }
}

TEST_CASE("nonlocal_apply shape errors") {
    const Kernel k = make_kernel(KernelFamily::Tent, 1.0);
    const std::vector<double> x{0.0, 0.5, 1.0}, w{0.25, 0.5, 0.25}, f{1.0, 2.0};
    try {
        (void)nonlocal_apply(k, x, w, f);
        FAIL("expected a shape error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Shape);
    }
    const std::vector<double> bad{0.0, 0.5, 0.4};
    try {
        (void)trapezoid_weights(bad);
        FAIL("expected a shape error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Shape);
    }
}

TEST_CASE("uniform stencil has unit discrete mass") {
    for (KernelFamily fam : kFamilies) {
        for (double h : {0.3, 0.05, 0.0137}) {
            const auto c = uniform_stencil(make_kernel(fam, 1.0), h);
            double mass = c[0];
            for (std::size_t m = 1; m < c.size(); ++m) mass += 2.0 * c[m];
            CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}
