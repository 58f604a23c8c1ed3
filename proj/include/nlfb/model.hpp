#pragma once

#include "nlfb/kernel.hpp"

#include <string_view>
#include <utility>
#include <vector>

namespace nlfb {

enum class InteractionKind { Competition, Predation };

std::string_view to_string(InteractionKind kind);
InteractionKind interaction_kind_from_string(std::string_view name);

/// Coefficients of the two-species system. u spreads nonlocally (d1),
/// v diffuses locally (d2); mu and rho drive the fronts.
struct ModelParams {
    double d1 = 1.0;
    double d2 = 1.0;
    double a = 0.5;
    double b = 0.5;
    double c = 0.5;
    double mu = 1.0;
    double rho = 1.0;
    InteractionKind kind = InteractionKind::Competition;

    /// Throws Error(InvalidParameter) naming the first non-positive field.
    void validate() const;

    /// 1/c > a > b under competition. Strict, no tolerance.
    bool weak_competition() const noexcept;
    /// a > b + a*b*c under predation. Strict, no tolerance.
    bool weak_predation() const noexcept;

    /// Copy with (mu, rho) replaced.
    ModelParams with_front_coefficients(double new_mu, double new_rho) const;
};

struct Rates {
    double f1 = 0.0;
    double f2 = 0.0;
};

/// Reaction pair; throws Error(Domain) on negative densities.
Rates reaction(const ModelParams& p, double u, double v);

/// Same evaluation without the sign check, for hot loops that validate separately.
inline Rates reaction_unchecked(const ModelParams& p, double u, double v) noexcept {
    const double f1 = u * (p.a - u - p.b * v);
    const double f2 = p.kind == InteractionKind::Competition ? v * (1.0 - v - p.c * u)
                                                             : v * (1.0 - v + p.c * u);
    return {f1, f2};
}

/// Positive constant state reached on spreading in the weak regimes.
/// Throws Error(Regime) outside weak competition / weak predation.
std::pair<double, double> coexistence_state(const ModelParams& p);

/// Initial population on [-h0, h0], stored as uniform samples including endpoints.
/// u0 is read back piecewise linearly, v0 with 4-point cubic interpolation.
struct InitialData {
    double h0 = 1.0;
    std::vector<double> u0;
    std::vector<double> v0;

    double spacing() const;
    double u0_at(double x) const;
    double v0_at(double x) const;
    double u0_sup() const;
    double v0_sup() const;
    /// Largest secant slope of v0, used for the front-gradient bound.
    double v0_slope_sup() const;

    /// Endpoint zeros, interior positivity, matching sample counts.
    void validate() const;
};

/// u0 = mu_amp cos(pi x / 2h0), v0 = mv_amp cos(pi x / 2h0).
InitialData cosine_initial_data(double h0, double u_amplitude, double v_amplitude,
                                std::size_t intervals = 400);

/// Kernel positivity pair (eps, delta0) with J > delta0 on |s| < eps and eps < h0/4.
struct PositivityPair {
    double radius = 0.0;
    double floor = 0.0;
};
PositivityPair positivity_pair(const Kernel& k, double h0);

/// Field and front-gradient bounds valid along the whole solution.
struct SolutionBounds {
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double L = 0.0;  // sup of f2 over (0,k1) x (0,k2)
};

SolutionBounds bounds(const ModelParams& p, const InitialData& init);

}  // namespace nlfb
