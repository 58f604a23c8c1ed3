#include "nlfb/model.hpp"

#include "nlfb/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nlfb {

std::string_view to_string(InteractionKind kind) {
    return kind == InteractionKind::Competition ? "competition" : "predation";
}

InteractionKind interaction_kind_from_string(std::string_view name) {
    if (name == "competition") return InteractionKind::Competition;
    if (name == "predation") return InteractionKind::Predation;
    throw Error(ErrorKind::InvalidParameter,
                "unknown interaction kind '" + std::string(name) +
                    "' (expected competition or predation)");
}

void ModelParams::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"d1", d1}, {"d2", d2}, {"a", a}, {"b", b}, {"c", c}, {"mu", mu}, {"rho", rho}};
    for (const auto& [name, value] : fields) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw Error(ErrorKind::InvalidParameter,
                        std::string("model.") + name + " must be > 0");
        }
    }
}

bool ModelParams::weak_competition() const noexcept {
    return kind == InteractionKind::Competition && 1.0 / c > a && a > b;
}

bool ModelParams::weak_predation() const noexcept {
    return kind == InteractionKind::Predation && a > b + a * b * c;
}

ModelParams ModelParams::with_front_coefficients(double new_mu, double new_rho) const {
    ModelParams q = *this;
    q.mu = new_mu;
    q.rho = new_rho;
    return q;
}

Rates reaction(const ModelParams& p, double u, double v) {
    if (u < 0.0 || v < 0.0) {
        throw Error(ErrorKind::Domain, "reaction: densities must be nonnegative (u=" +
                                           std::to_string(u) + ", v=" + std::to_string(v) + ")");
    }
    return reaction_unchecked(p, u, v);
}

std::pair<double, double> coexistence_state(const ModelParams& p) {
    const double a = p.a, b = p.b, c = p.c;
    if (p.weak_competition()) {
        return {(a - b) / (1.0 - b * c), (1.0 - a * c) / (1.0 - b * c)};
    }
    if (p.weak_predation()) {
        return {(a - b) / (1.0 + b * c), (1.0 + a * c) / (1.0 + b * c)};
    }
    throw Error(ErrorKind::Regime,
                "coexistence state requires weak competition (1/c > a > b) or weak "
                "predation (a > b + abc)");
}

double InitialData::spacing() const {
    return 2.0 * h0 / static_cast<double>(u0.size() - 1);
}

namespace {

double clamp_index(double pos, std::size_t last) {
    return std::clamp(pos, 0.0, static_cast<double>(last));
}

}  // namespace

double InitialData::u0_at(double x) const {
    if (x <= -h0 || x >= h0) return 0.0;
    const std::size_t last = u0.size() - 1;
    const double pos = clamp_index((x + h0) / spacing(), last);
    const auto i = std::min(static_cast<std::size_t>(pos), last - 1);
    const double t = pos - static_cast<double>(i);
    return (1.0 - t) * u0[i] + t * u0[i + 1];
}

double InitialData::v0_at(double x) const {
    if (x <= -h0 || x >= h0) return 0.0;
    const std::size_t last = v0.size() - 1;
    const double pos = clamp_index((x + h0) / spacing(), last);
    auto i = std::min(static_cast<std::size_t>(pos), last - 1);
    const double t = pos - static_cast<double>(i);
    if (last < 3) return (1.0 - t) * v0[i] + t * v0[i + 1];
    // Lagrange cubic through the four nearest samples, shifted inward at the ends.
    std::size_t s = i == 0 ? 0 : i - 1;
    if (s + 3 > last) s = last - 3;
    const double xq = pos - static_cast<double>(s);
    double acc = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
        double basis = 1.0;
        for (std::size_t q = 0; q < 4; ++q) {
            if (q != m) {
                basis *= (xq - static_cast<double>(q)) /
                         (static_cast<double>(m) - static_cast<double>(q));
            }
        }
        acc += basis * v0[s + m];
    }
    return std::max(acc, 0.0);
}

double InitialData::u0_sup() const {
    return u0.empty() ? 0.0 : *std::max_element(u0.begin(), u0.end());
}

double InitialData::v0_sup() const {
    return v0.empty() ? 0.0 : *std::max_element(v0.begin(), v0.end());
}

double InitialData::v0_slope_sup() const {
    double s = 0.0;
    const double dx = spacing();
    for (std::size_t i = 0; i + 1 < v0.size(); ++i) {
        s = std::max(s, std::abs(v0[i + 1] - v0[i]) / dx);
    }
    return s;
}

void InitialData::validate() const {
    if (!(h0 > 0.0) || !std::isfinite(h0)) {
        throw Error(ErrorKind::InvalidParameter, "init.h0 must be > 0");
    }
    if (u0.size() < 3 || u0.size() != v0.size()) {
        throw Error(ErrorKind::Shape,
                    "initial data needs matching u0/v0 sample vectors with at least 3 points");
    }
    const std::size_t last = u0.size() - 1;
    if (u0[0] != 0.0 || u0[last] != 0.0 || v0[0] != 0.0 || v0[last] != 0.0) {
        throw Error(ErrorKind::InvalidParameter, "initial data must vanish at x = +-h0");
    }
    for (std::size_t i = 1; i < last; ++i) {
        if (!(u0[i] > 0.0) || !(v0[i] > 0.0) || !std::isfinite(u0[i]) ||
            !std::isfinite(v0[i])) {
            throw Error(ErrorKind::InvalidParameter,
                        "initial data must be positive inside (-h0, h0)");
        }
    }
}

InitialData cosine_initial_data(double h0, double u_amplitude, double v_amplitude,
                                std::size_t intervals) {
    if (!(h0 > 0.0)) throw Error(ErrorKind::InvalidParameter, "init.h0 must be > 0");
    if (!(u_amplitude > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "init.u0_amplitude must be > 0");
    }
    if (!(v_amplitude > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "init.v0_amplitude must be > 0");
    }
    if (intervals < 2) throw Error(ErrorKind::InvalidParameter, "need at least 2 intervals");
    InitialData init;
    init.h0 = h0;
    init.u0.resize(intervals + 1);
    init.v0.resize(intervals + 1);
    const auto n = static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) {
        // y in [-1, 1] computed antisymmetrically so mirrored samples agree bitwise
        const double y = (2.0 * static_cast<double>(i) - n) / n;
        const double profile = std::cos(0.5 * std::numbers::pi * y);
        init.u0[i] = u_amplitude * profile;
        init.v0[i] = v_amplitude * profile;
    }
    init.u0.front() = init.u0.back() = 0.0;
    init.v0.front() = init.v0.back() = 0.0;
    return init;
}

PositivityPair positivity_pair(const Kernel& k, double h0) {
    const double eps = std::min(k.positivity_radius(), h0 / 8.0);
    return {eps, k(eps) * (1.0 - 1e-9)};
}

SolutionBounds bounds(const ModelParams& p, const InitialData& init) {
    SolutionBounds sb;
    sb.k1 = std::max(init.u0_sup(), p.a);
    if (p.kind == InteractionKind::Competition) {
        sb.k2 = std::max(init.v0_sup(), 1.0);
        // v(1 - v - cu) is largest at u = 0, v = 1/2 (k2 >= 1 > 1/2)
        sb.L = 0.25;
    } else {
        sb.k2 = std::max(init.v0_sup(), 1.0 + p.c * sb.k1);
        // v(1 - v + cu) is largest at u = k1, v = (1 + c k1)/2 <= k2
        const double top = 1.0 + p.c * sb.k1;
        sb.L = 0.25 * top * top;
    }
    sb.k3 = std::max({1.0 / init.h0, std::sqrt(sb.L / (2.0 * p.d2)),
                      init.v0_slope_sup() / sb.k2});
    return sb;
}

}  // namespace nlfb
