#include "nlfb/kernel.hpp"

#include "nlfb/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nlfb {

std::string_view to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::Tent: return "tent";
        case KernelFamily::ParabolicBump: return "parabolic_bump";
        case KernelFamily::TruncatedGaussian: return "truncated_gaussian";
    }
    return "unknown";
}

KernelFamily kernel_family_from_string(std::string_view name) {
    if (name == "tent") return KernelFamily::Tent;
    if (name == "parabolic_bump") return KernelFamily::ParabolicBump;
    if (name == "truncated_gaussian") return KernelFamily::TruncatedGaussian;
    throw Error(ErrorKind::InvalidParameter,
                "unknown kernel family '" + std::string(name) +
                    "' (expected tent, parabolic_bump or truncated_gaussian)");
}

Kernel make_kernel(KernelFamily family, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw Error(ErrorKind::InvalidParameter, "kernel radius must be > 0");
    }
    Kernel k;
    k.family_ = family;
    k.radius_ = radius;
    const double R = radius;
    switch (family) {
        case KernelFamily::Tent:
            k.norm_ = 1.0 / R;
            k.lipschitz_ = 1.0 / (R * R);
            break;
        case KernelFamily::ParabolicBump:
            k.norm_ = 3.0 / (4.0 * R);
            k.lipschitz_ = 3.0 / (2.0 * R * R);
            break;
        case KernelFamily::TruncatedGaussian: {
            const double sigma = 0.5 * R;
            const double edge = std::exp(-R * R / (2.0 * sigma * sigma));
            const double mass = sigma * std::sqrt(2.0 * std::numbers::pi) *
                                    std::erf(R / (sigma * std::numbers::sqrt2)) -
                                2.0 * R * edge;
            k.sigma_ = sigma;
            k.offset_ = edge;
            k.norm_ = 1.0 / mass;
            // |d/ds exp(-s^2/2sigma^2)| peaks at s = sigma < R
            k.lipschitz_ = k.norm_ / (sigma * std::sqrt(std::numbers::e));
            break;
        }
    }
    k.floor_ = k(0.5 * R) * (1.0 - 1e-9);
    return k;
}

double Kernel::operator()(double s) const noexcept {
    const double a = std::abs(s);
    if (a >= radius_) return 0.0;
    switch (family_) {
        case KernelFamily::Tent:
            return norm_ * (1.0 - a / radius_);
        case KernelFamily::ParabolicBump: {
            const double t = a / radius_;
            return norm_ * (1.0 - t * t);
        }
        case KernelFamily::TruncatedGaussian:
            return norm_ * (std::exp(-a * a / (2.0 * sigma_ * sigma_)) - offset_);
    }
    return 0.0;
}

double Kernel::tail_right_half(double s) const noexcept {
    const double R = radius_;
    switch (family_) {
        case KernelFamily::Tent: {
            const double r = (R - s) / R;
            return 0.5 * r * r;
        }
        case KernelFamily::ParabolicBump: {
            const double t = s / R;
            return (2.0 - 3.0 * t + t * t * t) / 4.0;
        }
        case KernelFamily::TruncatedGaussian: {
            const double scale = sigma_ * std::numbers::sqrt2;
            const double g = sigma_ * std::sqrt(std::numbers::pi / 2.0) *
                             (std::erf(R / scale) - std::erf(s / scale));
            return norm_ * (g - (R - s) * offset_);
        }
    }
    return 0.0;
}

double Kernel::tail_mass(double s) const noexcept {
    if (s >= radius_) return 0.0;
    if (s <= -radius_) return 1.0;
    if (s >= 0.0) return tail_right_half(s);
    return 1.0 - tail_right_half(-s);
}

double Kernel::mean_tail() const noexcept {
    const double R = radius_;
    switch (family_) {
        case KernelFamily::Tent: return R / 6.0;
        case KernelFamily::ParabolicBump: return 3.0 * R / 16.0;
        case KernelFamily::TruncatedGaussian:
            return norm_ * (sigma_ * sigma_ * (1.0 - offset_) - 0.5 * offset_ * R * R);
    }
    return 0.0;
}

std::vector<double> trapezoid_weights(std::span<const double> nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> w(n, 0.0);
    if (n < 2) return w;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = nodes[i + 1] - nodes[i];
        if (!(h > 0.0)) {
            throw Error(ErrorKind::Shape, "trapezoid nodes must be strictly increasing");
        }
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

std::vector<double> nonlocal_apply(const Kernel& k,
                                   std::span<const double> nodes,
                                   std::span<const double> weights,
                                   std::span<const double> field) {
    const std::size_t n = nodes.size();
    if (weights.size() != n || field.size() != n) {
        throw Error(ErrorKind::Shape,
                    "nonlocal_apply: nodes, weights and field must have equal length (" +
                        std::to_string(n) + ", " + std::to_string(weights.size()) + ", " +
                        std::to_string(field.size()) + ")");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(nodes[i] > nodes[i - 1])) {
            throw Error(ErrorKind::Shape, "nonlocal_apply: nodes must be strictly increasing");
        }
    }
    const double R = k.support_radius();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = nodes[i];
        auto first = std::upper_bound(nodes.begin(), nodes.end(), x - R);
        auto last = std::lower_bound(nodes.begin(), nodes.end(), x + R);
        double acc = 0.0;
        for (auto it = first; it != last; ++it) {
            const auto j = static_cast<std::size_t>(it - nodes.begin());
            acc += weights[j] * k(x - nodes[j]) * field[j];
        }
        out[i] = acc;
    }
    return out;
}

std::vector<double> uniform_stencil(const Kernel& k, double spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw Error(ErrorKind::InvalidParameter, "stencil spacing must be > 0");
    }
    std::vector<double> c;
    double mass = 0.0;
    for (std::size_t m = 0;; ++m) {
        const double s = static_cast<double>(m) * spacing;
        if (s >= k.support_radius()) break;
        c.push_back(spacing * k(s));
        mass += m == 0 ? c.back() : 2.0 * c.back();
    }
    for (double& v : c) v /= mass;
    return c;
}

}  // namespace nlfb
