#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace nlfb {

enum class KernelFamily { Tent, ParabolicBump, TruncatedGaussian };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

/// Symmetric, unit-mass, compactly supported Lipschitz dispersal kernel.
///
/// Evaluation and tail mass are closed form per family; nothing is tabulated.
/// The truncated Gaussian is shifted down by its value at the support edge so
/// that it stays continuous (hence Lipschitz) on the whole line.
class Kernel {
public:
    KernelFamily family() const noexcept { return family_; }
    double support_radius() const noexcept { return radius_; }
    double normalization_constant() const noexcept { return norm_; }
    double lipschitz_constant() const noexcept { return lipschitz_; }
    /// Radius below which the kernel stays above positivity_floor().
    double positivity_radius() const noexcept { return 0.5 * radius_; }
    double positivity_floor() const noexcept { return floor_; }

    double operator()(double s) const noexcept;

    /// Mass to the right of s: the integral of J over (s, inf).
    double tail_mass(double s) const noexcept;

    /// Integral of tail_mass over (0, inf), the mean outward jump length.
    double mean_tail() const noexcept;

    friend Kernel make_kernel(KernelFamily family, double radius);

private:
    Kernel() = default;
    double tail_right_half(double s) const noexcept;  // s in [0, R]

    KernelFamily family_ = KernelFamily::Tent;
    double radius_ = 1.0;
    double norm_ = 1.0;
    double sigma_ = 0.5;   // gaussian width
    double offset_ = 0.0;  // gaussian value at the support edge (before scaling)
    double lipschitz_ = 1.0;
    double floor_ = 0.0;
};

/// Throws Error(InvalidParameter) unless radius > 0.
Kernel make_kernel(KernelFamily family, double radius);

/// Composite trapezoid weights on strictly increasing nodes.
std::vector<double> trapezoid_weights(std::span<const double> nodes);

/// out[i] = sum_j weights[j] * J(nodes[i] - nodes[j]) * field[j].
std::vector<double> nonlocal_apply(const Kernel& k,
                                   std::span<const double> nodes,
                                   std::span<const double> weights,
                                   std::span<const double> field);

/// Trapezoid samples c_m = spacing * J(m * spacing) / M_h for m*spacing < R, where
/// M_h makes the two-sided sum c_0 + 2 sum_{m>0} c_m exactly one. Index m covers
/// both +m and -m. Uniform-grid operators use this so their row sums never exceed
/// one, which keeps discrete solutions inside the continuum bounds.
std::vector<double> uniform_stencil(const Kernel& k, double spacing);

}  // namespace nlfb
