#pragma once

#include "nlfb/error.hpp"
#include "nlfb/kernel.hpp"
#include "nlfb/model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nlfb {

/// n + 1 uniform nodes on the reference interval [-1, 1].
struct ReferenceGrid {
    int n = 200;

    double spacing() const noexcept { return 2.0 / static_cast<double>(n); }
    /// Exactly antisymmetric: y(n - i) == -y(i) bitwise.
    double y(int i) const noexcept {
        return (2.0 * static_cast<double>(i) - static_cast<double>(n)) / static_cast<double>(n);
    }
};

/// Solution on the moving domain [g, h], sampled on the reference grid:
/// w[i] ~ u(t, x(t, y_i)), z[i] ~ v(t, x(t, y_i)) with x = (g+h)/2 + y (h-g)/2.
struct State {
    double t = 0.0;
    double g = -1.0;
    double h = 1.0;
    std::vector<double> w;
    std::vector<double> z;

    int intervals() const noexcept { return static_cast<int>(w.size()) - 1; }
    double length() const noexcept { return h - g; }
    double x_at(int i) const noexcept;
    /// Physical node spacing.
    double spacing() const noexcept;
};

/// Thrown when a step breaks the positivity/bounds invariants; keeps the bad state.
class SolverFailure : public Error {
public:
    SolverFailure(const std::string& message, State state)
        : Error(ErrorKind::SolverFailure, message), state_(std::move(state)) {}
    const State& state() const noexcept { return state_; }

private:
    State state_;
};

struct FrontVelocities {
    double gdot = 0.0;
    double hdot = 0.0;
};

/// Coefficients of the front-fixed equations  z_t = d2 xi z_yy + zeta z_y + f2.
struct TransformedCoeffs {
    double xi = 0.0;
    std::vector<double> zeta;
};

TransformedCoeffs transform_coefficients(const State& s, double gdot, double hdot);

/// Front law with the inner integrals collapsed to kernel tail mass.
FrontVelocities boundary_velocities(const State& s, const ModelParams& p, const Kernel& k);

/// Outward nonlocal flux through each front: integral of tail_mass(h - x) u(x) dx and
/// tail_mass(x - g) u(x) dx, trapezoid on the mapped nodes.
FrontVelocities nonlocal_front_flux(const State& s, const Kernel& k);

struct StepOptions {
    /// Field bounds to enforce; unset disables the upper-bound check.
    std::optional<SolutionBounds> bounds;
    /// Relative slack on the field bounds.
    double bound_slack = 1e-8;
    /// Negative values above this are treated as roundoff and clamped to zero.
    double negative_floor = -1e-13;
};

/// Largest admissible dt for the current state.
double stable_dt(const State& s, const ModelParams& p, const FrontVelocities& vel,
                 const SolutionBounds& sb);

/// One IMEX Euler step. Throws Error(Stability) when dt exceeds stable_dt,
/// SolverFailure on invariant violations, Error(NumericalBlowup) on NaN.
State step(const State& s, const ModelParams& p, const Kernel& k, double dt,
           const StepOptions& opts = {});

/// Same as step() but also returns the start-of-step velocities it used.
State step(const State& s, const ModelParams& p, const Kernel& k, double dt,
           const StepOptions& opts, FrontVelocities& used);

State initial_state(const InitialData& init, int n);

struct TrajectorySample {
    double t = 0.0;
    double g = 0.0;
    double h = 0.0;
    double gdot = 0.0;
    double hdot = 0.0;
    double sup_u = 0.0;
    double sup_v = 0.0;
    double u_center = 0.0;
    double v_center = 0.0;

    double length() const noexcept { return h - g; }
};

enum class Termination { Horizon, StopRule, ResolutionLimit };
std::string_view to_string(Termination t);

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<State> snapshots;  // full fields, when requested
    Termination termination = Termination::Horizon;
    std::string stop_label;         // which stop rule fired
    double horizon = 0.0;
    int steps = 0;
    int intervals = 0;              // reference grid n
    double dt = 0.0;

    const TrajectorySample& back() const { return samples.back(); }
    /// Physical spacing of the final grid.
    double final_spacing() const {
        return samples.empty() ? 0.0 : samples.back().length() / intervals;
    }
};

/// Returns a label to stop the run, or nullopt to continue. Called after every step.
using StopRule = std::function<std::optional<std::string>(const TrajectorySample& latest,
                                                          const Trajectory& so_far)>;

struct RunControl {
    double horizon = 100.0;
    double dt = 0.01;
    int n = 200;
    int record_every = 10;        // steps between stored samples
    bool keep_snapshots = false;  // store full fields with every sample
    std::vector<double> snapshot_times;  // extra field snapshots at these times
    bool check_bounds = true;
    /// Stop when the physical spacing reaches this fraction of the kernel radius.
    double resolution_fraction = 0.25;
    StopRule stop_rule;
};

TrajectorySample sample_of(const State& s, const FrontVelocities& vel);

/// Integrates until the horizon, a stop rule, or loss of kernel resolution.
/// Deterministic given its inputs.
Trajectory run(const ModelParams& p, const InitialData& init, const Kernel& k,
               const RunControl& ctrl);

enum class FixedDomainVerdict { Persists, Dies, Undetermined };
std::string_view to_string(FixedDomainVerdict v);

struct FixedDomainResult {
    std::vector<double> nodes;
    std::vector<double> field;
    FixedDomainVerdict verdict = FixedDomainVerdict::Undetermined;
    double final_time = 0.0;
    double final_sup = 0.0;
};

struct FixedDomainOptions {
    double dt = 0.0;                 // 0 picks 0.2 / (d + |theta0| + sup u0 + 1)
    double death_threshold = 1e-6;
    double persistence_floor = 1e-4;
    double steady_tolerance = 1e-10; // sup |u_t| below this counts as steady
};

/// Explicit time stepping of u_t = d (K u - u) + u (theta0 - u) on a fixed interval
/// with the same discrete operator as lambda_p. u0 is sampled on uniform nodes
/// spanning [left, right].
FixedDomainResult fixed_domain_run(double d, double theta0, double left, double right,
                                   const std::vector<double>& u0, const Kernel& k, double T,
                                   const FixedDomainOptions& opts = {});

}  // namespace nlfb
