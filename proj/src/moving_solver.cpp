#include "nlfb/moving_solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace nlfb {

double State::x_at(int i) const noexcept {
    const ReferenceGrid grid{intervals()};
    return 0.5 * (g + h) + grid.y(i) * 0.5 * (h - g);
}

double State::spacing() const noexcept {
    return (h - g) / static_cast<double>(intervals());
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::Horizon: return "horizon";
        case Termination::StopRule: return "stop_rule";
        case Termination::ResolutionLimit: return "resolution_limit";
    }
    return "unknown";
}

std::string_view to_string(FixedDomainVerdict v) {
    switch (v) {
        case FixedDomainVerdict::Persists: return "persists";
        case FixedDomainVerdict::Dies: return "dies";
        case FixedDomainVerdict::Undetermined: return "undetermined";
    }
    return "unknown";
}

namespace {

void require_shape(const State& s) {
    if (s.w.size() != s.z.size() || s.w.size() < 5 || s.w.size() % 2 == 0) {
        throw Error(ErrorKind::Shape,
                    "state needs matching w/z vectors over an even number (>= 4) of intervals");
    }
    if (!(s.h > s.g)) {
        throw Error(ErrorKind::DegenerateDomain,
                    "degenerate domain: h must exceed g (g=" + std::to_string(s.g) +
                        ", h=" + std::to_string(s.h) + ")");
    }
}

void require_finite(const State& s) {
    if (!std::isfinite(s.g) || !std::isfinite(s.h)) {
        throw Error(ErrorKind::NumericalBlowup, "non-finite front position");
    }
    for (std::size_t i = 0; i < s.w.size(); ++i) {
        if (!std::isfinite(s.w[i]) || !std::isfinite(s.z[i])) {
            throw Error(ErrorKind::NumericalBlowup,
                        "non-finite field value at node " + std::to_string(i) +
                            " (t=" + std::to_string(s.t) + ")");
        }
    }
}

double sup(const std::vector<double>& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, v);
    return m;
}

SolutionBounds running_bounds(const State& s, const ModelParams& p) {
    SolutionBounds sb;
    sb.k1 = std::max(sup(s.w), p.a);
    sb.k2 = p.kind == InteractionKind::Competition ? std::max(sup(s.z), 1.0)
                                                   : std::max(sup(s.z), 1.0 + p.c * sb.k1);
    return sb;
}

// Solves  -r x_{i-1} + (1 + 2r) x_i - r x_{i+1} = rhs_i, x_0 = x_n = 0 (n even), by eliminating
// from both ends towards the centre node. Both halves run the same operations, so a
// mirrored right-hand side gives a bitwise mirrored solution.
void solve_diffusion(double r, std::vector<double>& rhs) {
    const std::size_t n = rhs.size() - 1;
    if (n < 2) return;
    const std::size_t m = n / 2;
    const double diag = 1.0 + 2.0 * r;
    std::vector<double> cprime(m + 1, 0.0);
    double denom = diag;
    cprime[1] = -r / denom;
    rhs[1] = rhs[1] / denom;
    rhs[n - 1] = rhs[n - 1] / denom;
    for (std::size_t i = 2; i < m; ++i) {
        denom = diag + r * cprime[i - 1];
        if (!(std::abs(denom) > 1e-300)) {
            throw Error(ErrorKind::LinearAlgebra, "tridiagonal solve broke down");
        }
        cprime[i] = -r / denom;
        rhs[i] = (rhs[i] + r * rhs[i - 1]) / denom;
        rhs[n - i] = (rhs[n - i] + r * rhs[n - i + 1]) / denom;
    }
    const double centre = diag + r * cprime[m - 1] + r * cprime[m - 1];
    if (!(std::abs(centre) > 1e-300)) {
        throw Error(ErrorKind::LinearAlgebra, "tridiagonal solve broke down");
    }
    rhs[m] = (rhs[m] + r * (rhs[m - 1] + rhs[m + 1])) / centre;
    for (std::size_t i = m - 1; i >= 1; --i) {
        rhs[i] -= cprime[i] * rhs[i + 1];
        rhs[n - i] -= cprime[i] * rhs[n - i - 1];
    }
    rhs[0] = 0.0;
    rhs[n] = 0.0;
}

inline double upwind(const std::vector<double>& f, std::size_t i, double zeta, double dy) {
    if (zeta > 0.0) return zeta * (f[i + 1] - f[i]) / dy;
    if (zeta < 0.0) return zeta * (f[i] - f[i - 1]) / dy;
    return 0.0;
}

// Mass-normalized convolution on uniform nodes; the fields vanish at both ends so
// the trapezoid end weights play no role.
void convolve(const std::vector<double>& stencil, const std::vector<double>& f,
              std::vector<double>& out) {
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    const auto band = static_cast<std::ptrdiff_t>(stencil.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = stencil[0] * f[i];
        const std::ptrdiff_t reach = std::min(band - 1, std::max(i, n - 1 - i));
        for (std::ptrdiff_t m = 1; m <= reach; ++m) {
            const double left = i - m >= 0 ? f[i - m] : 0.0;
            const double right = i + m < n ? f[i + m] : 0.0;
            acc += stencil[m] * (left + right);
        }
        out[i] = acc;
    }
}

State advance(const State& s, const ModelParams& p, const Kernel& k, double dt,
              const StepOptions& opts, const FrontVelocities& vel) {
    const SolutionBounds sb = opts.bounds ? *opts.bounds : running_bounds(s, p);
    const double limit = stable_dt(s, p, vel, sb);
    if (dt > limit) {
        std::ostringstream msg;
        msg << "time step " << dt << " exceeds the stability bound " << limit << " at t=" << s.t
            << " (gdot=" << vel.gdot << ", hdot=" << vel.hdot << ")";
        throw Error(ErrorKind::Stability, msg.str());
    }

    const int n = s.intervals();
    const auto nn = static_cast<std::size_t>(n);
    const ReferenceGrid grid{n};
    const double dy = grid.spacing();

    State next;
    next.t = s.t + dt;
    next.g = s.g + dt * vel.gdot;
    next.h = s.h + dt * vel.hdot;
    if (!(next.h > next.g)) {
        throw SolverFailure("domain collapsed during front update", next);
    }
    next.w.assign(nn + 1, 0.0);
    const TransformedCoeffs tc = transform_coefficients(next, vel.gdot, vel.hdot);

    const double dx = dy * 0.5 * (next.h - next.g);
    const std::vector<double> stencil = uniform_stencil(k, dx);
    std::vector<double> kw(nn + 1);
    convolve(stencil, s.w, kw);

    std::vector<double> rhs(nn + 1, 0.0);
    for (std::size_t i = 1; i < nn; ++i) {
        const double w = s.w[i];
        const double z = s.z[i];
        const Rates f = reaction_unchecked(p, w, z);
        next.w[i] = w + dt * (upwind(s.w, i, tc.zeta[i], dy) + p.d1 * (kw[i] - w) + f.f1);
        rhs[i] = z + dt * (upwind(s.z, i, tc.zeta[i], dy) + f.f2);
    }
    solve_diffusion(dt * p.d2 * tc.xi / (dy * dy), rhs);
    next.z = std::move(rhs);

    require_finite(next);
    double worst = 0.0;
    int worst_node = -1;
    for (std::size_t i = 0; i <= nn; ++i) {
        for (double* v : {&next.w[i], &next.z[i]}) {
            if (*v < 0.0) {
                if (*v >= opts.negative_floor) {
                    *v = 0.0;
                } else if (*v < worst) {
                    worst = *v;
                    worst_node = static_cast<int>(i);
                }
            }
        }
    }
    if (worst_node >= 0) {
        throw SolverFailure("negative density " + std::to_string(worst) + " at node " +
                                std::to_string(worst_node) + " (t=" + std::to_string(next.t) + ")",
                            next);
    }
    if (opts.bounds) {
        const double cap_u = opts.bounds->k1 * (1.0 + opts.bound_slack);
        const double cap_v = opts.bounds->k2 * (1.0 + opts.bound_slack);
        for (std::size_t i = 0; i <= nn; ++i) {
            if (next.w[i] > cap_u || next.z[i] > cap_v) {
                std::ostringstream msg;
                msg << std::setprecision(17) << "bound violated at node " << i
                    << " (t=" << next.t << "): u=" << next.w[i] << " (k1=" << opts.bounds->k1
                    << "), v=" << next.z[i] << " (k2=" << opts.bounds->k2 << ")";
                throw SolverFailure(msg.str(), next);
            }
        }
    }
    return next;
}

}  // namespace

TransformedCoeffs transform_coefficients(const State& s, double gdot, double hdot) {
    if (!(s.h > s.g)) {
        throw Error(ErrorKind::DegenerateDomain, "transform_coefficients: h must exceed g");
    }
    const int n = s.intervals();
    const ReferenceGrid grid{n};
    const double scale = 2.0 / (s.h - s.g);
    TransformedCoeffs tc;
    tc.xi = scale * scale;
    tc.zeta.resize(static_cast<std::size_t>(n) + 1);
    const double mean = 0.5 * (gdot + hdot);
    const double spread = 0.5 * (hdot - gdot);
    for (int i = 0; i <= n; ++i) {
        tc.zeta[static_cast<std::size_t>(i)] = scale * (mean + grid.y(i) * spread);
    }
    return tc;
}

FrontVelocities nonlocal_front_flux(const State& s, const Kernel& k) {
    require_shape(s);
    const int n = s.intervals();
    const double dx = s.spacing();
    // Only nodes within R of a front feel the tail mass.
    const int reach = std::min(n, static_cast<int>(std::ceil(k.support_radius() / dx)));
    double right = 0.0, left = 0.0;
    // Same summation order for both fronts so mirrored states give mirrored fluxes.
    for (int m = reach; m >= 0; --m) {
        const double weight = (m == 0 || m == n) ? 0.5 * dx : dx;
        const double tail = weight * k.tail_mass(m * dx);
        right += tail * s.w[static_cast<std::size_t>(n - m)];
        left += tail * s.w[static_cast<std::size_t>(m)];
    }
    return {left, right};
}

FrontVelocities boundary_velocities(const State& s, const ModelParams& p, const Kernel& k) {
    require_shape(s);
    require_finite(s);
    const auto n = static_cast<std::size_t>(s.intervals());
    const double dy = ReferenceGrid{s.intervals()}.spacing();
    const double scale = 2.0 / (s.h - s.g);
    const auto& z = s.z;
    const double vx_h = scale * ((3.0 * z[n] - 4.0 * z[n - 1]) + z[n - 2]) / (2.0 * dy);
    const double vx_g = scale * ((-3.0 * z[0] + 4.0 * z[1]) - z[2]) / (2.0 * dy);
    const FrontVelocities flux = nonlocal_front_flux(s, k);
    return {-p.mu * vx_g - p.rho * flux.gdot, -p.mu * vx_h + p.rho * flux.hdot};
}

double stable_dt(const State& s, const ModelParams& p, const FrontVelocities& vel,
                 const SolutionBounds& sb) {
    const double dy = ReferenceGrid{s.intervals()}.spacing();
    const double zeta_max = 2.0 / (s.h - s.g) * std::max(std::abs(vel.gdot), std::abs(vel.hdot));
    const double reaction_limit = 1.0 / (p.d1 + p.a + p.b * sb.k2 + p.c * sb.k1 + 1.0);
    const double advection_limit =
        zeta_max > 0.0 ? dy / zeta_max : std::numeric_limits<double>::infinity();
    return 0.4 * std::min(advection_limit, reaction_limit);
}

State step(const State& s, const ModelParams& p, const Kernel& k, double dt,
           const StepOptions& opts, FrontVelocities& used) {
    require_shape(s);
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidParameter, "step: dt must be > 0");
    used = boundary_velocities(s, p, k);
    return advance(s, p, k, dt, opts, used);
}

State step(const State& s, const ModelParams& p, const Kernel& k, double dt,
           const StepOptions& opts) {
    FrontVelocities used;
    return step(s, p, k, dt, opts, used);
}

State initial_state(const InitialData& init, int n) {
    if (n < 4 || n % 2 != 0) {
        throw Error(ErrorKind::InvalidParameter, "numerics.n must be an even number >= 4");
    }
    State s;
    s.g = -init.h0;
    s.h = init.h0;
    const auto nn = static_cast<std::size_t>(n);
    if (init.u0.size() == nn + 1) {
        s.w = init.u0;
        s.z = init.v0;
    } else {
        s.w.assign(nn + 1, 0.0);
        s.z.assign(nn + 1, 0.0);
        const ReferenceGrid grid{n};
        for (int i = 1; i < n; ++i) {
            const double x = init.h0 * grid.y(i);
            s.w[static_cast<std::size_t>(i)] = init.u0_at(x);
            s.z[static_cast<std::size_t>(i)] = init.v0_at(x);
        }
    }
    s.w.front() = s.w.back() = 0.0;
    s.z.front() = s.z.back() = 0.0;
    return s;
}

TrajectorySample sample_of(const State& s, const FrontVelocities& vel) {
    TrajectorySample smp;
    smp.t = s.t;
    smp.g = s.g;
    smp.h = s.h;
    smp.gdot = vel.gdot;
    smp.hdot = vel.hdot;
    smp.sup_u = sup(s.w);
    smp.sup_v = sup(s.z);
    const auto n = static_cast<std::size_t>(s.intervals());
    if (n % 2 == 0) {
        smp.u_center = s.w[n / 2];
        smp.v_center = s.z[n / 2];
    } else {
        smp.u_center = 0.5 * (s.w[n / 2] + s.w[n / 2 + 1]);
        smp.v_center = 0.5 * (s.z[n / 2] + s.z[n / 2 + 1]);
    }
    return smp;
}

Trajectory run(const ModelParams& p, const InitialData& init, const Kernel& k,
               const RunControl& ctrl) {
    p.validate();
    init.validate();
    if (!(ctrl.dt > 0.0)) throw Error(ErrorKind::InvalidParameter, "numerics.dt must be > 0");
    if (!(ctrl.horizon > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "numerics.horizon must be > 0");
    }
    if (ctrl.record_every < 1) {
        throw Error(ErrorKind::InvalidParameter, "numerics.record_every must be >= 1");
    }

    StepOptions opts;
    if (ctrl.check_bounds) opts.bounds = bounds(p, init);

    Trajectory traj;
    traj.horizon = ctrl.horizon;
    traj.intervals = ctrl.n;
    traj.dt = ctrl.dt;

    State s = initial_state(init, ctrl.n);
    FrontVelocities vel = boundary_velocities(s, p, k);
    traj.samples.push_back(sample_of(s, vel));
    if (ctrl.keep_snapshots) traj.snapshots.push_back(s);

    std::vector<double> pending = ctrl.snapshot_times;
    std::sort(pending.begin(), pending.end());
    std::size_t next_snapshot = 0;
    while (next_snapshot < pending.size() && pending[next_snapshot] <= 0.0) {
        if (!ctrl.keep_snapshots) traj.snapshots.push_back(s);
        ++next_snapshot;
    }

    const double R = k.support_radius();
    const double end_slack = 1e-9 * ctrl.dt;
    while (s.t < ctrl.horizon - end_slack) {
        if (s.spacing() >= ctrl.resolution_fraction * R) {
            traj.termination = Termination::ResolutionLimit;
            break;
        }
        const double dt = std::min(ctrl.dt, ctrl.horizon - s.t);
        s = advance(s, p, k, dt, opts, vel);
        ++traj.steps;
        vel = boundary_velocities(s, p, k);
        const TrajectorySample smp = sample_of(s, vel);

        std::optional<std::string> stop;
        if (ctrl.stop_rule) stop = ctrl.stop_rule(smp, traj);
        const bool last = stop.has_value() || !(s.t < ctrl.horizon - end_slack);
        if (traj.steps % ctrl.record_every == 0 || last) {
            traj.samples.push_back(smp);
            if (ctrl.keep_snapshots) traj.snapshots.push_back(s);
        }
        while (next_snapshot < pending.size() && pending[next_snapshot] <= s.t + end_slack) {
            if (!ctrl.keep_snapshots) traj.snapshots.push_back(s);
            ++next_snapshot;
        }
        if (stop) {
            // make sure the firing sample is stored
            if (traj.samples.back().t != smp.t) traj.samples.push_back(smp);
            traj.termination = Termination::StopRule;
            traj.stop_label = *stop;
            break;
        }
    }
    if (traj.termination == Termination::ResolutionLimit && traj.samples.back().t != s.t) {
        traj.samples.push_back(sample_of(s, vel));
        if (ctrl.keep_snapshots) traj.snapshots.push_back(s);
    }
    return traj;
}

FixedDomainResult fixed_domain_run(double d, double theta0, double left, double right,
                                   const std::vector<double>& u0, const Kernel& k, double T,
                                   const FixedDomainOptions& opts) {
    if (!(d > 0.0)) throw Error(ErrorKind::InvalidParameter, "fixed_domain_run: d must be > 0");
    if (!(right > left)) {
        throw Error(ErrorKind::InvalidParameter, "fixed_domain_run: need right > left");
    }
    if (u0.size() < 8) {
        throw Error(ErrorKind::InvalidParameter, "fixed_domain_run: need at least 8 samples");
    }
    for (double v : u0) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw Error(ErrorKind::InvalidParameter, "fixed_domain_run: u0 must be >= 0");
        }
    }
    const std::size_t n = u0.size();
    const double h = (right - left) / static_cast<double>(n - 1);
    if (!(h < 0.25 * k.support_radius())) {
        throw Error(ErrorKind::Resolution, "fixed_domain_run: spacing must be < R/4");
    }
    const std::vector<double> stencil = uniform_stencil(k, h);

    FixedDomainResult res;
    res.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.nodes[i] = left + static_cast<double>(i) * h;
    res.nodes.back() = right;
    res.field = u0;

    const double dt = opts.dt > 0.0
                          ? opts.dt
                          : 0.2 / (d + std::abs(theta0) + std::max(sup(u0), theta0) + 1.0);

    std::vector<double> ku(n), rate(n);
    const auto band = static_cast<std::ptrdiff_t>(stencil.size());
    const auto nn = static_cast<std::ptrdiff_t>(n);
    double t = 0.0;
    for (;;) {
        const double top = sup(res.field);
        res.final_sup = top;
        res.final_time = t;
        if (top < opts.death_threshold) {
            res.verdict = FixedDomainVerdict::Dies;
            return res;
        }
        if (t >= T) break;
        if (dt * (d + std::abs(theta0) + top) > 1.0) {
            throw Error(ErrorKind::SolverFailure,
                        "fixed_domain_run: explicit step unstable (dt too large)");
        }
        for (std::ptrdiff_t i = 0; i < nn; ++i) {
            double acc = 0.0;
            for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, i - band + 1);
                 j <= std::min(nn - 1, i + band - 1); ++j) {
                const double end = (j == 0 || j == nn - 1) ? 0.5 : 1.0;
                acc += end * stencil[static_cast<std::size_t>(std::abs(i - j))] * res.field[j];
            }
            ku[i] = acc;
        }
        double max_rate = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = res.field[i];
            rate[i] = d * (ku[i] - u) + u * (theta0 - u);
            max_rate = std::max(max_rate, std::abs(rate[i]));
        }
        if (max_rate < opts.steady_tolerance && top > opts.persistence_floor) {
            res.verdict = FixedDomainVerdict::Persists;
            return res;
        }
        for (std::size_t i = 0; i < n; ++i) res.field[i] = std::max(0.0, res.field[i] + dt * rate[i]);
        t += dt;
    }
    return res;
}

}  // namespace nlfb
