#include "nlfb/classify.hpp"

#include "nlfb/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

namespace nlfb {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Spreading: return "Spreading";
        case Verdict::Vanishing: return "Vanishing";
        case Verdict::Undecided: return "Undecided";
    }
    return "Undecided";
}

std::string_view to_string(Certificate c) {
    switch (c) {
        case Certificate::LengthExceedsPiSqrtD2: return "LengthExceedsPiSqrtD2";
        case Certificate::LengthExceedsEllStar: return "LengthExceedsEllStar";
        case Certificate::ARateDominates: return "ARateDominates";
        case Certificate::NormPlateauDecay: return "NormPlateauDecay";
        case Certificate::HorizonExhausted: return "HorizonExhausted";
    }
    return "HorizonExhausted";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pi_sqrt(double d2) { return std::numbers::pi * std::sqrt(d2); }

std::optional<double> ell_star_for(const ModelParams& p, const Kernel& k,
                                   const ClassifyOptions& opts) {
    if (opts.ell_star) return opts.ell_star;
    return cached_ell_star(p.d1, p.a, k);
}

double final_lambda(const Trajectory& traj, const ModelParams& p, const Kernel& k,
                    const ClassifyOptions& opts) {
    const TrajectorySample& last = traj.back();
    const double R = k.support_radius();
    // Long domains are deep in the spreading regime; the eigenvalue there is
    // expensive and carries no information.
    if (!(last.length() > 0.0) || last.length() > 64.0 * R) return kNaN;
    try {
        EigenProblem prob;
        prob.d = p.d1;
        prob.theta0 = p.a;
        prob.left = last.g;
        prob.right = last.h;
        prob.kernel = k;
        prob.n = nodes_for_spacing(last.length(), opts.eigen_spacing_fraction * R);
        return lambda_p(prob).lambda_p;
    } catch (const Error&) {
        return kNaN;
    }
}

bool plateau_sample(const TrajectorySample& s, double length_cap, const ClassifyOptions& opts) {
    return s.sup_u < opts.vanish_tol && s.sup_v < opts.vanish_tol &&
           std::abs(s.gdot) < opts.speed_tol && std::abs(s.hdot) < opts.speed_tol &&
           s.length() <= length_cap;
}

// True when every sample in the trailing window passes and the window is covered.
bool plateau_window(const std::vector<TrajectorySample>& samples, const TrajectorySample& latest,
                    double window, double length_cap, const ClassifyOptions& opts) {
    if (!plateau_sample(latest, length_cap, opts)) return false;
    if (samples.empty()) return false;
    const double start = latest.t - window;
    if (samples.front().t > start) return false;
    for (auto it = samples.rbegin(); it != samples.rend() && it->t >= start; ++it) {
        if (!plateau_sample(*it, length_cap, opts)) return false;
    }
    return true;
}

struct LengthFiring {
    bool fired = false;
    double time = 0.0;
    Certificate certificate = Certificate::HorizonExhausted;
};

LengthFiring first_length_firing(const Trajectory& traj, double pi_d2,
                                 std::optional<double> ell) {
    LengthFiring out;
    for (const auto& s : traj.samples) {
        const bool over_pi = s.length() > pi_d2;
        const bool over_ell = ell && s.length() > *ell;
        if (!over_pi && !over_ell) continue;
        out.fired = true;
        out.time = s.t;
        if (over_pi && over_ell) {
            out.certificate = *ell <= pi_d2 ? Certificate::LengthExceedsEllStar
                                            : Certificate::LengthExceedsPiSqrtD2;
        } else {
            out.certificate =
                over_pi ? Certificate::LengthExceedsPiSqrtD2 : Certificate::LengthExceedsEllStar;
        }
        return out;
    }
    return out;
}

}  // namespace

std::optional<double> cached_ell_star(double d1, double a, const Kernel& k) {
    if (a >= d1) return std::nullopt;
    using Key = std::tuple<double, double, int, double>;
    static std::mutex mutex;
    static std::map<Key, double> cache;
    const Key key{d1, a, static_cast<int>(k.family()), k.support_radius()};
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const double value = critical_length(d1, a, k, 1e-8 * k.support_radius()).ell_star;
    cache.emplace(key, value);
    return value;
}

double spreading_length(const ModelParams& p, const Kernel& k, const ClassifyOptions& opts) {
    const double pi_d2 = pi_sqrt(p.d2);
    const auto ell = ell_star_for(p, k, opts);
    return ell ? std::min(pi_d2, *ell) : pi_d2;
}

Classification classify(const Trajectory& traj, const ModelParams& p, const Kernel& k,
                        const ClassifyOptions& opts) {
    if (traj.samples.empty()) {
        throw Error(ErrorKind::InvalidParameter, "classify: trajectory has no samples");
    }
    Classification c;
    const TrajectorySample& last = traj.back();
    Evidence& ev = c.evidence;
    ev.final_time = last.t;
    ev.final_length = last.length();
    ev.sup_u = last.sup_u;
    ev.sup_v = last.sup_v;
    ev.gdot = last.gdot;
    ev.hdot = last.hdot;
    ev.pi_sqrt_d2 = pi_sqrt(p.d2);
    ev.ell_star = ell_star_for(p, k, opts);
    ev.lambda_p_final = final_lambda(traj, p, k, opts);

    if (p.a >= p.d1) {
        c.verdict = Verdict::Spreading;
        c.certificate = Certificate::ARateDominates;
        c.fired_at = traj.samples.front().t;
        return c;
    }
    const LengthFiring fire = first_length_firing(traj, ev.pi_sqrt_d2, ev.ell_star);
    if (fire.fired) {
        c.verdict = Verdict::Spreading;
        c.certificate = fire.certificate;
        c.fired_at = fire.time;
        return c;
    }
    const double window = opts.window_fraction * traj.horizon;
    const double cap = ev.pi_sqrt_d2 + 2.0 * traj.final_spacing();
    std::vector<TrajectorySample> earlier(traj.samples.begin(), traj.samples.end() - 1);
    if (plateau_window(earlier, last, window, cap, opts) &&
        ev.lambda_p_final <= opts.eigen_slack) {
        c.verdict = Verdict::Vanishing;
        c.certificate = Certificate::NormPlateauDecay;
        c.fired_at = last.t - window;
        c.heuristic = true;
        return c;
    }
    c.verdict = Verdict::Undecided;
    c.certificate = Certificate::HorizonExhausted;
    c.fired_at = last.t;
    return c;
}

bool recheck(const Classification& c, const Trajectory& traj, const ModelParams& p,
             const ClassifyOptions& opts) {
    switch (c.certificate) {
        case Certificate::ARateDominates:
            return p.a >= p.d1;
        case Certificate::LengthExceedsPiSqrtD2:
        case Certificate::LengthExceedsEllStar: {
            const double limit = c.certificate == Certificate::LengthExceedsPiSqrtD2
                                     ? pi_sqrt(p.d2)
                                     : c.evidence.ell_star.value_or(kNaN);
            for (const auto& s : traj.samples) {
                if (s.t == c.fired_at) return s.length() > limit;
            }
            return false;
        }
        case Certificate::NormPlateauDecay: {
            if (traj.samples.empty()) return false;
            const double cap = pi_sqrt(p.d2) + 2.0 * traj.final_spacing();
            std::vector<TrajectorySample> earlier(traj.samples.begin(), traj.samples.end() - 1);
            return plateau_window(earlier, traj.back(), opts.window_fraction * traj.horizon, cap,
                                  opts) &&
                   c.evidence.lambda_p_final <= opts.eigen_slack;
        }
        case Certificate::HorizonExhausted:
            return c.verdict == Verdict::Undecided;
    }
    return false;
}

StopRule make_stop_rule(const ModelParams& p, const Kernel& k, const ClassifyOptions& opts) {
    const double limit = spreading_length(p, k, opts);
    const double pi_d2 = pi_sqrt(p.d2);
    return [limit, pi_d2, opts](const TrajectorySample& latest,
                                const Trajectory& so_far) -> std::optional<std::string> {
        if (latest.length() > limit) return std::string("spreading_certificate");
        const double window = opts.window_fraction * so_far.horizon;
        const double cap = pi_d2 + 2.0 * latest.length() / so_far.intervals;
        if (plateau_window(so_far.samples, latest, window, cap, opts)) {
            return std::string("vanishing_plateau");
        }
        return std::nullopt;
    };
}

ClassifiedRun simulate_and_classify(const ModelParams& p, const InitialData& init, const Kernel& k,
                                    RunControl ctrl, const ClassifyOptions& opts) {
    ctrl.stop_rule = make_stop_rule(p, k, opts);
    ClassifiedRun out;
    out.trajectory = run(p, init, k, ctrl);
    out.classification = classify(out.trajectory, p, k, opts);
    return out;
}

// ---- threshold ----------------------------------------------------------------

ScalePoint classify_scale(const ModelParams& p, const InitialData& init, const Kernel& k,
                          double scale, const ThresholdOptions& opts) {
    ScalePoint pt;
    pt.scale = scale;
    const ModelParams q =
        p.with_front_coefficients(scale * opts.ray_mu, scale * (1.0 - opts.ray_mu));
    RunControl ctrl = opts.run;
    for (int attempt = 0;; ++attempt) {
        try {
            const ClassifiedRun r = simulate_and_classify(q, init, k, ctrl, opts.classify);
            pt.verdict = r.classification.verdict;
            pt.certificate = r.classification.certificate;
            pt.final_length = r.classification.evidence.final_length;
            pt.dt_used = ctrl.dt;
            return pt;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Stability && attempt < opts.max_dt_halvings) {
                ctrl.dt *= 0.5;
                continue;
            }
            pt.verdict = Verdict::Undecided;
            pt.certificate = Certificate::HorizonExhausted;
            pt.dt_used = ctrl.dt;
            pt.error = e.what();
            return pt;
        }
    }
}

ThresholdEstimate estimate_threshold(const ModelParams& p, const InitialData& init,
                                     const Kernel& k, const ThresholdOptions& opts) {
    if (!(opts.ray_mu > 0.0 && opts.ray_mu < 1.0)) {
        throw Error(ErrorKind::InvalidParameter, "threshold.ray_mu must lie in (0, 1)");
    }
    if (!(opts.s_min > 0.0 && opts.s_max > opts.s_min)) {
        throw Error(ErrorKind::InvalidParameter, "threshold: need 0 < s_min < s_max");
    }
    if (opts.scan_points < 2) {
        throw Error(ErrorKind::InvalidParameter, "threshold.scan_points must be >= 2");
    }
    if (p.a >= p.d1) {
        throw Error(ErrorKind::Precondition,
                    "threshold: a >= d1, spreading happens for every mu and rho");
    }
    const double half_pi = 0.5 * pi_sqrt(p.d2);
    if (init.h0 >= half_pi) {
        throw Error(ErrorKind::Precondition,
                    "threshold: h0 >= pi sqrt(d2)/2 = " + std::to_string(half_pi) +
                        ", spreading happens for every mu and rho");
    }
    const auto ell = ell_star_for(p, k, opts.classify);
    if (ell && init.h0 >= 0.5 * *ell) {
        throw Error(ErrorKind::Precondition,
                    "threshold: h0 >= l*/2 = " + std::to_string(0.5 * *ell) +
                        ", spreading happens for every mu and rho");
    }

    ThresholdEstimate est;
    est.ray_mu = opts.ray_mu;
    est.ray_rho = 1.0 - opts.ray_mu;
    const double ratio = opts.s_max / opts.s_min;
    for (int i = 0; i < opts.scan_points; ++i) {
        const double s = i + 1 == opts.scan_points
                             ? opts.s_max
                             : opts.s_min * std::pow(ratio, static_cast<double>(i) /
                                                                 (opts.scan_points - 1));
        est.scan.push_back(classify_scale(p, init, k, s, opts));
    }

    double max_vanish = 0.0, min_spread = std::numeric_limits<double>::infinity();
    bool any_decided = false;
    for (const auto& pt : est.scan) {
        if (pt.verdict == Verdict::Vanishing) max_vanish = std::max(max_vanish, pt.scale);
        if (pt.verdict == Verdict::Spreading) min_spread = std::min(min_spread, pt.scale);
        any_decided = any_decided || pt.verdict != Verdict::Undecided;
    }
    if (!any_decided) {
        throw Error(ErrorKind::Inconclusive,
                    "threshold: every scanned scale was Undecided; raise numerics.horizon");
    }
    if (!std::isfinite(min_spread)) {
        throw Error(ErrorKind::Inconclusive,
                    "threshold: no Spreading verdict up to s_max; raise threshold.s_max or "
                    "numerics.horizon");
    }
    est.monotone = max_vanish < min_spread;
    double lower = 0.0;
    for (const auto& pt : est.scan) {
        if (pt.verdict == Verdict::Vanishing && pt.scale < min_spread) {
            lower = std::max(lower, pt.scale);
        }
    }
    if (!(lower > 0.0)) {
        throw Error(ErrorKind::Inconclusive,
                    "threshold: no Vanishing verdict below the first Spreading scale; lower "
                    "threshold.s_min or raise numerics.horizon");
    }
    double upper = min_spread;
    for (int i = 0; i < opts.bisection_steps; ++i) {
        const double mid = std::sqrt(lower * upper);
        const ScalePoint pt = classify_scale(p, init, k, mid, opts);
        est.refinement.push_back(pt);
        if (pt.verdict == Verdict::Vanishing) {
            lower = mid;
        } else if (pt.verdict == Verdict::Spreading) {
            upper = mid;
        } else {
            break;
        }
    }
    est.lower = lower;
    est.upper = upper;
    return est;
}

// ---- super-solution -------------------------------------------------------------

double SuperSolution::phi(double x) const {
    if (std::abs(x) > h1) return 0.0;
    return std::max(0.0, nystrom_extend(problem, eigen, x));
}

double SuperSolution::s(double t) const {
    return h0 * (1.0 + 2.0 * delta - delta * std::exp(-sigma * t));
}

double SuperSolution::h_bar(double t) const {
    if (kind == InteractionKind::Competition) {
        const double grow = -std::expm1(-sigma * t);  // 1 - e^{-sigma t}
        const double v_part = std::numbers::pi * K / (2.0 * h0 * sigma * delta) *
                              std::log1p(delta * grow / (1.0 + delta));
        const double u_part = 4.0 * C * h1 / (-lambda) * (-std::expm1(0.5 * lambda * t));
        return h0 + mu * v_part + rho * u_part;
    }
    return h0 + (theta + delta_mu) / gamma * (-std::expm1(-gamma * t));
}

double SuperSolution::h_bar_limit() const {
    if (kind == InteractionKind::Competition) {
        return h0 +
               mu * std::numbers::pi * K / (2.0 * h0 * sigma * delta) *
                   std::log1p(delta / (1.0 + delta)) +
               rho * 4.0 * C * h1 / (-lambda);
    }
    return h0 + (theta + delta_mu) / gamma;
}

double SuperSolution::h_bar_bound() const {
    if (kind == InteractionKind::Competition) {
        return h0 + mu * std::numbers::pi * K / (2.0 * sigma * h0 * (1.0 + delta)) -
               4.0 * rho * C * h1 / lambda;
    }
    return h_bar_limit();
}

double SuperSolution::u_bar(double t, double x) const {
    if (kind == InteractionKind::Competition) return C * std::exp(0.5 * lambda * t) * phi(x);
    return sigma * k * std::exp(-gamma * t) * phi(x);
}

double SuperSolution::v_bar(double t, double x) const {
    const double half_width = kind == InteractionKind::Competition ? s(t) : h_bar(t) + epsilon;
    if (std::abs(x) >= half_width) return 0.0;
    const double amp = kind == InteractionKind::Competition ? K * std::exp(-sigma * t)
                                                            : k * std::exp(-gamma * t);
    return amp * std::cos(std::numbers::pi * x / (2.0 * half_width));
}

namespace {

// Dense sample of [-h0, h0] plus the initial data's own nodes.
std::vector<double> probe_points(const InitialData& init) {
    std::vector<double> xs;
    const int dense = 4001;
    for (int i = 0; i < dense; ++i) {
        xs.push_back(-init.h0 + 2.0 * init.h0 * i / (dense - 1));
    }
    const double dx = init.spacing();
    for (std::size_t i = 0; i < init.u0.size(); ++i) {
        xs.push_back(-init.h0 + static_cast<double>(i) * dx);
    }
    return xs;
}

}  // namespace

SuperSolution build_vanishing_supersolution(const ModelParams& p, const InitialData& init,
                                            const Kernel& k, double h1) {
    p.validate();
    init.validate();
    if (p.a >= p.d1) {
        throw Error(ErrorKind::Regime, "supersolution: needs a < d1");
    }
    const double half_pi = 0.5 * pi_sqrt(p.d2);
    const double h0 = init.h0;
    if (h0 >= half_pi) {
        throw Error(ErrorKind::Regime, "supersolution: needs h0 < pi sqrt(d2)/2");
    }
    const double ell = *cached_ell_star(p.d1, p.a, k);
    if (h0 >= 0.5 * ell) {
        throw Error(ErrorKind::Regime, "supersolution: needs h0 < l*/2 = " +
                                           std::to_string(0.5 * ell));
    }
    if (h1 <= 0.0) h1 = 0.5 * (h0 + 0.5 * ell);
    if (!(h1 > h0 && h1 < 0.5 * ell)) {
        throw Error(ErrorKind::Regime, "supersolution: needs h0 < h1 < l*/2");
    }

    SuperSolution sup;
    sup.kind = p.kind;
    sup.h0 = h0;
    sup.h1 = h1;
    sup.mu = p.mu;
    sup.rho = p.rho;
    sup.d2 = p.d2;
    sup.problem.d = p.d1;
    sup.problem.theta0 = p.a;
    sup.problem.left = -h1;
    sup.problem.right = h1;
    sup.problem.kernel = k;
    sup.problem.n = nodes_for_spacing(2.0 * h1, 0.005 * k.support_radius());
    sup.eigen = lambda_p(sup.problem);
    sup.lambda = sup.eigen.lambda_p;
    if (!(sup.lambda < 0.0)) {
        throw Error(ErrorKind::Regime, "supersolution: lambda_p on (-h1, h1) is not negative");
    }

    const std::vector<double> xs = probe_points(init);
    const double pi = std::numbers::pi;
    if (p.kind == InteractionKind::Competition) {
        const double r = pi * std::sqrt(p.d2) / (2.0 * h0);
        sup.delta = std::min(0.5 * (std::sqrt(r) - 1.0), 0.5);
        sup.sigma = std::min(0.5 * (r - 1.0), 0.5);
        for (double x : xs) {
            sup.C = std::max(sup.C, init.u0_at(x) / sup.phi(x));
            sup.K = std::max(sup.K,
                             init.v0_at(x) / std::cos(pi * x / (2.0 * h0 * (1.0 + sup.delta))));
        }
        sup.m = std::max(pi * sup.K / (2.0 * sup.sigma * h0 * (1.0 + sup.delta)),
                         -4.0 * sup.C * h1 / sup.lambda);
        sup.budget = std::min((h1 - h0) / sup.m, sup.delta * h0 / sup.m);
        return sup;
    }

    sup.epsilon = (half_pi - h0) / 3.0;
    sup.sigma = std::min(0.5, std::cos(pi * h1 / (2.0 * (h1 + sup.epsilon))) / p.c);
    for (double x : xs) {
        sup.k = std::max(sup.k, init.u0_at(x) / (sup.sigma * sup.phi(x)));
        sup.k = std::max(sup.k, init.v0_at(x) / std::cos(pi * x / (2.0 * (h0 + sup.epsilon))));
    }
    const double he = h0 + sup.epsilon;
    sup.gamma = 0.5 * std::min(-sup.lambda, p.d2 * pi * pi / (4.0 * he * he) - 1.0);
    sup.theta = 2.0 * sup.sigma * sup.k * h1 * p.rho;
    sup.delta_mu = sup.k * pi * p.mu / (2.0 * h0);
    sup.m = std::max(2.0 * sup.sigma * sup.k * h1, sup.k * pi / (2.0 * h0));
    const double reach = pi * std::sqrt(p.d2) / (2.0 * std::sqrt(sup.gamma + 1.0)) - sup.epsilon;
    sup.budget = std::min((h1 - h0) * sup.gamma / sup.m, 0.99 * (reach - h0) * sup.gamma / sup.m);
    return sup;
}

DominationReport check_domination(const SuperSolution& sup, const Trajectory& traj,
                                  double tolerance) {
    if (traj.snapshots.empty()) {
        throw Error(ErrorKind::InvalidParameter,
                    "check_domination: trajectory has no snapshots (enable keep_snapshots)");
    }
    DominationReport rep;
    rep.tolerance = tolerance;
    for (const State& s : traj.snapshots) {
        const double t = s.t;
        double worst = -1e300;
        const double dh = s.h - sup.h_bar(t);
        const double dg = sup.g_bar(t) - s.g;
        rep.worst_h = std::max(rep.worst_h, dh);
        rep.worst_g = std::max(rep.worst_g, dg);
        worst = std::max({worst, dh, dg});
        for (int i = 0; i <= s.intervals(); ++i) {
            const double x = s.x_at(i);
            const double du = s.w[static_cast<std::size_t>(i)] - sup.u_bar(t, x);
            const double dv = s.z[static_cast<std::size_t>(i)] - sup.v_bar(t, x);
            rep.worst_u = std::max(rep.worst_u, du);
            rep.worst_v = std::max(rep.worst_v, dv);
            worst = std::max({worst, du, dv});
        }
        if (worst > tolerance && rep.dominated) {
            rep.dominated = false;
            rep.worst_time = t;
        }
        ++rep.samples_checked;
    }
    return rep;
}

// ---- sweep ----------------------------------------------------------------------

namespace {

struct Cell {
    double a, d1, d2, h0, mu, rho;
    InteractionKind kind;
};

std::vector<Cell> enumerate(const SweepPlan& plan) {
    auto axis = [](const std::vector<double>& v, double fallback) {
        return v.empty() ? std::vector<double>{fallback} : v;
    };
    const auto as = axis(plan.a, plan.base.a);
    const auto d1s = axis(plan.d1, plan.base.d1);
    const auto d2s = axis(plan.d2, plan.base.d2);
    const auto h0s = axis(plan.h0s, plan.h0);
    std::vector<std::pair<double, double>> fronts;
    if (!plan.budget.empty()) {
        for (double s : plan.budget) fronts.emplace_back(s * plan.ray_mu, s * (1.0 - plan.ray_mu));
    } else {
        for (double m : axis(plan.mu, plan.base.mu)) {
            for (double r : axis(plan.rho, plan.base.rho)) fronts.emplace_back(m, r);
        }
    }
    const auto kinds =
        plan.kinds.empty() ? std::vector<InteractionKind>{plan.base.kind} : plan.kinds;
    std::vector<Cell> cells;
    for (double a : as)
        for (double d1 : d1s)
            for (double d2 : d2s)
                for (double h0 : h0s)
                    for (const auto& [mu, rho] : fronts)
                        for (InteractionKind kind : kinds)
                            cells.push_back({a, d1, d2, h0, mu, rho, kind});
    return cells;
}

PhaseRow run_cell(const SweepPlan& plan, const Cell& cell) {
    PhaseRow row;
    row.a = cell.a;
    row.d1 = cell.d1;
    row.d2 = cell.d2;
    row.h0 = cell.h0;
    row.mu = cell.mu;
    row.rho = cell.rho;
    row.kind = cell.kind;
    row.final_length = row.sup_u = row.sup_v = row.lambda_p_final = kNaN;
    try {
        ModelParams p = plan.base;
        p.a = cell.a;
        p.d1 = cell.d1;
        p.d2 = cell.d2;
        p.mu = cell.mu;
        p.rho = cell.rho;
        p.kind = cell.kind;
        const InitialData init = cosine_initial_data(
            cell.h0, plan.u0_amplitude, plan.v0_amplitude, static_cast<std::size_t>(plan.run.n));
        const ClassifiedRun r = simulate_and_classify(p, init, plan.kernel, plan.run, plan.classify);
        row.verdict = r.classification.verdict;
        row.certificate = r.classification.certificate;
        row.final_length = r.classification.evidence.final_length;
        row.sup_u = r.classification.evidence.sup_u;
        row.sup_v = r.classification.evidence.sup_v;
        row.lambda_p_final = r.classification.evidence.lambda_p_final;
    } catch (const std::exception& e) {
        row.verdict = Verdict::Undecided;
        row.certificate = Certificate::HorizonExhausted;
        row.error = e.what();
    }
    return row;
}

}  // namespace

PhaseTable sweep(const SweepPlan& plan, int workers) {
    const std::vector<Cell> cells = enumerate(plan);
    PhaseTable table;
    table.rows.resize(cells.size());
    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min<int>(workers, static_cast<int>(std::max<std::size_t>(1, cells.size())));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            table.rows[i] = run_cell(plan, cells[i]);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return table;
}

}  // namespace nlfb
