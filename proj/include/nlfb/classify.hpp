#pragma once

#include "nlfb/eigen.hpp"
#include "nlfb/kernel.hpp"
#include "nlfb/model.hpp"
#include "nlfb/moving_solver.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlfb {

enum class Verdict { Spreading, Vanishing, Undecided };
enum class Certificate {
    LengthExceedsPiSqrtD2,
    LengthExceedsEllStar,
    ARateDominates,
    NormPlateauDecay,
    HorizonExhausted,
};

std::string_view to_string(Verdict v);
std::string_view to_string(Certificate c);

struct ClassifyOptions {
    double vanish_tol = 1e-3;
    double speed_tol = 1e-3;
    double eigen_slack = 1e-2;
    double window_fraction = 0.1;  // trailing window, as a fraction of the horizon
    std::optional<double> ell_star;  // skip the eigen solve when known
    double eigen_spacing_fraction = 0.02;
};

struct Evidence {
    double final_time = 0.0;
    double final_length = 0.0;
    double sup_u = 0.0;
    double sup_v = 0.0;
    double gdot = 0.0;
    double hdot = 0.0;
    double lambda_p_final = 0.0;  // NaN when the final domain could not be resolved
    double pi_sqrt_d2 = 0.0;
    std::optional<double> ell_star;
};

struct Classification {
    Verdict verdict = Verdict::Undecided;
    Certificate certificate = Certificate::HorizonExhausted;
    double fired_at = 0.0;  // first time the certificate held
    Evidence evidence;
    /// Vanishing is a finite-horizon plateau test, not a proof.
    bool heuristic = false;
};

/// l* for (d1, a, kernel), computed once per process and shared between threads.
/// nullopt when a >= d1.
std::optional<double> cached_ell_star(double d1, double a, const Kernel& k);

/// Length beyond which spreading is certain: min(pi sqrt(d2), l*).
double spreading_length(const ModelParams& p, const Kernel& k, const ClassifyOptions& opts = {});

Classification classify(const Trajectory& traj, const ModelParams& p, const Kernel& k,
                        const ClassifyOptions& opts = {});

/// Re-evaluates the firing condition of a verdict against the stored samples.
bool recheck(const Classification& c, const Trajectory& traj, const ModelParams& p,
             const ClassifyOptions& opts = {});

/// Stops a run once spreading is certain or the trailing window shows a plateau.
StopRule make_stop_rule(const ModelParams& p, const Kernel& k, const ClassifyOptions& opts = {});

/// Runs with the stop rule and classifies.
struct ClassifiedRun {
    Trajectory trajectory;
    Classification classification;
};
ClassifiedRun simulate_and_classify(const ModelParams& p, const InitialData& init, const Kernel& k,
                                    RunControl ctrl, const ClassifyOptions& opts = {});

// ---- threshold search -------------------------------------------------------

struct ThresholdOptions {
    double ray_mu = 0.5;  // direction (ray_mu, 1 - ray_mu)
    double s_min = 1e-6;
    double s_max = 1e3;
    int scan_points = 10;
    int bisection_steps = 6;
    int max_dt_halvings = 24;
    RunControl run;
    ClassifyOptions classify;
};

struct ScalePoint {
    double scale = 0.0;
    Verdict verdict = Verdict::Undecided;
    Certificate certificate = Certificate::HorizonExhausted;
    double dt_used = 0.0;
    double final_length = 0.0;
    std::string error;  // solver failure that turned this point Undecided
};

struct ThresholdEstimate {
    double ray_mu = 0.5;
    double ray_rho = 0.5;
    double lower = 0.0;  // largest scale seen vanishing
    double upper = 0.0;  // smallest scale seen spreading
    bool monotone = true;
    std::vector<ScalePoint> scan;
    std::vector<ScalePoint> refinement;
};

/// Classifies one run at (mu, rho) = scale * (ray_mu, 1 - ray_mu), halving dt on
/// stability errors.
ScalePoint classify_scale(const ModelParams& p, const InitialData& init, const Kernel& k,
                          double scale, const ThresholdOptions& opts);

/// Throws Error(Precondition) unless a < d1, h0 < pi sqrt(d2)/2 and h0 < l*/2;
/// Error(Inconclusive) when the scan does not see both verdicts.
ThresholdEstimate estimate_threshold(const ModelParams& p, const InitialData& init,
                                     const Kernel& k, const ThresholdOptions& opts = {});

// ---- vanishing super-solution ----------------------------------------------

struct SuperSolution {
    InteractionKind kind = InteractionKind::Competition;
    double h0 = 0.0;
    double h1 = 0.0;
    double mu = 0.0;
    double rho = 0.0;
    double d2 = 1.0;
    double lambda = 0.0;  // lambda_p(L_(-h1,h1) + a) < 0
    EigenProblem problem;
    EigenResult eigen;
    double budget = 0.0;  // mu + rho must not exceed this
    double m = 0.0;

    // competition
    double C = 0.0;
    double K = 0.0;
    double delta = 0.0;
    double sigma = 0.0;

    // predation
    double epsilon = 0.0;
    double k = 0.0;
    double gamma = 0.0;
    double theta = 0.0;
    double delta_mu = 0.0;

    double phi(double x) const;
    double s(double t) const;  // competition only
    double h_bar(double t) const;
    double g_bar(double t) const { return -h_bar(t); }
    /// Exact t -> infinity limit of h_bar.
    double h_bar_limit() const;
    /// Upper estimate of the limit used to size the budget; <= h1 when mu + rho <= budget.
    double h_bar_bound() const;
    double u_bar(double t, double x) const;
    double v_bar(double t, double x) const;
};

/// h1 = 0 picks the midpoint of (h0, l*/2). Uses the model's mu and rho for the
/// front curves. Throws Error(Regime) when the construction's hypotheses fail.
SuperSolution build_vanishing_supersolution(const ModelParams& p, const InitialData& init,
                                            const Kernel& k, double h1 = 0.0);

struct DominationReport {
    bool dominated = true;
    double tolerance = 1e-6;
    int samples_checked = 0;
    // largest amounts by which the solution exceeds the super-solution (<= 0 is good)
    double worst_u = -1e300;
    double worst_v = -1e300;
    double worst_g = -1e300;  // g_bar - g
    double worst_h = -1e300;  // h - h_bar
    double worst_time = 0.0;
};

/// Needs the trajectory's snapshots (run with keep_snapshots).
DominationReport check_domination(const SuperSolution& sup, const Trajectory& traj,
                                  double tolerance = 1e-6);

// ---- sweeps -----------------------------------------------------------------

struct SweepPlan {
    ModelParams base;
    double h0 = 1.0;
    double u0_amplitude = 0.5;
    double v0_amplitude = 0.5;
    std::vector<double> a, d1, d2, h0s, mu, rho;
    std::vector<InteractionKind> kinds;
    /// When non-empty replaces the mu/rho axes by budget * (ray_mu, 1 - ray_mu).
    std::vector<double> budget;
    double ray_mu = 0.5;
    Kernel kernel = make_kernel(KernelFamily::Tent, 1.0);
    RunControl run;
    ClassifyOptions classify;
};

struct PhaseRow {
    double a = 0.0, d1 = 0.0, d2 = 0.0, h0 = 0.0, mu = 0.0, rho = 0.0;
    InteractionKind kind = InteractionKind::Competition;
    Verdict verdict = Verdict::Undecided;
    Certificate certificate = Certificate::HorizonExhausted;
    double final_length = 0.0;
    double sup_u = 0.0;
    double sup_v = 0.0;
    double lambda_p_final = 0.0;
    std::string error;
};

struct PhaseTable {
    std::vector<PhaseRow> rows;  // row-major over a, d1, d2, h0, mu, rho, kind
};

/// One row per cell in grid order; failures are stored in the row. workers <= 0
/// uses the hardware concurrency.
PhaseTable sweep(const SweepPlan& plan, int workers);

}  // namespace nlfb
