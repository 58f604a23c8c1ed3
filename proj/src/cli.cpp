#include "nlfb/cli.hpp"

#include "nlfb/classify.hpp"
#include "nlfb/config.hpp"
#include "nlfb/eigen.hpp"
#include "nlfb/error.hpp"
#include "nlfb/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <ostream>

namespace nlfb {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse:
        case ErrorKind::Validation:
        case ErrorKind::InvalidParameter:
        case ErrorKind::Precondition:
        case ErrorKind::Regime:
        case ErrorKind::NoRoot:
        case ErrorKind::Domain:
        case ErrorKind::Shape:
        case ErrorKind::Resolution:
            return kExitConfig;
        case ErrorKind::SolverFailure:
        case ErrorKind::Stability:
        case ErrorKind::NumericalBlowup:
        case ErrorKind::DegenerateDomain:
        case ErrorKind::LinearAlgebra:
        case ErrorKind::Convergence:
        case ErrorKind::SearchRange:
            return kExitSolver;
        case ErrorKind::Inconclusive:
            return kExitInconclusive;
        case ErrorKind::Io:
            return kExitUsage;
    }
    return kExitUsage;
}

json config_json(const RunConfig& cfg) {
    json j = json::object();
    for (const auto& [k, v] : resolved_entries(cfg)) j[k] = v;
    return j;
}

RunConfig load_config(const std::string& path) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        // a JSON summary written by an earlier run
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::Parse, path + ": " + e.what());
        }
        if (!j.contains("config") || !j["config"].is_object()) {
            throw Error(ErrorKind::Parse, path + ": JSON input needs a 'config' object");
        }
        std::string doc;
        for (const auto& [k, v] : j["config"].items()) {
            if (!v.is_string()) throw Error(ErrorKind::Parse, path + ": config." + k + " is not a string");
            doc += k + " = " + v.get<std::string>() + "\n";
        }
        return parse_config(doc);
    }
    return parse_config(text);
}

fs::path output_dir(const RunConfig& cfg, const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("NLFB_OUTPUT_DIR"); env && *env) return env;
    return cfg.output_directory;
}

json sample_json(const TrajectorySample& s) {
    return json{{"t", s.t},           {"g", s.g},         {"h", s.h},
                {"gdot", s.gdot},     {"hdot", s.hdot},   {"sup_u", s.sup_u},
                {"sup_v", s.sup_v},   {"u_center", s.u_center}, {"v_center", s.v_center}};
}

json regime_json(const RunConfig& cfg) {
    const ModelParams& p = cfg.model;
    const double half_pi = 0.5 * std::numbers::pi * std::sqrt(p.d2);
    json j{{"weak_competition", p.kind == InteractionKind::Competition && p.weak_competition()},
           {"weak_predation", p.kind == InteractionKind::Predation && p.weak_predation()},
           {"a_below_d1", p.a < p.d1},
           {"half_pi_sqrt_d2", half_pi},
           {"h0_below_half_pi_sqrt_d2", cfg.h0 < half_pi}};
    const auto ell = cfg.classify.ell_star ? cfg.classify.ell_star
                                           : cached_ell_star(p.d1, p.a, cfg.kernel());
    if (ell) {
        j["half_ell_star"] = 0.5 * *ell;
        j["h0_below_half_ell_star"] = cfg.h0 < 0.5 * *ell;
    }
    return j;
}

json classification_json(const Classification& c, bool rechecked) {
    const Evidence& e = c.evidence;
    json ev{{"final_time", e.final_time},
            {"final_length", e.final_length},
            {"sup_u", e.sup_u},
            {"sup_v", e.sup_v},
            {"gdot", e.gdot},
            {"hdot", e.hdot},
            {"lambda_p_final", e.lambda_p_final},
            {"pi_sqrt_d2", e.pi_sqrt_d2}};
    ev["ell_star"] = e.ell_star ? json(*e.ell_star) : json(nullptr);
    return json{{"verdict", std::string(to_string(c.verdict))},
                {"certificate", std::string(to_string(c.certificate))},
                {"fired_at", c.fired_at},
                {"heuristic", c.heuristic},
                {"certificate_rechecked", rechecked},
                {"evidence", ev}};
}

json scale_json(const ScalePoint& s) {
    json j{{"scale", s.scale},
           {"verdict", std::string(to_string(s.verdict))},
           {"certificate", std::string(to_string(s.certificate))},
           {"dt", s.dt_used},
           {"final_length", s.final_length}};
    if (!s.error.empty()) j["error"] = s.error;
    return j;
}

void emit(std::ostream& out, const fs::path& dir, const std::string& name, const json& j,
          bool to_file) {
    const std::string text = j.dump(2) + "\n";
    if (to_file) write_file_atomic(dir / name, text);
    out << text;
}

int cmd_simulate(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const Trajectory traj = run(cfg.model, cfg.initial_data(), cfg.kernel(), cfg.run_control());
    const SolutionBounds sb = bounds(cfg.model, cfg.initial_data());
    json files = json::array();
    if (cfg.wants("csv")) {
        write_file_atomic(dir / "trajectory.csv", trajectory_csv(traj));
        files.push_back("trajectory.csv");
        if (!traj.snapshots.empty()) {
            write_file_atomic(dir / "snapshots.csv", snapshots_csv(traj));
            files.push_back("snapshots.csv");
        }
    }
    json j{{"command", "simulate"},
           {"config", config_json(cfg)},
           {"termination", std::string(to_string(traj.termination))},
           {"steps", traj.steps},
           {"bounds", {{"k1", sb.k1}, {"k2", sb.k2}, {"k3", sb.k3}, {"L", sb.L}}},
           {"final", sample_json(traj.back())},
           {"files", files}};
    emit(out, dir, "summary.json", j, cfg.wants("json"));
    return kExitOk;
}

int cmd_classify(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const ClassifiedRun r = simulate_and_classify(cfg.model, cfg.initial_data(), cfg.kernel(),
                                                  cfg.run_control(), cfg.classify);
    if (cfg.wants("csv")) write_file_atomic(dir / "trajectory.csv", trajectory_csv(r.trajectory));
    const bool ok = recheck(r.classification, r.trajectory, cfg.model, cfg.classify);
    json j{{"command", "classify"},
           {"config", config_json(cfg)},
           {"termination", std::string(to_string(r.trajectory.termination))},
           {"stop_label", r.trajectory.stop_label},
           {"regime", regime_json(cfg)},
           {"classification", classification_json(r.classification, ok)}};
    emit(out, dir, "classification.json", j, cfg.wants("json"));
    return r.classification.verdict == Verdict::Undecided ? kExitInconclusive : kExitOk;
}

int cmd_threshold(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const ThresholdEstimate est =
        estimate_threshold(cfg.model, cfg.initial_data(), cfg.kernel(), cfg.threshold_options());
    json scan = json::array(), refine = json::array();
    for (const auto& s : est.scan) scan.push_back(scale_json(s));
    for (const auto& s : est.refinement) refine.push_back(scale_json(s));
    json j{{"command", "threshold"},
           {"config", config_json(cfg)},
           {"ray", {est.ray_mu, est.ray_rho}},
           {"lower", est.lower},
           {"upper", est.upper},
           {"monotone", est.monotone},
           {"scan", scan},
           {"refinement", refine}};
    emit(out, dir, "threshold.json", j, cfg.wants("json"));
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, int workers, const fs::path& dir, std::ostream& out) {
    const PhaseTable table = sweep(cfg.sweep_plan(), workers >= 0 ? workers : cfg.sweep_workers);
    if (cfg.wants("csv")) write_file_atomic(dir / "phase_table.csv", phase_table_csv(table));
    json counts{{"Spreading", 0}, {"Vanishing", 0}, {"Undecided", 0}};
    json failures = json::array();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const PhaseRow& r = table.rows[i];
        counts[std::string(to_string(r.verdict))] =
            counts[std::string(to_string(r.verdict))].get<int>() + 1;
        if (!r.error.empty()) failures.push_back({{"row", i}, {"error", r.error}});
    }
    json j{{"command", "sweep"},
           {"config", config_json(cfg)},
           {"cells", table.rows.size()},
           {"counts", counts},
           {"failures", failures}};
    emit(out, dir, "sweep.json", j, cfg.wants("json"));
    return kExitOk;
}

int cmd_supersolution(const RunConfig& cfg, double budget_fraction, const fs::path& dir,
                      std::ostream& out) {
    const Kernel k = cfg.kernel();
    const InitialData init = cfg.initial_data();
    ModelParams p = cfg.model;
    SuperSolution sup = build_vanishing_supersolution(p, init, k, cfg.supersolution_h1);
    if (budget_fraction > 0.0) {
        const double share = p.mu / (p.mu + p.rho);
        const double total = budget_fraction * sup.budget;
        p = p.with_front_coefficients(share * total, (1.0 - share) * total);
        sup = build_vanishing_supersolution(p, init, k, cfg.supersolution_h1);
    }
    RunControl ctrl = cfg.run_control();
    ctrl.keep_snapshots = true;
    const Trajectory traj = run(p, init, k, ctrl);
    const DominationReport rep = check_domination(sup, traj);
    const bool within = p.mu + p.rho <= sup.budget;
    json constants{{"h1", sup.h1}, {"lambda", sup.lambda}, {"budget", sup.budget}, {"m", sup.m}};
    if (sup.kind == InteractionKind::Competition) {
        constants["C"] = sup.C;
        constants["K"] = sup.K;
        constants["delta"] = sup.delta;
        constants["sigma"] = sup.sigma;
    } else {
        constants["epsilon"] = sup.epsilon;
        constants["k"] = sup.k;
        constants["sigma"] = sup.sigma;
        constants["gamma"] = sup.gamma;
        constants["theta"] = sup.theta;
        constants["delta"] = sup.delta_mu;
    }
    json j{{"command", "supersolution-check"},
           {"config", config_json(cfg)},
           {"mu", p.mu},
           {"rho", p.rho},
           {"within_budget", within},
           {"constants", constants},
           {"h_bar_limit", sup.h_bar_limit()},
           {"h_bar_bound", sup.h_bar_bound()},
           {"report",
            {{"dominated", rep.dominated},
             {"tolerance", rep.tolerance},
             {"samples_checked", rep.samples_checked},
             {"worst_u", rep.worst_u},
             {"worst_v", rep.worst_v},
             {"worst_g", rep.worst_g},
             {"worst_h", rep.worst_h},
             {"first_violation_time", rep.worst_time}}}};
    emit(out, dir, "supersolution.json", j, cfg.wants("json"));
    return within && !rep.dominated ? kExitUsage : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nonlocal-local free boundary laboratory", "nlfb"};
    app.require_subcommand(1);

    std::string config_path, output_flag;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "config file (key = value, or a JSON summary)")
            ->required();
        sub->add_option("-o,--output", output_flag, "output directory");
    };

    auto* simulate = app.add_subcommand("simulate", "integrate one run, write trajectory CSV");
    add_config(simulate);
    auto* classify_cmd = app.add_subcommand("classify", "simulate, then classify the run");
    add_config(classify_cmd);
    auto* threshold = app.add_subcommand("threshold", "bracket the mu + rho threshold on a ray");
    add_config(threshold);
    auto* sweep_cmd = app.add_subcommand("sweep", "classify every cell of a parameter grid");
    add_config(sweep_cmd);
    int workers = -1;
    sweep_cmd->add_option("--workers", workers, "worker threads (overrides sweep.workers)");
    auto* super_cmd =
        app.add_subcommand("supersolution-check", "compare a run with the vanishing super-solution");
    add_config(super_cmd);
    double budget_fraction = 0.0;
    super_cmd->add_option("--budget-fraction", budget_fraction,
                          "rescale mu + rho to this fraction of the admissible budget");

    auto* eigen_cmd = app.add_subcommand("eigen", "principal eigenvalue on an interval");
    double d = 1.0, theta0 = 0.0, length = 0.0, left = 0.0, radius = 1.0;
    int n = 0;
    std::string family = "tent";
    eigen_cmd->add_option("--d", d, "diffusivity");
    eigen_cmd->add_option("--theta0", theta0, "constant potential");
    eigen_cmd->add_option("--length", length, "interval length")->required();
    eigen_cmd->add_option("--left", left, "left end of the interval");
    eigen_cmd->add_option("--n", n, "node count (0 picks spacing R/20)");
    eigen_cmd->add_option("--kernel", family, "kernel family");
    eigen_cmd->add_option("--radius", radius, "kernel support radius");

    auto* crit_cmd = app.add_subcommand("critical-length", "length where lambda_p(L_I + a) = 0");
    double d1 = 1.0, a = 0.5, tol = 1e-6;
    crit_cmd->add_option("--d1", d1, "nonlocal diffusivity");
    crit_cmd->add_option("--a", a, "growth rate");
    crit_cmd->add_option("--tol", tol, "bracket width tolerance");
    crit_cmd->add_option("--kernel", family, "kernel family");
    crit_cmd->add_option("--radius", radius, "kernel support radius");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << json{{"error", "usage"}, {"message", e.what()}, {"exit_code", kExitUsage}}.dump()
            << "\n";
        return kExitUsage;
    }

    try {
        if (*eigen_cmd) {
            EigenProblem prob;
            prob.d = d;
            prob.theta0 = theta0;
            prob.left = left;
            prob.right = left + length;
            prob.kernel = make_kernel(kernel_family_from_string(family), radius);
            if (!(length > 0.0)) throw Error(ErrorKind::InvalidParameter, "--length must be > 0");
            prob.n = n > 0 ? n : nodes_for_spacing(length, 0.05 * radius);
            const EigenResult r = lambda_p(prob);
            out << json{{"lambda_p", r.lambda_p},
                        {"residual", r.residual},
                        {"iterations", r.iterations},
                        {"n", prob.n},
                        {"length", length}}
                       .dump(2)
                << "\n";
            return kExitOk;
        }
        if (*crit_cmd) {
            const Kernel k = make_kernel(kernel_family_from_string(family), radius);
            const CriticalLength c = critical_length(d1, a, k, tol);
            out << json{{"ell_star", c.ell_star},
                        {"lambda_at_ell_star", c.lambda_at_ell_star},
                        {"bracket", {c.bracket_low, c.bracket_high}},
                        {"n", c.n}}
                       .dump(2)
                << "\n";
            return kExitOk;
        }
        const RunConfig cfg = load_config(config_path);
        const fs::path dir = output_dir(cfg, output_flag);
        if (*simulate) return cmd_simulate(cfg, dir, out);
        if (*classify_cmd) return cmd_classify(cfg, dir, out);
        if (*threshold) return cmd_threshold(cfg, dir, out);
        if (*sweep_cmd) return cmd_sweep(cfg, workers, dir, out);
        if (*super_cmd) return cmd_supersolution(cfg, budget_fraction, dir, out);
    } catch (const Error& e) {
        const int code = exit_code_for(e.kind());
        err << json{{"error", std::string(to_string(e.kind()))},
                    {"message", e.what()},
                    {"exit_code", code}}
                   .dump()
            << "\n";
        return code;
    } catch (const std::exception& e) {
        err << json{{"error", "internal"}, {"message", e.what()}, {"exit_code", kExitUsage}}.dump()
            << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace nlfb
