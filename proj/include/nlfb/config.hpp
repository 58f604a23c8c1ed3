#pragma once

#include "nlfb/classify.hpp"
#include "nlfb/kernel.hpp"
#include "nlfb/model.hpp"
#include "nlfb/moving_solver.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nlfb {

/// Everything a CLI run needs, as read from a flat `section.key = value` document.
struct RunConfig {
    KernelFamily kernel_family = KernelFamily::Tent;
    double kernel_radius = 1.0;

    ModelParams model;
    double h0 = 0.0;
    double u0_amplitude = 0.5;
    double v0_amplitude = 0.5;

    int n = 200;
    double dt = 0.01;
    double horizon = 100.0;
    int record_every = 10;
    std::vector<double> snapshot_times;

    ClassifyOptions classify;

    double ray_mu = 0.5;
    double s_min = 1e-6;
    double s_max = 1e3;
    int scan_points = 10;
    int bisection_steps = 6;

    double supersolution_h1 = 0.0;

    std::vector<double> sweep_a, sweep_d1, sweep_d2, sweep_h0, sweep_mu, sweep_rho, sweep_budget;
    std::vector<InteractionKind> sweep_kind;
    int sweep_workers = 0;

    std::string output_directory = "out";
    std::vector<std::string> output_formats{"csv", "json"};

    Kernel kernel() const;
    InitialData initial_data() const;
    RunControl run_control() const;
    ThresholdOptions threshold_options() const;
    SweepPlan sweep_plan() const;
    bool wants(std::string_view format) const;
};

/// Lines are `key = value`; `#` starts a comment. Unknown or repeated keys are
/// errors. Throws Error(Parse) with the line number, Error(Validation) naming the
/// offending key.
RunConfig parse_config(std::string_view text);

/// Every key with its resolved value, in documentation order.
std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& cfg);

/// resolved_entries rendered as a document that parse_config reads back exactly.
std::string to_config_text(const RunConfig& cfg);

}  // namespace nlfb
