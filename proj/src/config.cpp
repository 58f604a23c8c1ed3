#include "nlfb/config.hpp"

#include "nlfb/error.hpp"
#include "nlfb/io.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <set>

namespace nlfb {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    s = trim(s);
    if (s.empty()) return out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void invalid(const std::string& key, const std::string& what) {
    throw Error(ErrorKind::Validation, key + " " + what);
}

double to_double(const std::string& key, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || text.empty()) {
        invalid(key, "must be a number (got '" + std::string(text) + "')");
    }
    if (!std::isfinite(v)) invalid(key, "must be finite");
    return v;
}

int to_int(const std::string& key, std::string_view text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || text.empty()) {
        invalid(key, "must be an integer (got '" + std::string(text) + "')");
    }
    return v;
}

std::vector<double> to_doubles(const std::string& key, std::string_view text) {
    std::vector<double> out;
    for (auto item : split_list(text)) out.push_back(to_double(key, item));
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

template <class T, class F>
std::string join_with(const std::vector<T>& v, F f) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += f(v[i]);
    }
    return out;
}

struct Field {
    const char* key;
    bool required;
    std::function<void(RunConfig&, const std::string&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define NLFB_DOUBLE(KEY, MEMBER)                                                            \
    Field {                                                                                 \
        KEY, false,                                                                         \
            [](RunConfig& c, const std::string& k, std::string_view v) {                    \
                c.MEMBER = to_double(k, v);                                                 \
            },                                                                              \
            [](const RunConfig& c) { return format_double(c.MEMBER); }                      \
    }
#define NLFB_REQUIRED(KEY, MEMBER)                                                          \
    Field {                                                                                 \
        KEY, true,                                                                          \
            [](RunConfig& c, const std::string& k, std::string_view v) {                    \
                c.MEMBER = to_double(k, v);                                                 \
            },                                                                              \
            [](const RunConfig& c) { return format_double(c.MEMBER); }                      \
    }
#define NLFB_INT(KEY, MEMBER)                                                               \
    Field {                                                                                 \
        KEY, false,                                                                         \
            [](RunConfig& c, const std::string& k, std::string_view v) {                    \
                c.MEMBER = to_int(k, v);                                                    \
            },                                                                              \
            [](const RunConfig& c) { return std::to_string(c.MEMBER); }                     \
    }
#define NLFB_LIST(KEY, MEMBER)                                                              \
    Field {                                                                                 \
        KEY, false,                                                                         \
            [](RunConfig& c, const std::string& k, std::string_view v) {                    \
                c.MEMBER = to_doubles(k, v);                                                \
            },                                                                              \
            [](const RunConfig& c) { return join(c.MEMBER); }                               \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"kernel.family", false,
         [](RunConfig& c, const std::string& k, std::string_view v) {
             try {
                 c.kernel_family = kernel_family_from_string(v);
             } catch (const Error&) {
                 invalid(k, "must be tent, parabolic_bump or truncated_gaussian");
             }
         },
         [](const RunConfig& c) { return std::string(to_string(c.kernel_family)); }},
        NLFB_DOUBLE("kernel.radius", kernel_radius),
        {"model.kind", true,
         [](RunConfig& c, const std::string& k, std::string_view v) {
             try {
                 c.model.kind = interaction_kind_from_string(v);
             } catch (const Error&) {
                 invalid(k, "must be competition or predation");
             }
         },
         [](const RunConfig& c) { return std::string(to_string(c.model.kind)); }},
        NLFB_REQUIRED("model.d1", model.d1),
        NLFB_REQUIRED("model.d2", model.d2),
        NLFB_REQUIRED("model.a", model.a),
        NLFB_REQUIRED("model.b", model.b),
        NLFB_REQUIRED("model.c", model.c),
        NLFB_REQUIRED("model.mu", model.mu),
        NLFB_REQUIRED("model.rho", model.rho),
        NLFB_REQUIRED("init.h0", h0),
        NLFB_DOUBLE("init.u0_amplitude", u0_amplitude),
        NLFB_DOUBLE("init.v0_amplitude", v0_amplitude),
        NLFB_INT("numerics.n", n),
        NLFB_DOUBLE("numerics.dt", dt),
        NLFB_DOUBLE("numerics.horizon", horizon),
        NLFB_INT("numerics.record_every", record_every),
        NLFB_LIST("numerics.snapshot_times", snapshot_times),
        NLFB_DOUBLE("classify.vanish_tol", classify.vanish_tol),
        NLFB_DOUBLE("classify.speed_tol", classify.speed_tol),
        NLFB_DOUBLE("classify.eigen_slack", classify.eigen_slack),
        NLFB_DOUBLE("classify.window_fraction", classify.window_fraction),
        {"classify.ell_star", false,
         [](RunConfig& c, const std::string& k, std::string_view v) {
             const double x = to_double(k, v);
             if (x < 0.0) invalid(k, "must be >= 0 (0 computes it)");
             c.classify.ell_star = x > 0.0 ? std::optional<double>(x) : std::nullopt;
         },
         [](const RunConfig& c) { return format_double(c.classify.ell_star.value_or(0.0)); }},
        NLFB_DOUBLE("threshold.ray_mu", ray_mu),
        NLFB_DOUBLE("threshold.s_min", s_min),
        NLFB_DOUBLE("threshold.s_max", s_max),
        NLFB_INT("threshold.scan_points", scan_points),
        NLFB_INT("threshold.bisection_steps", bisection_steps),
        NLFB_DOUBLE("supersolution.h1", supersolution_h1),
        NLFB_LIST("sweep.a", sweep_a),
        NLFB_LIST("sweep.d1", sweep_d1),
        NLFB_LIST("sweep.d2", sweep_d2),
        NLFB_LIST("sweep.h0", sweep_h0),
        NLFB_LIST("sweep.mu", sweep_mu),
        NLFB_LIST("sweep.rho", sweep_rho),
        NLFB_LIST("sweep.budget", sweep_budget),
        {"sweep.kind", false,
         [](RunConfig& c, const std::string& k, std::string_view v) {
             c.sweep_kind.clear();
             for (auto item : split_list(v)) {
                 try {
                     c.sweep_kind.push_back(interaction_kind_from_string(item));
                 } catch (const Error&) {
                     invalid(k, "entries must be competition or predation");
                 }
             }
         },
         [](const RunConfig& c) {
             return join_with(c.sweep_kind,
                              [](InteractionKind x) { return std::string(to_string(x)); });
         }},
        NLFB_INT("sweep.workers", sweep_workers),
        {"output.directory", false,
         [](RunConfig& c, const std::string& k, std::string_view v) {
             if (v.empty()) invalid(k, "must not be empty");
             c.output_directory = std::string(v);
         },
         [](const RunConfig& c) { return c.output_directory; }},
        {"output.formats", false,
         [](RunConfig& c, const std::string& k, std::string_view v) {
             c.output_formats.clear();
             for (auto item : split_list(v)) {
                 if (item != "csv" && item != "json") invalid(k, "entries must be csv or json");
                 c.output_formats.emplace_back(item);
             }
         },
         [](const RunConfig& c) {
             return join_with(c.output_formats, [](const std::string& x) { return x; });
         }},
    };
    return table;
}

#undef NLFB_DOUBLE
#undef NLFB_REQUIRED
#undef NLFB_INT
#undef NLFB_LIST

void positive(const std::string& key, double v) {
    if (!(v > 0.0)) invalid(key, "must be > 0");
}

void all_positive(const std::string& key, const std::vector<double>& v) {
    for (double x : v) {
        if (!(x > 0.0)) invalid(key, "entries must be > 0");
    }
}

void validate(const RunConfig& c) {
    positive("kernel.radius", c.kernel_radius);
    try {
        c.model.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::Validation, e.what());
    }
    positive("init.h0", c.h0);
    positive("init.u0_amplitude", c.u0_amplitude);
    positive("init.v0_amplitude", c.v0_amplitude);
    if (c.n < 4 || c.n % 2 != 0) invalid("numerics.n", "must be an even integer >= 4");
    positive("numerics.dt", c.dt);
    positive("numerics.horizon", c.horizon);
    if (c.record_every < 1) invalid("numerics.record_every", "must be >= 1");
    for (double t : c.snapshot_times) {
        if (t < 0.0) invalid("numerics.snapshot_times", "entries must be >= 0");
    }
    positive("classify.vanish_tol", c.classify.vanish_tol);
    positive("classify.speed_tol", c.classify.speed_tol);
    if (c.classify.eigen_slack < 0.0) invalid("classify.eigen_slack", "must be >= 0");
    if (!(c.classify.window_fraction > 0.0 && c.classify.window_fraction <= 1.0)) {
        invalid("classify.window_fraction", "must lie in (0, 1]");
    }
    if (!(c.ray_mu > 0.0 && c.ray_mu < 1.0)) invalid("threshold.ray_mu", "must lie in (0, 1)");
    positive("threshold.s_min", c.s_min);
    if (!(c.s_max > c.s_min)) invalid("threshold.s_max", "must exceed threshold.s_min");
    if (c.scan_points < 2) invalid("threshold.scan_points", "must be >= 2");
    if (c.bisection_steps < 0) invalid("threshold.bisection_steps", "must be >= 0");
    if (c.supersolution_h1 < 0.0) invalid("supersolution.h1", "must be >= 0 (0 picks it)");
    all_positive("sweep.a", c.sweep_a);
    all_positive("sweep.d1", c.sweep_d1);
    all_positive("sweep.d2", c.sweep_d2);
    all_positive("sweep.h0", c.sweep_h0);
    all_positive("sweep.mu", c.sweep_mu);
    all_positive("sweep.rho", c.sweep_rho);
    all_positive("sweep.budget", c.sweep_budget);
    if (c.sweep_workers < 0) invalid("sweep.workers", "must be >= 0 (0 uses every core)");
    // Kernel positivity radius must sit well inside the initial habitat.
    const PositivityPair pos = positivity_pair(c.kernel(), c.h0);
    if (!(pos.radius < 0.25 * c.h0) || !(pos.floor > 0.0)) {
        invalid("init.h0", "is too small for the kernel positivity condition");
    }
}

}  // namespace

Kernel RunConfig::kernel() const { return make_kernel(kernel_family, kernel_radius); }

InitialData RunConfig::initial_data() const {
    return cosine_initial_data(h0, u0_amplitude, v0_amplitude, static_cast<std::size_t>(n));
}

RunControl RunConfig::run_control() const {
    RunControl ctrl;
    ctrl.horizon = horizon;
    ctrl.dt = dt;
    ctrl.n = n;
    ctrl.record_every = record_every;
    ctrl.snapshot_times = snapshot_times;
    return ctrl;
}

ThresholdOptions RunConfig::threshold_options() const {
    ThresholdOptions o;
    o.ray_mu = ray_mu;
    o.s_min = s_min;
    o.s_max = s_max;
    o.scan_points = scan_points;
    o.bisection_steps = bisection_steps;
    o.run = run_control();
    o.run.snapshot_times.clear();
    o.classify = classify;
    return o;
}

SweepPlan RunConfig::sweep_plan() const {
    SweepPlan plan;
    plan.base = model;
    plan.h0 = h0;
    plan.u0_amplitude = u0_amplitude;
    plan.v0_amplitude = v0_amplitude;
    plan.a = sweep_a;
    plan.d1 = sweep_d1;
    plan.d2 = sweep_d2;
    plan.h0s = sweep_h0;
    plan.mu = sweep_mu;
    plan.rho = sweep_rho;
    plan.kinds = sweep_kind;
    plan.budget = sweep_budget;
    plan.ray_mu = ray_mu;
    plan.kernel = kernel();
    plan.run = run_control();
    plan.run.snapshot_times.clear();
    plan.classify = classify;
    return plan;
}

bool RunConfig::wants(std::string_view format) const {
    for (const auto& f : output_formats) {
        if (f == format) return true;
    }
    return false;
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, const Field*> by_key;
    for (const Field& f : fields()) by_key.emplace(f.key, &f);

    RunConfig cfg;
    std::set<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Parse,
                        "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": missing key");
        }
        const auto it = by_key.find(key);
        if (it == by_key.end()) {
            throw Error(ErrorKind::Parse,
                        "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw Error(ErrorKind::Parse,
                        "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        it->second->set(cfg, key, value);
    }
    for (const Field& f : fields()) {
        if (f.required && !seen.count(f.key)) invalid(f.key, "is required");
    }
    validate(cfg);
    return cfg;
}

std::vector<std::pair<std::string, std::string>> resolved_entries(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Field& f : fields()) out.emplace_back(f.key, f.get(cfg));
    return out;
}

std::string to_config_text(const RunConfig& cfg) {
    std::string out;
    for (const auto& [k, v] : resolved_entries(cfg)) out += k + " = " + v + "\n";
    return out;
}

}  // namespace nlfb
