#include "nlfb/classify.hpp"
#include "nlfb/error.hpp"

#include <doctest.h>

#include <cmath>
#include <future>

using namespace nlfb;

namespace {

const double kPi = std::acos(-1.0);
const Kernel kTent = make_kernel(KernelFamily::Tent, 1.0);

ModelParams vanishing_params(InteractionKind kind = InteractionKind::Competition) {
    ModelParams p;
    p.d1 = 1.0;
    p.d2 = 1.0;
    p.a = 0.3;
    p.b = 0.2;
    p.c = 0.5;
    p.mu = 0.01;
    p.rho = 0.01;
    p.kind = kind;
    return p;
}

RunControl control(double horizon, int n = 100, double dt = 0.1) {
    RunControl c;
    c.horizon = horizon;
    c.n = n;
    c.dt = dt;
    c.record_every = 10;
    return c;
}

Trajectory synthetic(const std::vector<double>& lengths, double horizon) {
    Trajectory t;
    t.horizon = horizon;
    t.intervals = 100;
    t.dt = 1.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        TrajectorySample s;
        s.t = static_cast<double>(i);
        s.h = 0.5 * lengths[i];
        s.g = -s.h;
        s.hdot = 0.1;
        s.gdot = -0.1;
        s.sup_u = s.sup_v = 0.5;
        t.samples.push_back(s);
    }
    return t;
}

}  // namespace

TEST_CASE("a >= d1 spreads from the start") {
    ModelParams p = vanishing_params();
    p.a = 1.0;
    const ClassifiedRun r = simulate_and_classify(p, cosine_initial_data(0.3, 0.5, 0.5, 100),
                                                  kTent, control(1.0, 100, 0.05));
    CHECK(r.classification.verdict == Verdict::Spreading);
    CHECK(r.classification.certificate == Certificate::ARateDominates);
    CHECK(r.classification.fired_at == 0.0);
    CHECK_FALSE(r.classification.evidence.ell_star.has_value());
    CHECK(recheck(r.classification, r.trajectory, p));
}

TEST_CASE("length certificates on a synthetic trajectory") {
    ModelParams p = vanishing_params();
    ClassifyOptions opts;
    opts.ell_star = 10.0;
    const Trajectory t = synthetic({2.0, 3.0, kPi, kPi + 0.01, 4.0}, 10.0);
    const Classification c = classify(t, p, kTent, opts);
    CHECK(c.verdict == Verdict::Spreading);
    CHECK(c.certificate == Certificate::LengthExceedsPiSqrtD2);
    CHECK(c.fired_at == 3.0);
    CHECK(recheck(c, t, p, opts));

    opts.ell_star = 2.5;
    const Classification e = classify(t, p, kTent, opts);
    CHECK(e.certificate == Certificate::LengthExceedsEllStar);
    CHECK(e.fired_at == 1.0);

    // both thresholds crossed at the same sample: the smaller one names the certificate
    opts.ell_star = 3.1;
    const Trajectory jump = synthetic({2.0, 5.0}, 10.0);
    CHECK(classify(jump, p, kTent, opts).certificate == Certificate::LengthExceedsEllStar);

    const Trajectory exact = synthetic({2.0, kPi}, 10.0);
    opts.ell_star = 10.0;
    const Classification u = classify(exact, p, kTent, opts);
    CHECK(u.verdict == Verdict::Undecided);
    CHECK(u.certificate == Certificate::HorizonExhausted);
}

TEST_CASE("small fronts and weak growth vanish") {
    const ModelParams p = vanishing_params();
    const InitialData init = cosine_initial_data(0.3, 0.1, 0.1, 100);
    const ClassifiedRun r = simulate_and_classify(p, init, kTent, control(200.0));
    const Classification& c = r.classification;
    CHECK(c.verdict == Verdict::Vanishing);
    CHECK(c.certificate == Certificate::NormPlateauDecay);
    CHECK(c.heuristic);
    CHECK(r.trajectory.termination == Termination::StopRule);
    CHECK(r.trajectory.stop_label == "vanishing_plateau");
    CHECK(c.evidence.final_length <= kPi + 2.0 * r.trajectory.final_spacing());
    CHECK(c.evidence.sup_u < 1e-3);
    CHECK(c.evidence.sup_v < 1e-3);
    CHECK(c.evidence.lambda_p_final < 0.0);
    REQUIRE(c.evidence.ell_star.has_value());
    CHECK(c.evidence.final_length < *c.evidence.ell_star);
    CHECK(recheck(c, r.trajectory, p));

    // tampered evidence no longer rechecks
    Classification bad = c;
    bad.evidence.lambda_p_final = 1.0;
    CHECK_FALSE(recheck(bad, r.trajectory, p));
}

TEST_CASE("short horizons stay undecided") {
    const ModelParams p = vanishing_params();
    const ClassifiedRun r = simulate_and_classify(p, cosine_initial_data(0.3, 0.1, 0.1, 100),
                                                  kTent, control(2.0));
    CHECK(r.classification.verdict == Verdict::Undecided);
    CHECK(r.classification.certificate == Certificate::HorizonExhausted);
    CHECK(recheck(r.classification, r.trajectory, p));
    CHECK_THROWS_AS(classify(Trajectory{}, p, kTent), Error);
}

TEST_CASE("critical length cache") {
    const auto a = cached_ell_star(1.0, 0.5, kTent);
    REQUIRE(a.has_value());
    CHECK(*a == doctest::Approx(critical_length(1.0, 0.5, kTent, 1e-8).ell_star).epsilon(1e-7));
    CHECK_FALSE(cached_ell_star(1.0, 1.0, kTent).has_value());
    std::vector<std::future<std::optional<double>>> jobs;
    for (int i = 0; i < 8; ++i) {
        jobs.push_back(std::async(std::launch::async, [] { return cached_ell_star(1.0, 0.45, kTent); }));
    }
    const auto first = jobs[0].get();
    for (std::size_t i = 1; i < jobs.size(); ++i) CHECK(jobs[i].get() == first);

    ModelParams p = vanishing_params();
    CHECK(spreading_length(p, kTent) == doctest::Approx(*cached_ell_star(1.0, 0.3, kTent)));
    p.a = 1.5;
    p.d2 = 0.25;
    CHECK(spreading_length(p, kTent) == doctest::Approx(0.5 * kPi));
}

TEST_CASE("threshold preconditions") {
    const InitialData init = cosine_initial_data(0.3, 0.1, 0.1, 100);
    auto kind_of = [&](const ModelParams& p, const InitialData& d, ThresholdOptions o) {
        try {
            (void)estimate_threshold(p, d, kTent, o);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Io;
    };
    ModelParams p = vanishing_params();
    ThresholdOptions o;
    o.run = control(20.0);
    o.ray_mu = 1.0;
    CHECK(kind_of(p, init, o) == ErrorKind::InvalidParameter);
    o.ray_mu = 0.5;
    p.a = 1.0;
    CHECK(kind_of(p, init, o) == ErrorKind::Precondition);
    p = vanishing_params();
    CHECK(kind_of(p, cosine_initial_data(0.6, 0.1, 0.1, 100), o) == ErrorKind::Precondition);
    p.d2 = 0.01;
    CHECK(kind_of(p, init, o) == ErrorKind::Precondition);

    p = vanishing_params();
    o.run = control(200.0);
    o.s_min = 1e-6;
    o.s_max = 1e-5;
    o.scan_points = 2;
    CHECK(kind_of(p, init, o) == ErrorKind::Inconclusive);
    o.run = control(1.0);
    CHECK(kind_of(p, init, o) == ErrorKind::Inconclusive);
}

TEST_CASE("scale classification halves dt on stability errors") {
    ThresholdOptions o;
    o.run = control(5.0, 100, 0.2);
    const ScalePoint pt = classify_scale(vanishing_params(), cosine_initial_data(0.3, 0.5, 0.5, 100),
                                         kTent, 50.0, o);
    CHECK(pt.dt_used < 0.2);
    CHECK(pt.error.empty());
    CHECK(pt.verdict == Verdict::Spreading);
}

TEST_CASE("vanishing super-solution") {
    for (InteractionKind kind : {InteractionKind::Competition, InteractionKind::Predation}) {
        CAPTURE(to_string(kind));
        ModelParams p = vanishing_params(kind);
        const InitialData init = cosine_initial_data(0.4, 0.1, 0.1, 200);
        const SuperSolution first = build_vanishing_supersolution(p, init, kTent);
        CHECK(first.lambda < 0.0);
        CHECK(first.h1 > 0.4);
        CHECK(first.h1 < 0.5 * *cached_ell_star(1.0, 0.3, kTent));
        CHECK(first.budget > 0.0);

        p.mu = p.rho = 0.5 * first.budget;
        const SuperSolution sup = build_vanishing_supersolution(p, init, kTent, first.h1);
        CHECK(sup.h_bar(0.0) == doctest::Approx(0.4));
        CHECK(sup.h_bar_limit() <= sup.h_bar_bound() + 1e-12);
        CHECK(sup.h_bar_bound() <= sup.h1 + 1e-12);
        double prev = sup.h_bar(0.0);
        for (double t = 1.0; t < 200.0; t += 1.0) {
            CHECK(sup.h_bar(t) >= prev);
            CHECK(sup.h_bar(t) <= sup.h_bar_limit() + 1e-12);
            prev = sup.h_bar(t);
        }
        for (int i = 0; i <= 200; ++i) {
            const double x = -0.4 + 0.004 * i;
            CHECK(sup.u_bar(0.0, x) >= init.u0_at(x) - 1e-12);
            CHECK(sup.v_bar(0.0, x) >= init.v0_at(x) - 1e-12);
        }
        CHECK(sup.phi(sup.h1 + 0.01) == 0.0);

        SuperSolution frozen = sup;
        frozen.mu = frozen.rho = 0.0;
        frozen.theta = frozen.delta_mu = 0.0;
        CHECK(frozen.h_bar(50.0) == 0.4);

        RunControl ctrl = control(30.0, 200, 0.05);
        ctrl.keep_snapshots = true;
        const Trajectory traj = run(p, init, kTent, ctrl);
        const DominationReport rep = check_domination(sup, traj);
        CHECK(rep.dominated);
        CHECK(rep.samples_checked == static_cast<int>(traj.snapshots.size()));
        CHECK(rep.worst_h <= 0.0);
        CHECK(rep.worst_g <= 0.0);

        ctrl.keep_snapshots = false;
        CHECK_THROWS_AS(check_domination(sup, run(p, init, kTent, ctrl)), Error);
    }
}

TEST_CASE("super-solution hypotheses") {
    auto kind_of = [](const ModelParams& p, const InitialData& d, double h1) {
        try {
            (void)build_vanishing_supersolution(p, d, kTent, h1);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Io;
    };
    const InitialData init = cosine_initial_data(0.4, 0.1, 0.1, 200);
    ModelParams p = vanishing_params();
    p.a = 1.0;
    CHECK(kind_of(p, init, 0.0) == ErrorKind::Regime);
    p = vanishing_params();
    CHECK(kind_of(p, cosine_initial_data(0.6, 0.1, 0.1, 200), 0.0) == ErrorKind::Regime);
    CHECK(kind_of(p, init, 0.3) == ErrorKind::Regime);
    CHECK(kind_of(p, init, 0.9) == ErrorKind::Regime);
    p.d2 = 0.05;
    CHECK(kind_of(p, init, 0.0) == ErrorKind::Regime);
}

TEST_CASE("sweeps") {
    SweepPlan plan;
    plan.base = vanishing_params();
    plan.h0 = 0.3;
    plan.u0_amplitude = plan.v0_amplitude = 0.1;
    plan.run = control(200.0);

    SUBCASE("single cell") {
        const PhaseTable t = sweep(plan, 1);
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0].verdict == Verdict::Vanishing);
        CHECK(t.rows[0].error.empty());
    }
    SUBCASE("grid order, a >= d1 rows and determinism") {
        plan.a = {0.3, 1.0};
        plan.d2 = {1.0, 2.0};
        plan.run = control(20.0);
        const PhaseTable one = sweep(plan, 1);
        const PhaseTable many = sweep(plan, 4);
        REQUIRE(one.rows.size() == 4);
        CHECK(one.rows[0].a == 0.3);
        CHECK(one.rows[0].d2 == 1.0);
        CHECK(one.rows[1].d2 == 2.0);
        CHECK(one.rows[2].a == 1.0);
        for (int i : {2, 3}) {
            CHECK(one.rows[i].verdict == Verdict::Spreading);
            CHECK(one.rows[i].certificate == Certificate::ARateDominates);
        }
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(one.rows[i].verdict == many.rows[i].verdict);
            CHECK(one.rows[i].final_length == many.rows[i].final_length);
            CHECK(one.rows[i].sup_u == many.rows[i].sup_u);
        }
    }
    SUBCASE("failures stay in their row") {
        plan.a = {0.3, -1.0};
        const PhaseTable t = sweep(plan, 2);
        REQUIRE(t.rows.size() == 2);
        CHECK(t.rows[0].error.empty());
        CHECK_FALSE(t.rows[1].error.empty());
        CHECK(t.rows[1].verdict == Verdict::Undecided);
    }
    SUBCASE("budget axis") {
        plan.budget = {0.1, 0.2};
        plan.ray_mu = 0.25;
        plan.run = control(5.0);
        const PhaseTable t = sweep(plan, 0);
        REQUIRE(t.rows.size() == 2);
        CHECK(t.rows[1].mu == doctest::Approx(0.05));
        CHECK(t.rows[1].rho == doctest::Approx(0.15));
    }
}
