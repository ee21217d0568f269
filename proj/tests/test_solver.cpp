#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flrwwave/solver.hpp"

using namespace flrw;

namespace {

ModelParams mk(int n, double alpha, double mu, double p, Nonlinearity nl,
               double eps = 0.01, double R = 1.0) {
    ModelParams m;
    m.n = n;
    m.alpha = alpha;
    m.mu = mu;
    m.p = p;
    m.epsilon = eps;
    m.R = R;
    m.nonlinearity = nl;
    return m;
}

SolverConfig minkowski_linear(double eps, double dr, double t_max) {
    SolverConfig cfg;
    cfg.model = mk(3, 0.0, 0.0, 2.0, Nonlinearity::TimeDerivative, eps);
    cfg.linear = true;
    cfg.dr = dr;
    cfg.t_max = t_max;
    return cfg;
}

double trapz_u1(double R, int steps = 4000) {
    // int_{R^3} u1 dx with u1 = 2 bump(r/R)^2 + bump(r/R), unit amplitude.
    double acc = 0.0;
    const double h = R / steps;
    for (int i = 0; i <= steps; ++i) {
        const double r = i * h;
        const double s = r / R;
        const double f = 2.0 * bump(s) * bump(s) + bump(s);
        const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
        acc += w * f * 4.0 * 3.14159265358979323846 * r * r * h;
    }
    return acc;
}

}  // namespace

TEST_CASE("bump profile") {
    CHECK(bump(0.0) == doctest::Approx(1.0));
    CHECK(bump(1.0) == 0.0);
    CHECK(bump(-1.2) == 0.0);
    CHECK(bump(0.5) > 0.0);
    CHECK(bump(0.5) == bump(-0.5));
}

TEST_CASE("initial data and validation") {
    SolverConfig cfg;
    cfg.model = mk(3, 1.0 / 3, 1.0, 1.5, Nonlinearity::TimeDerivative, 0.5);
    cfg.dr = 0.05;
    cfg.t_max = 2.0;
    const FieldState st = init(cfg);
    CHECK(st.t == 1.0);
    CHECK(st.u.size() == st.v.size());
    // u1 >= u0 >= 0 pointwise (p = 1.5 >= p_0 = 1.25 here).
    for (size_t i = 0; i < st.u.size(); ++i) {
        CHECK(st.u[i] >= 0.0);
        CHECK(st.v[i] >= st.u[i]);
    }
    // u1 = 0 with p >= p_0 violates the sign hypothesis.
    SolverConfig bad = cfg;
    bad.u1_zero = true;
    CHECK_THROWS_AS(init(bad), std::invalid_argument);
    // ... but is admitted below p_0 where the hypothesis relaxes.
    SolverConfig weak = cfg;
    weak.model.p = 1.2;  // p_0 = 1.25
    weak.u1_zero = true;
    CHECK_NOTHROW(init(weak));
    // Too small a user-provided box is rejected.
    SolverConfig tiny = cfg;
    tiny.r_max = 0.5;
    CHECK_THROWS_AS(init(tiny), std::invalid_argument);
}

TEST_CASE("linear evolution matches the d'Alembert reference") {
    SolverConfig cfg = minkowski_linear(0.5, 0.02, 2.0);
    const double order = convergence_order(cfg);
    CHECK(order >= 1.9);
    CHECK(order < 2.6);
}

TEST_CASE("linear runs scale exactly in the data amplitude") {
    SolverConfig a = minkowski_linear(0.25, 0.04, 3.0);
    SolverConfig b = minkowski_linear(0.5, 0.04, 3.0);
    const SimOutcome oa = run(a);
    const SimOutcome ob = run(b);
    CHECK_FALSE(oa.blew_up);
    CHECK_FALSE(ob.blew_up);
    REQUIRE(oa.series.size() == ob.series.size());
    for (size_t i = 0; i < oa.series.size(); ++i) {
        CHECK(oa.series[i].sup_v * 2.0 ==
              doctest::Approx(ob.series[i].sup_v).epsilon(1e-12));
        CHECK(oa.series[i].int_ut * 2.0 ==
              doctest::Approx(ob.series[i].int_ut).epsilon(1e-12));
    }
}

TEST_CASE("finite propagation speed in all three expansion regimes") {
    for (double alpha : {0.0, 1.0, 2.0}) {
        SolverConfig cfg;
        cfg.model = mk(3, alpha, 1.0, 2.0, Nonlinearity::TimeDerivative, 0.5);
        cfg.linear = true;
        cfg.dr = 0.0025;
        cfg.t_max = 3.0;
        const SimOutcome out = run(cfg);
        CHECK_FALSE(out.blew_up);
        CHECK(out.max_support_violation < 1e-10);
    }
}

TEST_CASE("conserved initial functional") {
    // At t = 1, int u_t dx = eps int u1 dx by construction.
    SolverConfig cfg;
    cfg.model = mk(3, 1.0 / 3, 1.0, 1.5, Nonlinearity::TimeDerivative, 0.5);
    cfg.dr = 0.005;
    cfg.t_max = 1.05;
    const FieldState st = init(cfg);
    const DiagRecord d = diagnostics(st, cfg);
    CHECK(d.t == 1.0);
    CHECK(d.int_ut == doctest::Approx(0.5 * trapz_u1(1.0)).epsilon(1e-3));
    CHECK(d.int_ut > 0.0);
}

TEST_CASE("zero data stays zero") {
    SolverConfig cfg;
    cfg.model = mk(3, 0.3, 1.0, 1.5, Nonlinearity::TimeDerivative, 1e-300);
    cfg.model.epsilon = 1e-300;  // effectively zero while passing validation
    cfg.dr = 0.05;
    cfg.t_max = 1.5;
    const SimOutcome out = run(cfg);
    CHECK_FALSE(out.blew_up);
    CHECK(out.max_sup_v <= 1e-290);
}

TEST_CASE("time-derivative blow-up run") {
    SolverConfig cfg;
    cfg.model = mk(3, 1.0 / 3, 1.0, 1.5, Nonlinearity::TimeDerivative, 0.5);
    cfg.dr = 0.02;
    cfg.t_max = 100.0;
    const SimOutcome out = run(cfg);
    REQUIRE(out.blew_up);
    CHECK(out.T_num > 1.0);
    CHECK(out.T_num < 100.0);
    CHECK(out.tnum_converged);
    CHECK(out.sensitivity_shift < 0.01);
    // F(t) = int u_t dx stays positive along the run (the proofs' functional).
    for (const auto& d : out.series) CHECK(d.int_ut > 0.0);
}

TEST_CASE("accelerated expansion freezes small data") {
    SolverConfig cfg;
    cfg.model = mk(3, 2.0, 1.0, 2.0, Nonlinearity::TimeDerivative, 1e-3);
    cfg.dr = 0.02;
    cfg.t_max = 50.0;
    const SimOutcome out = run(cfg);
    CHECK_FALSE(out.blew_up);
    CHECK(out.max_sup_v < 1.0);
}

TEST_CASE("space-derivative nonlinearity runs") {
    SolverConfig cfg;
    cfg.model = mk(3, 0.3, 1.0, 1.5, Nonlinearity::SpaceDerivative, 1.5);
    cfg.dr = 0.02;
    cfg.t_max = 60.0;
    const SimOutcome out = run(cfg);
    CHECK(out.max_sup_v > 0.0);
    // Large gradient data must drive growth of the functional.
    REQUIRE(out.series.size() > 2);
}
