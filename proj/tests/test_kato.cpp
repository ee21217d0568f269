#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "flrwwave/kato.hpp"

using namespace flrw;

namespace {

KatoProblem first_order_sample() {
    KatoProblem prob;
    prob.order = KatoOrder::FirstOrder;
    prob.p = 1.5;
    prob.a = 1.0;
    prob.b = 0.0;
    prob.c = 2.0;
    prob.q = 0.25;
    prob.r = 0.0;
    prob.mu = 0.5;
    prob.A0 = 1e-3;
    prob.A1 = 1.0;
    prob.R = 1.0;
    prob.T0 = 1.0;
    prob.T1 = 2.0;
    return prob;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = double(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

TEST_CASE("iteration exponent by order") {
    KatoProblem prob = first_order_sample();
    CHECK(exponent_M(prob) ==
          doctest::Approx(0.5 * 1.0 - 0.25 + 1.0).epsilon(1e-14));
    prob.order = KatoOrder::SecondOrder;
    CHECK(exponent_M(prob) ==
          doctest::Approx(0.5 * (0.0 - 1.0) - 0.25 + 2.0).epsilon(1e-14));
    prob.order = KatoOrder::SecondOrderLogQ;
    CHECK(exponent_M(prob) == doctest::Approx(0.5 * 1.0 + 2.0).epsilon(1e-14));
    prob.order = KatoOrder::SecondOrderLog;
    CHECK_THROWS_AS(exponent_M(prob), std::domain_error);
}

TEST_CASE("closed-form sequences match the recursion") {
    KatoProblem prob = first_order_sample();
    prob.b = 0.3;
    prob.r = 0.7;
    for (int j : {0, 1, 2, 5, 13, 30}) {
        const KatoIteration a = iterate(prob, j);
        const KatoIteration b = closed_form(prob, j);
        CHECK(a.a_j == doctest::Approx(b.a_j).epsilon(1e-12));
        CHECK(a.b_j == doctest::Approx(b.b_j).epsilon(1e-12));
        CHECK(a.c_j == doctest::Approx(b.c_j).epsilon(1e-12));
        CHECK(a.log_D_j == doctest::Approx(b.log_D_j).epsilon(1e-12));
    }
}

TEST_CASE("growth constant") {
    // c = 0, mu = 0, p = 2, q = 0, A0 = A1 = 1 gives B = 1 and E = -2 ln 2.
    KatoProblem prob;
    prob.order = KatoOrder::FirstOrder;
    prob.p = 2.0;
    prob.a = 0.0;
    prob.c = 0.0;
    prob.mu = 0.0;
    prob.q = 0.0;
    prob.A0 = 1.0;
    prob.A1 = 1.0;
    prob.R = 1.0;
    CHECK(growth_E(prob) == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-14));
    // Larger A0 shifts E by exactly ln A0.
    KatoProblem prob2 = prob;
    prob2.A0 = 10.0;
    CHECK(growth_E(prob2) - growth_E(prob) ==
          doctest::Approx(std::log(10.0)).epsilon(1e-13));
}

TEST_CASE("lifespan bound shapes") {
    KatoProblem prob = first_order_sample();
    const KatoBound b = lifespan_bound(prob);
    CHECK(b.kind == KatoBound::Kind::PowerLaw);
    CHECK(b.k == doctest::Approx(0.5 / 1.25).epsilon(1e-14));

    KatoProblem plog = prob;
    plog.b = 1.0;
    plog.r = 0.5;
    plog.T0 = 2.0;
    const KatoBound bl = lifespan_bound(plog);
    CHECK(bl.kind == KatoBound::Kind::ImplicitPowerLog);
    CHECK(bl.s == doctest::Approx(exponent_M(plog) / 0.5).epsilon(1e-13));
    CHECK(bl.l == doctest::Approx(1.0 + 0.5 / 0.5).epsilon(1e-14));
    CHECK(bl.m == 1.0);

    KatoProblem so = prob;
    so.order = KatoOrder::SecondOrder;
    so.a = 0.2;
    so.b = 1.5;
    const KatoBound bs = lifespan_bound(so);
    CHECK(bs.kind == KatoBound::Kind::PowerLaw);
    CHECK(bs.k == doctest::Approx(0.5 / exponent_M(so)).epsilon(1e-13));

    KatoProblem lg = prob;
    lg.order = KatoOrder::SecondOrderLog;
    lg.b = 1.0;
    lg.mu = 0.5;
    const KatoBound be = lifespan_bound(lg);
    CHECK(be.kind == KatoBound::Kind::Exponential);
    CHECK(be.rate == doctest::Approx(0.5 / 2.5).epsilon(1e-14));
    lg.mu = 2.0;
    CHECK(lifespan_bound(lg).rate == doctest::Approx(0.5 / 1.5).epsilon(1e-14));

    KatoProblem lq = prob;
    lq.order = KatoOrder::SecondOrderLogQ;
    lq.q = 0.0;
    const KatoBound bq = lifespan_bound(lq);
    CHECK(bq.kind == KatoBound::Kind::PowerLaw);
    CHECK(bq.k == doctest::Approx(0.5 / exponent_M(lq)).epsilon(1e-13));

    KatoProblem bad = prob;
    bad.a = 10.0;  // M <= 0
    CHECK_THROWS_AS(lifespan_bound(bad), std::domain_error);
}

TEST_CASE("divergence of the iteration bracket") {
    KatoProblem prob = first_order_sample();
    const DivergenceResult d = divergence_time(prob, 0.1);
    REQUIRE(d.found);
    CHECK(d.time > prob.T1 + 1.0);
    CHECK(bracket_value(prob, d.time) == doctest::Approx(0.1).epsilon(1e-8));
    // Monotone growth past the crossing.
    CHECK(bracket_value(prob, 2.0 * d.time) > 0.1);
    // With a tiny data constant the crossing moves out but stays finite.
    KatoProblem small = prob;
    small.A0 = 1e-12;
    const DivergenceResult ds = divergence_time(small, 0.1);
    REQUIRE(ds.found);
    CHECK(ds.time > d.time);
    KatoProblem second = prob;
    second.order = KatoOrder::SecondOrder;
    CHECK_THROWS_AS(divergence_time(second), std::domain_error);
}

TEST_CASE("ode oracle: separable blow-up at t = 2") {
    KatoProblem prob;
    prob.order = KatoOrder::FirstOrder;
    prob.p = 2.0;
    prob.mu = 0.0;
    prob.q = 0.0;
    prob.r = 0.0;
    prob.A1 = 1.0;
    prob.R = 1.0;
    prob.T0 = 1.0;
    // F' = F^2, F(1) = 1 has the exact solution F = 1/(2 - t).
    const OracleResult res = ode_oracle(prob, 1.0);
    REQUIRE(res.blew_up);
    CHECK(res.time == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("ode oracle: blow-up time scales like the predicted power of the data") {
    KatoProblem prob;
    prob.order = KatoOrder::FirstOrder;
    prob.p = 2.0;
    prob.mu = 0.0;
    prob.q = 0.5;
    prob.A1 = 1.0;
    prob.R = 1.0;
    prob.T0 = 1.0;
    prob.a = 0.0;
    prob.c = 0.0;
    const double M = exponent_M(prob);  // = 0.5
    const double expected = (prob.p - 1.0) / M;
    std::vector<double> lx, ly;
    for (double F0 : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const OracleResult res = ode_oracle(prob, F0, 0.0, 1e12);
        REQUIRE(res.blew_up);
        lx.push_back(std::log(1.0 / F0));
        ly.push_back(std::log(res.time));
    }
    const double slope = fit_slope(lx, ly);
    CHECK(std::abs(slope / expected - 1.0) < 0.10);
}

TEST_CASE("ode oracle: second order and argument checks") {
    KatoProblem prob;
    prob.order = KatoOrder::SecondOrder;
    prob.p = 2.0;
    prob.mu = 1.0;
    prob.q = 0.0;
    prob.A1 = 1.0;
    prob.R = 1.0;
    prob.T0 = 1.0;
    const OracleResult res = ode_oracle(prob, 0.1, 0.1, 1e6);
    CHECK(res.blew_up);
    CHECK_THROWS_AS(ode_oracle(prob, -1.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(ode_oracle(prob, 0.1, 0.0), std::domain_error);
    KatoProblem logw = prob;
    logw.order = KatoOrder::FirstOrder;
    logw.r = 1.0;
    logw.T0 = 1.0;  // log weight undefined at t = 1
    CHECK_THROWS_AS(ode_oracle(logw, 0.1), std::domain_error);
}
