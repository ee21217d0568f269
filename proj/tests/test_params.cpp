#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "flrwwave/params.hpp"

using namespace flrw;

TEST_CASE("equation-of-state mapping to (alpha, mu)") {
    FLRWParams f{3, 1.0, 1.0};
    const ModelParams m =
        flrw_to_model(f, 2.0, 0.01, 1.0, Nonlinearity::TimeDerivative);
    CHECK(m.alpha == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(m.mu == doctest::Approx(1.0).epsilon(1e-15));

    FLRWParams f2{2, 1.0, 1.0};
    const ModelParams m2 =
        flrw_to_model(f2, 2.0, 0.01, 1.0, Nonlinearity::TimeDerivative);
    CHECK(m2.alpha == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m2.mu == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("boundary equation of state maps exactly to alpha = 1, mu = n") {
    for (int n = 2; n <= 6; ++n) {
        FLRWParams f{n, 2.0 / n - 1.0, 1.0};
        const ModelParams m =
            flrw_to_model(f, 2.0, 0.01, 1.0, Nonlinearity::TimeDerivative);
        CHECK(m.alpha == 1.0);
        CHECK(m.mu == double(n));
        CHECK(classify_regime(f) == Regime::Boundary);
    }
}

TEST_CASE("regime classification matches the derived alpha") {
    for (int n = 2; n <= 6; ++n) {
        for (int i = 0; i <= 40; ++i) {
            const double w = std::min(1.0, -0.95 + i * (1.95 / 40.0));
            FLRWParams f{n, w, 1.0};
            const double alpha = 2.0 / (n * (1.0 + w));
            const Regime r = classify_regime(f);
            if (r == Regime::Accelerating) CHECK(alpha > 1.0 - 1e-14);
            if (r == Regime::Decelerating) CHECK(alpha < 1.0 + 1e-14);
        }
    }
}

TEST_CASE("scale factor") {
    FLRWParams a{3, 1.0, 1.0};
    CHECK(scale_factor(1.0, a) == doctest::Approx(1.0));
    CHECK(scale_factor(8.0, a) == doctest::Approx(2.0).epsilon(1e-14));
    FLRWParams b{2, 0.0, 2.0};
    CHECK(scale_factor(4.0, b) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK_THROWS_AS(scale_factor(0.0, a), std::invalid_argument);
}

TEST_CASE("light cone radius branches") {
    CHECK(lightcone_radius(1.0, 0.7) == 0.0);
    CHECK(lightcone_radius(std::exp(1.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lightcone_radius(10.0, 2.0) == doctest::Approx(0.9).epsilon(1e-14));
    // alpha = 0: exactly t - 1.
    for (double t : {1.0, 2.0, 7.5, 100.0})
        CHECK(lightcone_radius(t, 0.0) == t - 1.0);
    // nondecreasing in t; bounded by 1/(alpha-1) for alpha > 1.
    for (double alpha : {0.0, 0.5, 1.0, 1.5, 3.0}) {
        double prev = 0.0;
        for (double t = 1.0; t <= 50.0; t += 0.5) {
            const double a = lightcone_radius(t, alpha);
            CHECK(a >= prev);
            if (alpha > 1.0) CHECK(a <= 1.0 / (alpha - 1.0) + 1e-14);
            prev = a;
        }
    }
    CHECK_THROWS_AS(lightcone_radius(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("validation aggregates all violations") {
    ModelParams ok{3, 0.2, 0.5, 1.5, 0.01, 1.0, Nonlinearity::TimeDerivative};
    CHECK_NOTHROW(validate(ok));

    ModelParams bad = ok;
    bad.p = 1.0;
    bad.n = 0;
    bad.epsilon = 0.0;
    try {
        validate(bad);
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("p > 1") != std::string::npos);
        CHECK(msg.find("n >= 1") != std::string::npos);
        CHECK(msg.find("epsilon > 0") != std::string::npos);
    }

    ModelParams one_d = ok;
    one_d.n = 1;
    CHECK_NOTHROW(validate(one_d));
    CHECK_FALSE(in_theorem_scope(one_d));
    CHECK(in_theorem_scope(ok));
}

TEST_CASE("flrw validation rejects out-of-range w") {
    FLRWParams f{3, -1.0, 1.0};
    CHECK_THROWS_AS(validate_flrw(f), std::invalid_argument);
    f.w = 1.2;
    CHECK_THROWS_AS(validate_flrw(f), std::invalid_argument);
    f.w = 1.0;
    CHECK_NOTHROW(validate_flrw(f));
}

TEST_CASE("config parsing") {
    const std::string text =
        "# test configuration\n"
        "n = 3\n"
        "alpha = 0.25   # inline comment\n"
        "mu = 1.5\n"
        "p = 2\n"
        "epsilon = 0.1\n"
        "R = 2\n"
        "nonlinearity = grad\n"
        "dr = 0.005\n";
    const ParsedConfig cfg = parse_config_text(text);
    CHECK(cfg.model.n == 3);
    CHECK(cfg.model.alpha == 0.25);
    CHECK(cfg.model.mu == 1.5);
    CHECK(cfg.model.p == 2.0);
    CHECK(cfg.model.epsilon == 0.1);
    CHECK(cfg.model.R == 2.0);
    CHECK(cfg.model.nonlinearity == Nonlinearity::SpaceDerivative);
    CHECK(cfg.extra.at("dr") == "0.005");
    CHECK_FALSE(cfg.from_w);
}

TEST_CASE("config w key overrides alpha and mu") {
    const ParsedConfig cfg = parse_config_text(
        "n = 3\nw = 1\np = 1.5\nepsilon = 0.1\nR = 1\nalpha = 0.9\n");
    CHECK(cfg.from_w);
    CHECK(cfg.model.alpha == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(cfg.model.mu == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("config parse errors") {
    CHECK_THROWS(parse_config_text("n 3\n"));
    CHECK_THROWS(parse_config_text("p = abc\n"));
    CHECK_THROWS(parse_config_text("nonlinearity = bogus\n"));
    CHECK_THROWS(parse_config_text("p = 0.5\n"));  // validation failure
}
