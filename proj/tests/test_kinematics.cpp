#include <doctest.h>

#include <cmath>

#include "euqoe/kinematics.hpp"

using namespace euqoe;

TEST_CASE("rindler worldline stays on its hyperbola") {
    const RindlerWorldline w{1.7};
    // x^2 - t^2 cancels catastrophically for large |a tau|; keep the window
    // where the identity is testable in double precision
    for (double tau : {-3.0, -0.5, 0.0, 0.25, 2.0, 3.0}) {
        const auto p = rindler_position(w, tau);
        CHECK(p.x * p.x - p.t * p.t == doctest::Approx(1.0 / (w.a * w.a)).epsilon(1e-9));
    }
}

TEST_CASE("rindler worldline speed is tanh(a tau)") {
    const RindlerWorldline w{0.8};
    const double tau = 1.3;
    const double h = 1e-6;
    const auto pm = rindler_position(w, tau - h);
    const auto pp = rindler_position(w, tau + h);
    const double v = (pp.x - pm.x) / (pp.t - pm.t);
    CHECK(v == doctest::Approx(std::tanh(w.a * tau)).epsilon(1e-8));
}

TEST_CASE("acceleration stage duration covers -v to +v") {
    const double a = 2.0, v = 0.6;
    const double dur = accel_stage_duration(a, v);
    CHECK(dur == doctest::Approx(2.0 * std::atanh(v) / a).epsilon(1e-15));
    // speed at tau = dur/2 starting from rest midpoint is v
    CHECK(std::tanh(a * dur / 2.0) == doctest::Approx(v).epsilon(1e-15));
    CHECK(accel_stage_duration(a, 0.0) == 0.0);
}

TEST_CASE("proper-time ratios") {
    CHECK(alpha_v(0.0) == 1.0);
    CHECK(alpha_v(0.6) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(alpha_a(0.5, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(alpha_a(0.0, 2.0) == 0.0);  // unaccelerated-observer limit

    StagePlan plan;
    plan.a_h1 = 0.8;
    plan.a_h2 = 1.0;
    plan.a_c1 = 0.3;
    plan.a_c2 = 1.5;
    CHECK(plan.alpha_ah() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(plan.alpha_ac() == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("kinematics domain errors") {
    CHECK_THROWS_AS(rindler_position({0.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(rindler_position({-1.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(accel_stage_duration(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(accel_stage_duration(-1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(alpha_v(1.0), std::domain_error);
    CHECK_THROWS_AS(alpha_a(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(alpha_a(-0.1, 1.0), std::domain_error);
}
