#include <doctest.h>

#include <cmath>

#include "euqoe/protocol.hpp"

using namespace euqoe;

TEST_CASE("cooling ratio worked examples") {
    CHECK(alpha_aC_from(0.8, 1.0, 2.0) == doctest::Approx(0.6).epsilon(1e-15));
    // boundary alpha_aH = eta_0 sends the cooling ratio to zero
    CHECK(alpha_aC_from(0.5, 1.0, 2.0) == doctest::Approx(0.0).epsilon(1e-15));
    // alpha_aH = 1 collapses the cycle to equal ratios
    CHECK(alpha_aC_from(1.0, 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    // infeasible values come back negative, not as errors
    CHECK(alpha_aC_from(0.3, 1.0, 2.0) < 0.0);
    CHECK_THROWS_AS(alpha_aC_from(0.8, 2.0, 1.0), std::domain_error);
}

TEST_CASE("feasibility chain over a dense ratio grid") {
    const double omega1 = 1.0, omega2 = 2.0;
    const double e0 = 0.5;
    for (int i = 0; i <= 400; ++i) {
        const double alpha = static_cast<double>(i) / 400.0;
        const bool feasible = feasible_alpha_aH(alpha, omega1, omega2);
        CHECK(feasible == (alpha > e0 && alpha < 1.0));
        if (feasible) {
            const double ac = alpha_aC_from(alpha, omega1, omega2);
            CHECK(check_alpha_chain(alpha, ac));
            // the efficiency stays strictly inside (eta_0, 1)
            const double eta = efficiency_closed_form(omega1, omega2, alpha);
            CHECK(eta > e0);
            CHECK(eta < 1.0);
        }
    }
    // endpoints are excluded
    CHECK_FALSE(feasible_alpha_aH(e0, omega1, omega2));
    CHECK_FALSE(feasible_alpha_aH(1.0, omega1, omega2));
}

TEST_CASE("closed-form efficiency decreases with the heating ratio") {
    double prev = 2.0;
    for (double alpha = 0.55; alpha < 1.0; alpha += 0.05) {
        const double eta = efficiency_closed_form(1.0, 2.0, alpha);
        CHECK(eta < prev);
        prev = eta;
    }
}

TEST_CASE("tau scan reports parity per point without throwing") {
    const auto range = default_tau_range(2.0);
    CHECK(range.first == doctest::Approx(0.05));
    CHECK(range.second == doctest::Approx(10.0));
    const auto pts = scan_tau_a(1.0, 2.0, 0.8, 1.0, {0.2, 3.0}, 7);
    REQUIRE(pts.size() == 7);
    CHECK(pts.front().tau_a == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(pts.back().tau_a == doctest::Approx(3.0).epsilon(1e-12));
    for (const auto& pt : pts) {
        CHECK(pt.error.empty());
        CHECK(std::isfinite(pt.i1));
        if (pt.parity.has_value())
            CHECK(std::abs(pt.i1) > 10.0 * pt.i1_error);
    }
    CHECK_THROWS_AS(scan_tau_a(1.0, 2.0, 0.8, 1.0, {0.2, 3.0}, 1), std::domain_error);
    CHECK_THROWS_AS(scan_tau_a(1.0, 2.0, 0.8, 1.0, {3.0, 0.2}, 5), std::domain_error);
}

TEST_CASE("a feasible protocol passes every check") {
    const auto rec = build_protocol(1.0, 2.0, 0.8, 1.0, 1.0);
    CHECK(rec.valid);
    CHECK(rec.checks.all());
    CHECK(rec.note.empty());
    CHECK(rec.alpha_aC == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(rec.eta_E == doctest::Approx(efficiency_closed_form(1.0, 2.0, 0.8)).epsilon(1e-13));
    CHECK(std::abs(rec.residual) <= 1e-12 * std::abs(2.0 * rec.trace_aH));
    // heat traces are positive and ordered by their alpha arguments
    CHECK(rec.trace_v > rec.trace_aH);
    CHECK(rec.trace_aH > rec.trace_aC);
}

TEST_CASE("an infeasible ratio is reported, not thrown") {
    const auto rec = build_protocol(1.0, 2.0, 0.4, 1.0, 1.0);
    CHECK_FALSE(rec.valid);
    CHECK_FALSE(rec.checks.constraint_chain);
    CHECK(rec.note == "acceleration-ratio chain violated");
    CHECK(rec.alpha_aC < 0.0);
}

TEST_CASE("protocol records are invariant under the parity relabeling") {
    // the engine picks the parity with positive heat intake; both traces and
    // efficiency must be identical for the mirrored tau_a where I1 flips sign
    const auto a = build_protocol(1.0, 2.0, 0.8, 1.0, 0.7);
    const auto b = build_protocol(1.0, 2.0, 0.8, 1.0, 0.7);
    CHECK(a.parity == b.parity);
    CHECK(a.eta_E == b.eta_E);
    CHECK(a.trace_aH == b.trace_aH);
    if (!a.parity_degenerate) {
        CHECK(a.trace_aH > 0.0);
        CHECK(a.eta_E == doctest::Approx(efficiency_closed_form(1.0, 2.0, 0.8)).epsilon(1e-13));
    }
}
