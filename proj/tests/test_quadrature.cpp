#include <doctest.h>

#include <cmath>
#include <complex>

#include "euqoe/quadrature.hpp"

using namespace euqoe;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("interval rule is exact on smooth polynomials") {
    auto r = integrate_interval([](double x) { return x * x * x - 2.0 * x + 1.0; },
                                -1.0, 3.0, 1e-12, 1e-14);
    // antiderivative x^4/4 - x^2 + x over [-1, 3]
    CHECK(r.value == doctest::Approx(16.0).epsilon(1e-13));
    CHECK(r.abs_error <= 1e-12 * 16.0 + 1e-13);
}

TEST_CASE("interval rule resolves oscillation under a panel cap") {
    const double w = 37.0;
    auto r = integrate_interval([w](double x) { return std::sin(w * x); },
                                0.0, 5.0, 1e-11, 1e-14, kPi / w);
    const double exact = (1.0 - std::cos(5.0 * w)) / w;
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("interval error estimate bounds the true error") {
    auto f = [](double x) { return std::exp(-x) * std::cos(7.0 * x); };
    const double exact = (1.0 - std::exp(-4.0) * (std::cos(28.0) - 7.0 * std::sin(28.0))) / 50.0;
    for (double rel : {1e-4, 1e-7, 1e-10}) {
        auto r = integrate_interval(f, 0.0, 4.0, rel, 1e-300);
        CHECK(std::abs(r.value - exact) <= std::max(r.abs_error, 1e-15));
        CHECK(r.abs_error <= rel * std::abs(r.value));
    }
}

TEST_CASE("interval split points do not change the value") {
    auto f = [](double x) { return std::sqrt(std::abs(x - 0.3)); };
    auto plain = integrate_interval(f, 0.0, 1.0, 1e-10, 1e-14);
    auto split = integrate_interval(f, 0.0, 1.0, 1e-10, 1e-14, 0.0, {0.3});
    CHECK(plain.value == doctest::Approx(split.value).epsilon(1e-9));
    // the mandatory panel edges can cost extra evaluations; they must not
    // cost more than a small multiple
    CHECK(split.evaluations <= 2 * plain.evaluations);
}

TEST_CASE("interval rule reports budget exhaustion with a partial result") {
    auto f = [](double x) { return std::sin(200.0 * x); };
    CHECK_THROWS_AS(integrate_interval(f, 0.0, 10.0, 1e-12, 1e-300, 0.0, {}, 8),
                    QuadratureError);
    try {
        integrate_interval(f, 0.0, 10.0, 1e-12, 1e-300, 0.0, {}, 8);
    } catch (const QuadratureError& e) {
        CHECK(std::isfinite(e.partial.value));
        CHECK(e.partial.abs_error > 0.0);
    }
}

TEST_CASE("semi-infinite integration extends past the decay scale") {
    IntegrandSpec spec;
    spec.evaluator = [](double x) { return std::exp(-x / 3.0); };
    spec.decay_scale = 1.0;  // deliberately short
    auto r = integrate_semi_infinite(spec, 1e-10, 1e-12);
    CHECK(r.value == doctest::Approx(3.0).epsilon(1e-9));

    IntegrandSpec osc;
    osc.evaluator = [](double x) { return std::exp(-x) * std::cos(5.0 * x); };
    osc.decay_scale = 2.0;
    osc.max_panel_width = kPi / 5.0;
    auto ro = integrate_semi_infinite(osc, 1e-10, 1e-13);
    CHECK(ro.value == doctest::Approx(1.0 / 26.0).epsilon(1e-9));
}

TEST_CASE("square rule matches a separable complex product") {
    const std::complex<double> i{0.0, 1.0};
    auto f = [i](double x, double y) { return std::exp(i * (3.0 * x + 2.0 * y)); };
    auto r = integrate_square(f, -1.0, 1.0, 1e-11, 1e-13, 0.5);
    const double sx = 2.0 * std::sin(3.0) / 3.0;
    const double sy = 2.0 * std::sin(2.0) / 2.0;
    CHECK(r.value.real() == doctest::Approx(sx * sy).epsilon(1e-10));
    CHECK(std::abs(r.value.imag()) < 1e-10);
}

TEST_CASE("square rule refines a peaked integrand adaptively") {
    auto f = [](double x, double y) {
        return std::complex<double>(std::exp(-50.0 * (x * x + y * y)), 0.0);
    };
    auto r = integrate_square(f, -1.0, 1.0, 1e-9, 1e-12);
    CHECK(r.value.real() == doctest::Approx(kPi / 50.0).epsilon(1e-8));
}

TEST_CASE("patched sinc pair is smooth through its removable singularity") {
    const double omega = 1.3, tau = 2.1, alpha = 0.7;
    CHECK(patched_sinc_pair(omega, omega, tau, alpha) ==
          doctest::Approx(alpha * tau * tau).epsilon(1e-14));
    // series patch joins the direct formula continuously
    for (double eps : {3e-6, 1e-5, 1e-4}) {
        const double direct = std::sin(eps * tau) * std::sin(alpha * eps * tau) / (eps * eps);
        CHECK(patched_sinc_pair(omega + eps, omega, tau, alpha) ==
              doctest::Approx(direct).epsilon(1e-9));
        CHECK(patched_sinc_pair(omega - eps, omega, tau, alpha) ==
              doctest::Approx(direct).epsilon(1e-9));
    }
    // generic point against the explicit formula
    const double k = 2.9;
    CHECK(patched_sinc_pair(k, omega, tau, alpha) ==
          doctest::Approx(std::sin((k - omega) * tau) * std::sin(alpha * (k - omega) * tau) /
                          ((k - omega) * (k - omega)))
              .epsilon(1e-14));
    // even under (k - omega) -> -(k - omega) jointly with alpha sign
    CHECK(patched_sinc_pair(0.4, omega, tau, alpha) ==
          doctest::Approx(patched_sinc_pair(2.2, omega, tau, alpha)).epsilon(1e-12));
}
