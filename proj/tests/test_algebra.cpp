#include <doctest.h>

#include <cmath>
#include <random>

#include "euqoe/algebra.hpp"
#include "euqoe/oracle.hpp"

using namespace euqoe;

namespace {

InitialState random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0), s(-1.0, 1.0);
    InitialState st;
    st.p = 0.5 * u(rng);
    cplx b1{s(rng), s(rng)}, b2{s(rng), s(rng)};
    const double n = std::sqrt(std::norm(b1) + std::norm(b2));
    st.b1 = b1 / n;
    st.b2 = b2 / n;
    return st;
}

}  // namespace

TEST_CASE("maximally entangled states and their density matrices") {
    for (auto parity : {EntangledParity::symmetric, EntangledParity::antisymmetric}) {
        const auto st = maximally_entangled(parity, 0.2);
        st.validate();
        const double sign = parity == EntangledParity::symmetric ? 1.0 : -1.0;
        CHECK((st.b1 * std::conj(st.b2)).real() == doctest::Approx(0.5 * sign).epsilon(1e-15));

        const Mat4 rho = initial_density(st);
        CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-15));
        Eigen::SelfAdjointEigenSolver<Mat4> es(rho);
        CHECK(es.eigenvalues().minCoeff() >= -1e-15);
    }
    CHECK_THROWS_AS(InitialState{-0.1}.validate(), std::domain_error);
    CHECK_THROWS_AS((InitialState{0.0, {1.0, 0.0}, {1.0, 0.0}}).validate(), std::domain_error);
}

TEST_CASE("h_alpha spectrum and the free-Hamiltonian trace") {
    const Mat4 h = h_alpha(0.7);
    CHECK(h(0, 0).real() == doctest::Approx(0.85));
    CHECK(h(1, 1).real() == doctest::Approx(0.15));
    CHECK(h(2, 2).real() == doctest::Approx(-0.15));
    CHECK(h(3, 3).real() == doctest::Approx(-0.85));
    CHECK(h.trace().real() == doctest::Approx(0.0));

    // excited-excited projector picks out the top level
    Mat4 rho = Mat4::Zero();
    rho(0, 0) = 1.0;
    CHECK(trace_rho_h(rho, 0.7) == doctest::Approx(0.85).epsilon(1e-15));

    // entangled one-excitation states sit at (1 - alpha')/2 vs (alpha' - 1)/2
    const auto sym = maximally_entangled(EntangledParity::symmetric);
    CHECK(trace_rho_h(initial_density(sym), 0.7) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(h_alpha(-0.2), std::domain_error);
}

TEST_CASE("monopole operators square to mu^2 and flip one excitation") {
    const double mu = 1.3;
    const Mat4 m1 = monopole_m1(0.37, 1.9, mu);
    const Mat4 m2 = monopole_m2(-1.1, 0.4, mu);
    CHECK((m1 * m1 - mu * mu * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m2 * m2 - mu * mu * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m1 - m1.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m2 - m2.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((m1 * m2 - m2 * m1).cwiseAbs().maxCoeff() < 1e-15);  // distinct detectors commute
    // detector 1 maps |g1 e2> (index 2) to |e1 e2> (index 0)
    CHECK(std::abs(m1(0, 2)) == doctest::Approx(mu));
    CHECK(std::abs(m1(0, 1)) == 0.0);
    CHECK(std::abs(m2(0, 1)) == doctest::Approx(mu));
}

TEST_CASE("closed-form channel traces reproduce the explicit matrix products") {
    std::mt19937 rng(20260823);
    std::uniform_real_distribution<double> u(0.1, 2.0), s(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        const double tp = s(rng), tpp = s(rng), tau_a = u(rng), a = u(rng);
        const double ap = u(rng), omega = u(rng), mu = u(rng);
        const InitialState st = random_state(rng);

        const auto prod = gamma_matrix_products(tp, tpp, tau_a, a, st, omega, mu);
        REQUIRE(prod.size() == 12);
        const Mat4 h = h_alpha(ap);
        auto tr = [&h](const Mat4& m) { return cplx((m * h).trace()); };
        auto trd = [&h](const Mat4& m) { return std::conj(cplx((m * h).trace())); };

        const cplx bare[6] = {
            tr(prod[1]) - trd(prod[9]),                                // g12_first
            tr(prod[5]) - tr(prod[10]),                                // g12_second
            tr(prod[2]) - trd(prod[10]),                               // g21_first
            tr(prod[6]) - tr(prod[9]),                                 // g21_second
            tr(prod[0]) + tr(prod[4]) - tr(prod[8]) - trd(prod[8]),    // g11
            tr(prod[3]) + tr(prod[7]) - tr(prod[11]) - trd(prod[11]),  // g22
        };
        const GammaChannel chs[6] = {GammaChannel::g12_first, GammaChannel::g12_second,
                                     GammaChannel::g21_first, GammaChannel::g21_second,
                                     GammaChannel::g11,       GammaChannel::g22};
        for (int i = 0; i < 6; ++i) {
            const cplx closed =
                gamma_trace_closed(chs[i], tp, tpp, tau_a, a, ap, st, omega, mu);
            const cplx expect = gamma_measure_factor(chs[i], a) * bare[i];
            CHECK(std::abs(closed - expect) < 1e-12);
        }
    }
}

TEST_CASE("channel traces depend on the times only through one combination") {
    // u = up tau' + upp tau'' per channel; shifting along the strip must not
    // change the trace (basis of the spectral-tail strip reduction).
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.2, 1.8), s(-1.0, 1.0);
    const double tau_a = 0.9, a = 0.65, ap = 1.2, omega = 1.4, mu = 0.8;
    const InitialState st = random_state(rng);
    const struct {
        GammaChannel ch;
        double up, upp;
    } geom[6] = {
        {GammaChannel::g12_first, 1.0, -a},  {GammaChannel::g12_second, -a, 1.0},
        {GammaChannel::g21_first, a, -1.0},  {GammaChannel::g21_second, -1.0, a},
        {GammaChannel::g11, 1.0, -1.0},      {GammaChannel::g22, a, -a},
    };
    for (const auto& g : geom) {
        for (int trial = 0; trial < 5; ++trial) {
            const double tp = s(rng), tpp = s(rng), shift = s(rng);
            const cplx base =
                gamma_trace_closed(g.ch, tp, tpp, tau_a, a, ap, st, omega, mu);
            // move (tau', tau'') keeping u fixed
            const cplx moved = gamma_trace_closed(
                g.ch, tp + shift * g.upp, tpp - shift * g.up, tau_a, a, ap, st, omega, mu);
            CHECK(std::abs(base - moved) < 1e-13);
        }
    }
}

TEST_CASE("parity flip conjugates the cross channels and fixes the same-detector ones") {
    const double tp = 0.3, tpp = -0.8, tau_a = 1.1, a = 0.7, ap = 0.9, omega = 1.2, mu = 1.0;
    const auto sym = maximally_entangled(EntangledParity::symmetric);
    const auto anti = maximally_entangled(EntangledParity::antisymmetric);
    for (auto ch : {GammaChannel::g12_first, GammaChannel::g12_second,
                    GammaChannel::g21_first, GammaChannel::g21_second}) {
        const cplx vs = gamma_trace_closed(ch, tp, tpp, tau_a, a, ap, sym, omega, mu);
        const cplx va = gamma_trace_closed(ch, tp, tpp, tau_a, a, ap, anti, omega, mu);
        CHECK(std::abs(vs + va) < 1e-14);  // b1 b2* flips sign
    }
    for (auto ch : {GammaChannel::g11, GammaChannel::g22}) {
        const cplx vs = gamma_trace_closed(ch, tp, tpp, tau_a, a, ap, sym, omega, mu);
        const cplx va = gamma_trace_closed(ch, tp, tpp, tau_a, a, ap, anti, omega, mu);
        CHECK(std::abs(vs - va) < 1e-14);
    }
}

TEST_CASE("trace_rho_h rejects malformed density matrices") {
    Mat4 bad = Mat4::Zero();
    bad(0, 1) = cplx{0.5, 0.0};  // not Hermitian
    CHECK_THROWS_AS(trace_rho_h(bad, 1.0), std::domain_error);
}
