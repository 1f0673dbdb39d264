#include "euqoe/algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace euqoe {

namespace {
constexpr double kTol = 1e-12;
const cplx kI{0.0, 1.0};
}  // namespace

void InitialState::validate() const {
    if (!(p >= 0.0 && p <= 1.0) || !std::isfinite(p))
        throw std::domain_error("InitialState: p must lie in [0,1]");
    const double n = std::norm(b1) + std::norm(b2);
    if (std::abs(n - 1.0) > kTol)
        throw std::domain_error("InitialState: |b1|^2 + |b2|^2 must equal 1");
}

InitialState maximally_entangled(EntangledParity parity, double p) {
    const double r = 1.0 / std::sqrt(2.0);
    InitialState s;
    s.p = p;
    s.b1 = cplx{r, 0.0};
    s.b2 = (parity == EntangledParity::symmetric) ? cplx{r, 0.0} : cplx{-r, 0.0};
    return s;
}

Mat4 h_alpha(double alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0)
        throw std::domain_error("h_alpha: alpha must be finite and non-negative");
    Mat4 h = Mat4::Zero();
    h(0, 0) = 0.5 * (1.0 + alpha);
    h(1, 1) = 0.5 * (1.0 - alpha);
    h(2, 2) = 0.5 * (-1.0 + alpha);
    h(3, 3) = 0.5 * (-1.0 - alpha);
    return h;
}

Mat4 monopole_m1(double delta_tau, double omega, double mu) {
    if (!std::isfinite(delta_tau) || !std::isfinite(omega) || !std::isfinite(mu))
        throw std::domain_error("monopole_m1: non-finite argument");
    const cplx ph = mu * std::exp(kI * omega * delta_tau);
    Mat4 m = Mat4::Zero();
    m(0, 2) = ph;
    m(1, 3) = ph;
    m(2, 0) = std::conj(ph);
    m(3, 1) = std::conj(ph);
    return m;
}

Mat4 monopole_m2(double delta_tau, double omega, double mu) {
    if (!std::isfinite(delta_tau) || !std::isfinite(omega) || !std::isfinite(mu))
        throw std::domain_error("monopole_m2: non-finite argument");
    const cplx ph = mu * std::exp(kI * omega * delta_tau);
    Mat4 m = Mat4::Zero();
    m(0, 1) = ph;
    m(2, 3) = ph;
    m(1, 0) = std::conj(ph);
    m(3, 2) = std::conj(ph);
    return m;
}

Mat4 initial_density(const InitialState& state) {
    state.validate();
    const double q = state.q();
    Mat4 rho = Mat4::Zero();
    rho(0, 0) = state.p;
    rho(1, 1) = q * std::norm(state.b1);
    rho(1, 2) = q * state.b1 * std::conj(state.b2);
    rho(2, 1) = q * std::conj(state.b1) * state.b2;
    rho(2, 2) = q * std::norm(state.b2);
    return rho;
}

double trace_rho_h(const Mat4& rho, double alpha_prime) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kTol)
        throw std::domain_error("trace_rho_h: rho is not Hermitian");
    const cplx tr = (rho * h_alpha(alpha_prime)).trace();
    if (std::abs(tr.imag()) > kTol)
        throw std::domain_error("trace_rho_h: imaginary trace residue");
    return tr.real();
}

double gamma_measure_factor(GammaChannel which, double alpha_a) {
    switch (which) {
        case GammaChannel::g11: return 2.0;
        case GammaChannel::g22: return 2.0 * alpha_a * alpha_a;
        default: return 2.0 * alpha_a;
    }
}

cplx gamma_trace_closed(GammaChannel which, double tau1p, double tau1pp,
                        double tau_a, double alpha_a, double alpha_prime,
                        const InitialState& state, double omega, double mu) {
    state.validate();
    const double q = state.q();
    const double mu2 = mu * mu;
    const cplx b12 = state.b1 * std::conj(state.b2);  // b1 b2*
    const cplx b21 = std::conj(b12);
    const double d1p = tau1p + tau_a;    // detector-1 offsets
    const double d1pp = tau1pp + tau_a;
    // detector 2 runs on tau_2 = alpha_a tau_1, interaction from -tau_b with
    // tau_b = alpha_a tau_a, so its offset is alpha_a * (tau_1 + tau_a)
    const double a = alpha_a;
    const double ap = alpha_prime;

    switch (which) {
        case GammaChannel::g12_first: {
            const cplx e = std::exp(kI * omega * (d1p - a * d1pp));
            return 2.0 * q * mu2 * a * (b21 * e - b12 * std::conj(e));
        }
        case GammaChannel::g12_second: {
            const cplx e = std::exp(-kI * omega * (a * d1p - d1pp));
            return 2.0 * q * mu2 * ap * a * (b21 * e - b12 * std::conj(e));
        }
        case GammaChannel::g21_first: {
            const cplx e = std::exp(kI * omega * (a * d1p - d1pp));
            return 2.0 * q * mu2 * ap * a * (b12 * e - b21 * std::conj(e));
        }
        case GammaChannel::g21_second: {
            const cplx e = std::exp(-kI * omega * (d1p - a * d1pp));
            return 2.0 * q * mu2 * a * (b12 * e - b21 * std::conj(e));
        }
        case GammaChannel::g11: {
            const double c = state.p + q * (std::norm(state.b1) - std::norm(state.b2));
            return 4.0 * mu2 * std::cos(omega * (tau1p - tau1pp)) * c;
        }
        case GammaChannel::g22: {
            const double c = state.p + q * (std::norm(state.b2) - std::norm(state.b1));
            return 4.0 * mu2 * ap * a * a * std::cos(omega * a * (tau1p - tau1pp)) * c;
        }
    }
    throw std::invalid_argument("gamma_trace_closed: unknown channel");
}

}  // namespace euqoe
