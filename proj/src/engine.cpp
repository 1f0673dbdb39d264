#include "euqoe/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "euqoe/quadrature.hpp"
#include "euqoe/wightman.hpp"

namespace euqoe {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_stage_params(double alpha_a, double omega2, double tau_a, double a_h2,
                        const char* where) {
    if (!(alpha_a >= 0.0) || !(alpha_a <= 1.0))
        throw std::domain_error(std::string(where) + ": alpha_a must lie in [0, 1]");
    if (!(omega2 > 0.0)) throw std::domain_error(std::string(where) + ": omega2 must be positive");
    if (!(tau_a > 0.0)) throw std::domain_error(std::string(where) + ": tau_a must be positive");
    if (!(a_h2 > 0.0)) throw std::domain_error(std::string(where) + ": a_h2 must be positive");
}

// Bare cross-detector spectral integral X: I1 = mu^2 cos(omega (alpha-1) tau_a) X.
QuadratureResult cross_spectral_1p1(double alpha, double omega, double tau_a,
                                    double a_h2, const EngineTolerances& tol) {
    const double a1 = alpha * a_h2;
    const DetectorPairKinematics kin{a1, alpha};
    IntegrandSpec spec;
    spec.evaluator = [=](double k) {
        const auto ker = g12_kernel_1p1(k, kin);
        const double sat = -std::expm1(-2.0 * ker.exponent);
        const double sp = patched_sinc_pair(k, -omega, tau_a, alpha);
        const double sm = patched_sinc_pair(k, omega, tau_a, alpha);
        return 2.0 * sat * ker.weight_plus() * (sp - sm);
    };
    spec.singular_points = {omega};
    spec.decay_scale = std::max({50.0 * a1, 50.0 * omega, 100.0 / tau_a});
    spec.max_panel_width = kPi / (tau_a * (1.0 + alpha));
    return integrate_semi_infinite(spec, tol.rel, tol.abs);
}

// The scaled 1+3D weight grows like a power of k, so the spectral integral
// converges only through the sinc oscillation and brute-force extension never
// terminates. Integrate a finite head and close with the endpoint-asymptotic
// tail; the cutoff grows (by the tail's own power law) until the tail error
// fits the budget.
QuadratureResult cross_spectral_1p3(double alpha, double omega, double tau_a,
                                    double a_h2, const EngineTolerances& tol) {
    const double a1 = alpha * a_h2;
    const DetectorPairKinematics kin{a1, alpha};
    const TransverseWeightTable table(kin, std::min(tol.rel / 10.0, 1e-6));
    auto f = [&](double w) {
        const double e2 = kPi * w * (1.0 + alpha) / a1;
        const double sat = -std::expm1(-e2);
        const double sp = patched_sinc_pair(w, -omega, tau_a, alpha);
        const double sm = patched_sinc_pair(w, omega, tau_a, alpha);
        return 2.0 * sat * table.value(w) * (sp - sm);
    };
    const double cap = kPi / (tau_a * (1.0 + alpha));
    const double beta_m = (1.0 - alpha) * tau_a;
    double k_cut = std::max({2.0 * omega, omega + 20.0 / tau_a,
                             12.0 * a1 / (1.0 + alpha),
                             beta_m > 0.0 ? omega + 8.0 / beta_m : 0.0});
    auto r = integrate_interval(f, 0.0, k_cut, tol.rel, tol.abs, cap, {omega});
    for (int iter = 0;; ++iter) {
        auto tail = cross_tail_1p3(table, k_cut, omega, tau_a, alpha);
        const double budget =
            std::max(tol.abs, 0.5 * tol.rel * std::abs(r.value)) / 2.0;
        if (2.0 * tail.abs_error <= budget || iter == 4) {
            r.value += 2.0 * tail.value;
            r.abs_error += 2.0 * tail.abs_error;
            break;
        }
        // tail error falls ~ k^{-10/3}; jump straight to the needed cutoff
        const double grow = std::pow(2.0 * tail.abs_error / budget, 0.3) * 1.4;
        const double k_next = k_cut * std::min(std::max(grow, 1.3), 6.0);
        auto seg = integrate_interval(f, k_cut, k_next, tol.rel, tol.abs, cap, {});
        r.value += seg.value;
        r.abs_error += seg.abs_error;
        r.evaluations += seg.evaluations;
        k_cut = k_next;
    }
    r.evaluations += table.evaluations();
    return r;
}

QuadratureResult cross_spectral(Dimension dim, double alpha, double omega,
                                double tau_a, double a_h2,
                                const EngineTolerances& tol) {
    return dim == Dimension::d1p1 ? cross_spectral_1p1(alpha, omega, tau_a, a_h2, tol)
                                  : cross_spectral_1p3(alpha, omega, tau_a, a_h2, tol);
}

I1Result i1_from_cross(Dimension dim, double alpha_aH, double omega2, double tau_a,
                       double a_h2, double mu, const EngineTolerances& tol) {
    check_stage_params(alpha_aH, omega2, tau_a, a_h2, "i1");
    if (alpha_aH == 0.0) return {};  // detector 1 inertial: no cross channel
    auto r = cross_spectral(dim, alpha_aH, omega2, tau_a, a_h2, tol);
    const double pref = mu * mu * std::cos(omega2 * (alpha_aH - 1.0) * tau_a);
    return {pref * r.value, std::abs(pref) * r.abs_error, r.evaluations};
}

}  // namespace

double eta0(double omega1, double omega2) {
    if (!(omega1 > 0.0) || !(omega2 > 0.0))
        throw std::domain_error("eta0: frequencies must be positive");
    return 1.0 - omega1 / omega2;
}

double efficiency_closed_form(double omega1, double omega2, double alpha_aH) {
    if (!(alpha_aH >= 0.0))
        throw std::domain_error("efficiency_closed_form: alpha_aH must be non-negative");
    return eta0(omega1, omega2) * 2.0 / (1.0 + alpha_aH);
}

I1Result i1_1p1(double alpha_aH, double omega2, double tau_a, double a_h2,
                double mu, const EngineTolerances& tol) {
    return i1_from_cross(Dimension::d1p1, alpha_aH, omega2, tau_a, a_h2, mu, tol);
}

I1Result i1_1p3(double alpha_aH, double omega2, double tau_a, double a_h2,
                double mu, const EngineTolerances& tol) {
    return i1_from_cross(Dimension::d1p3, alpha_aH, omega2, tau_a, a_h2, mu, tol);
}

I1Result i1_spectral(Dimension dim, double alpha_aH, double omega2, double tau_a,
                     double a_h2, double mu, std::optional<EngineTolerances> tol) {
    const EngineTolerances t = tol ? *tol
                                   : (dim == Dimension::d1p1 ? EngineTolerances{}
                                                             : EngineTolerances{1e-5, 1e-10});
    return i1_from_cross(dim, alpha_aH, omega2, tau_a, a_h2, mu, t);
}

double trace_delta_rho_h(double alpha_prime, double i1, EntangledParity parity) {
    const double sign = parity == EntangledParity::symmetric ? 1.0 : -1.0;
    return sign * 2.0 * (1.0 + alpha_prime) * i1;
}

namespace {

// Same-detector spectral weight wp + wm at frequency k; a1-scale kernel
// (the detector-2 channel is pre-rescaled onto it by k -> k/alpha).
double same_detector_weight(double k, double a1, Dimension dim,
                            const TransverseWeightTable* table) {
    if (dim == Dimension::d1p1) {
        const auto ker = g11_kernel_1p1(k, a1);
        return ker.weight_plus() * (1.0 + std::exp(-2.0 * ker.exponent));
    }
    return table->value(k) * (1.0 + std::exp(-2.0 * kPi * k / a1));
}

QuadratureResult same_detector_integral(double k_min, double c1, double c2,
                                        double alpha, double omega, double tau_a,
                                        double a1, Dimension dim,
                                        const EngineTolerances& tol,
                                        std::size_t* inner_evals) {
    std::optional<TransverseWeightTable> table;
    if (dim == Dimension::d1p3)
        table.emplace(DetectorPairKinematics{a1, 1.0}, tol.rel / 10.0);
    IntegrandSpec spec;
    spec.evaluator = [=, &table](double t) {
        const double k = k_min + t;
        const double w = same_detector_weight(k, a1, dim, table ? &*table : nullptr);
        double bracket = c1 * (patched_sinc_pair(k, -omega, tau_a, 1.0) +
                               patched_sinc_pair(k, omega, tau_a, 1.0));
        if (c2 != 0.0 && alpha > 0.0) {
            const double wa = alpha * omega;
            bracket += alpha * alpha * c2 *
                       (patched_sinc_pair(k, -wa, tau_a, 1.0) +
                        patched_sinc_pair(k, wa, tau_a, 1.0));
        }
        return w * bracket;
    };
    spec.singular_points = {omega - k_min, alpha * omega - k_min};
    spec.decay_scale = std::max({50.0 * a1, 50.0 * omega, 100.0 / tau_a});
    if (dim == Dimension::d1p3)
        spec.decay_scale = std::max({10.0 * omega, 10.0 * a1, 40.0 / tau_a});
    spec.max_panel_width = kPi / (2.0 * tau_a);
    auto r = integrate_semi_infinite(spec, tol.rel, tol.abs);
    if (table) *inner_evals += table->evaluations();
    return r;
}

}  // namespace

GeneralTraceResult trace_delta_rho_h_general(
    const InitialState& state, double alpha_a, double alpha_prime,
    double omega, double tau_a, double a_h2, double mu, Dimension dim,
    double ir_cutoff_frac, const EngineTolerances& tol) {
    check_stage_params(alpha_a, omega, tau_a, a_h2, "trace_delta_rho_h_general");
    state.validate();
    if (!(ir_cutoff_frac > 0.0))
        throw std::domain_error("trace_delta_rho_h_general: ir_cutoff_frac must be positive");
    const double a1 = alpha_a * a_h2;
    const double q = state.q();
    const double mu2 = mu * mu;

    GeneralTraceResult out;

    // Cross-detector channel: 2 mu^2 q (1+alpha') B X with
    // B = 2 Re(b1 b2* e^{i omega (alpha-1) tau_a}).
    const std::complex<double> phase =
        std::exp(std::complex<double>(0.0, omega * (alpha_a - 1.0) * tau_a));
    const double b_factor = 2.0 * std::real(state.b1 * std::conj(state.b2) * phase);
    const double coef_cross = 2.0 * mu2 * q * (1.0 + alpha_prime) * b_factor;
    if (coef_cross != 0.0 && alpha_a > 0.0) {
        auto x = cross_spectral(dim, alpha_a, omega, tau_a, a_h2, tol);
        out.value += coef_cross * x.value;
        out.abs_error += std::abs(coef_cross) * x.abs_error;
        out.evaluations += x.evaluations;
    }

    // Same-detector channels. c1 weighs the detector-1 commutator, c2 the
    // detector-2 one (rescaled onto the a1 kernel); infrared divergent in
    // 1+1D, so integrate from k_min and flag sensitivity to its doubling.
    const double bb = std::norm(state.b1) - std::norm(state.b2);
    const double c1 = state.p + q * bb;
    const double c2raw = state.p - q * bb;
    const double c2 = alpha_prime * c2raw;
    if (std::abs(c1) > 1e-15 || std::abs(c2) > 1e-15) {
        const double k_min = ir_cutoff_frac * (a1 > 0.0 ? a1 : a_h2);
        std::size_t inner_evals = 0;
        auto j = same_detector_integral(k_min, c1, c2, alpha_a, omega, tau_a,
                                        a1 > 0.0 ? a1 : a_h2, dim, tol, &inner_evals);
        auto j2 = same_detector_integral(2.0 * k_min, c1, c2, alpha_a, omega, tau_a,
                                         a1 > 0.0 ? a1 : a_h2, dim, tol, &inner_evals);
        out.ir_sensitive =
            std::abs(j2.value - j.value) > 0.1 * std::abs(j.value);
        out.value += -4.0 * mu2 * j.value;
        out.abs_error += 4.0 * mu2 * j.abs_error;
        out.evaluations += j.evaluations + j2.evaluations + inner_evals;
    }
    return out;
}

double work_stage1(double omega1, double omega2, double trace_rho0_hv) {
    return (omega2 - omega1) * trace_rho0_hv;
}

double work_stage3(double omega1, double omega2, double trace_rho0_hv,
                   double trace_drho_hv) {
    return (omega1 - omega2) * (trace_rho0_hv + trace_drho_hv);
}

double work_total(double omega1, double omega2, double trace_drho_hv) {
    return (omega1 - omega2) * trace_drho_hv;
}

double heat_in(double omega2, double trace_drho_haH) { return omega2 * trace_drho_haH; }

double heat_out(double omega1, double trace_drho_haC) { return -omega1 * trace_drho_haC; }

double heat_total(double q2, double q4) { return q2 + q4; }

double conservation_residual(double omega1, double omega2, double trace_v,
                             double trace_aH, double trace_aC) {
    return omega2 * trace_aH - omega1 * trace_aC - (omega2 - omega1) * trace_v;
}

double efficiency(double trace_v, double trace_aH, double omega1, double omega2) {
    if (!(trace_aH > 0.0))
        throw std::domain_error("efficiency: heat-in trace must be positive");
    return eta0(omega1, omega2) * trace_v / trace_aH;
}

double CycleConfig::alpha_aC() const {
    return (alpha_aH * omega2 - omega2 + omega1) / omega1;
}

void CycleConfig::validate() const {
    if (!(omega1 > 0.0) || !(omega2 > 0.0))
        throw std::domain_error("CycleConfig: frequencies must be positive");
    if (!(omega1 < omega2))
        throw std::domain_error("CycleConfig: need omega1 < omega2");
    if (!(alpha_aH >= 0.0) || !(alpha_aH <= 1.0))
        throw std::domain_error("CycleConfig: alpha_aH must lie in [0, 1]");
    if (!(a_h2 > 0.0)) throw std::domain_error("CycleConfig: a_h2 must be positive");
    if (!(tau_a > 0.0)) throw std::domain_error("CycleConfig: tau_a must be positive");
    if (!(p >= 0.0) || !(p <= 1.0)) throw std::domain_error("CycleConfig: p must lie in [0, 1]");
}

CycleReport run_cycle(const CycleConfig& config) {
    config.validate();
    CycleReport rep;
    rep.eta_0 = eta0(config.omega1, config.omega2);
    rep.eta_e_closed = efficiency_closed_form(config.omega1, config.omega2, config.alpha_aH);
    rep.alpha_aC = config.alpha_aC();
    const double alpha_v = 1.0;  // adiabatic stages: both detectors share one velocity

    auto i1 = i1_spectral(config.dimension, config.alpha_aH, config.omega2,
                          config.tau_a, config.a_h2, config.mu, config.tol);
    const EngineTolerances gtol = config.effective_tol();
    rep.i1 = i1.value;
    rep.i1_error = i1.abs_error;
    rep.evaluations += i1.evaluations;
    rep.parity_degenerate = std::abs(i1.value) <= 10.0 * i1.abs_error;
    rep.parity = config.parity.value_or(i1.value >= 0.0 ? EntangledParity::symmetric
                                                        : EntangledParity::antisymmetric);

    if (config.p == 0.0) {
        rep.trace_v = trace_delta_rho_h(alpha_v, i1.value, rep.parity);
        rep.trace_aH = trace_delta_rho_h(config.alpha_aH, i1.value, rep.parity);
        rep.trace_aC = trace_delta_rho_h(rep.alpha_aC, i1.value, rep.parity);
        // trace ratio factorizes, so the efficiency survives I1 -> 0
        const double sign = rep.parity == EntangledParity::symmetric ? 1.0 : -1.0;
        rep.eta_e = (sign * i1.value >= 0.0 || rep.parity_degenerate)
                        ? rep.eta_0 * (1.0 + alpha_v) / (1.0 + config.alpha_aH)
                        : std::numeric_limits<double>::quiet_NaN();
    } else {
        const auto state = maximally_entangled(
            config.parity.value_or(rep.parity), config.p);
        auto tv = trace_delta_rho_h_general(state, config.alpha_aH, alpha_v,
                                            config.omega2, config.tau_a, config.a_h2,
                                            config.mu, config.dimension, 1e-6, gtol);
        auto th = trace_delta_rho_h_general(state, config.alpha_aH, config.alpha_aH,
                                            config.omega2, config.tau_a, config.a_h2,
                                            config.mu, config.dimension, 1e-6, gtol);
        auto tc = trace_delta_rho_h_general(state, config.alpha_aH, rep.alpha_aC,
                                            config.omega2, config.tau_a, config.a_h2,
                                            config.mu, config.dimension, 1e-6, gtol);
        rep.trace_v = tv.value;
        rep.trace_aH = th.value;
        rep.trace_aC = tc.value;
        rep.evaluations += tv.evaluations + th.evaluations + tc.evaluations;
        rep.eta_e = rep.trace_aH > 0.0
                        ? efficiency(rep.trace_v, rep.trace_aH, config.omega1, config.omega2)
                        : std::numeric_limits<double>::quiet_NaN();
    }

    const auto rho0 = initial_density(maximally_entangled(rep.parity, config.p));
    const double t0v = trace_rho_h(rho0, alpha_v);
    rep.w1 = work_stage1(config.omega1, config.omega2, t0v);
    rep.w3 = work_stage3(config.omega1, config.omega2, t0v, rep.trace_v);
    rep.w_total = work_total(config.omega1, config.omega2, rep.trace_v);
    rep.q2 = heat_in(config.omega2, rep.trace_aH);
    rep.q4 = heat_out(config.omega1, rep.trace_aC);
    rep.q_total = heat_total(rep.q2, rep.q4);
    rep.residual = conservation_residual(config.omega1, config.omega2, rep.trace_v,
                                         rep.trace_aH, rep.trace_aC);

    rep.valid = true;
    if (!(rep.q2 > 0.0) && !rep.parity_degenerate) {
        rep.valid = false;
        rep.invalid_reason = "no positive heat intake during the hot stage";
    } else if (!std::isfinite(rep.eta_e)) {
        rep.valid = false;
        rep.invalid_reason = "efficiency undefined for this configuration";
    } else if (rep.alpha_aC <= 0.0) {
        rep.valid = false;
        rep.invalid_reason = "cooling-stage acceleration ratio out of range";
    } else if (rep.alpha_aC >= config.alpha_aH) {
        rep.valid = false;
        rep.invalid_reason = "cooling stage not colder than heating stage";
    }
    return rep;
}

}  // namespace euqoe
