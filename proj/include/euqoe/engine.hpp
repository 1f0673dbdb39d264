#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "euqoe/algebra.hpp"
#include "euqoe/kinematics.hpp"

namespace euqoe {

enum class Dimension { d1p1, d1p3 };

struct EngineTolerances {
    double rel = 1e-8;
    double abs = 1e-12;
};

struct I1Result {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
};

// eta_0 = 1 - omega1/omega2
double eta0(double omega1, double omega2);

// eta_E = eta_0 * 2/(1 + alpha_aH), the maximally entangled closed form.
double efficiency_closed_form(double omega1, double omega2, double alpha_aH);

// The spectral integral controlling every Tr(delta rho h) trace for the
// maximally entangled initial state. Parameterized by the second detector's
// acceleration a_h2 so the alpha_aH -> 0 limit stays evaluable
// (a_h1 = alpha_aH * a_h2); at alpha_aH = 0 the integral vanishes
// identically and 0 is returned exactly.
I1Result i1_1p1(double alpha_aH, double omega2, double tau_a, double a_h2,
                double mu = 1.0, const EngineTolerances& tol = {});

// 1+3D counterpart with the Bessel-product transverse weight (azimuthal
// integral pre-reduced); same sinc-pair bracket in omega_k.
I1Result i1_1p3(double alpha_aH, double omega2, double tau_a, double a_h2,
                double mu = 1.0, const EngineTolerances& tol = {1e-5, 1e-10});

I1Result i1_spectral(Dimension dim, double alpha_aH, double omega2, double tau_a,
                     double a_h2, double mu = 1.0,
                     std::optional<EngineTolerances> tol = std::nullopt);

// Tr(delta rho^H h_alpha') = +-2 (1+alpha') I1; + for the symmetric state.
double trace_delta_rho_h(double alpha_prime, double i1, EntangledParity parity);

struct GeneralTraceResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    bool ir_sensitive = false;  // same-detector channel shifted >10% under cutoff doubling
};

// Full-generality trace for arbitrary (p, b1, b2): cross-detector channel
// plus the coth-weighted same-detector channel. The latter is infrared
// divergent in 1+1D whenever its coefficients are nonzero; ir_cutoff_frac
// sets k_min = ir_cutoff_frac * a_h1.
GeneralTraceResult trace_delta_rho_h_general(
    const InitialState& state, double alpha_a, double alpha_prime,
    double omega, double tau_a, double a_h2, double mu, Dimension dim,
    double ir_cutoff_frac = 1e-6, const EngineTolerances& tol = {});

// Stage works and heats. Traces are passed in so one I1 evaluation can feed
// every stage.
double work_stage1(double omega1, double omega2, double trace_rho0_hv);
double work_stage3(double omega1, double omega2, double trace_rho0_hv,
                   double trace_drho_hv);
double work_total(double omega1, double omega2, double trace_drho_hv);
double heat_in(double omega2, double trace_drho_haH);
double heat_out(double omega1, double trace_drho_haC);
double heat_total(double q2, double q4);

// omega2 Tr(drho h_aH) - omega1 Tr(drho h_aC) - (omega2-omega1) Tr(drho h_v)
double conservation_residual(double omega1, double omega2, double trace_v,
                             double trace_aH, double trace_aC);

// eta_E = eta_0 * trace_v / trace_aH; throws if the heat-in trace is not
// positive (no engine operation).
double efficiency(double trace_v, double trace_aH, double omega1, double omega2);

struct CycleConfig {
    double omega1 = 1.0;
    double omega2 = 2.0;
    double alpha_aH = 0.8;
    double a_h2 = 1.0;   // scale of the heating stage accelerations
    double tau_a = 1.0;  // half-duration of the heating interaction window
    double mu = 1.0;
    double p = 0.0;
    std::optional<EntangledParity> parity;  // unset: selected by the sign of I1
    Dimension dimension = Dimension::d1p1;
    std::optional<EngineTolerances> tol;  // unset: per-dimension default

    EngineTolerances effective_tol() const {
        if (tol) return *tol;
        return dimension == Dimension::d1p1 ? EngineTolerances{}
                                            : EngineTolerances{1e-5, 1e-10};
    }

    double alpha_aC() const;  // from the trace-matching condition
    double a_h1() const { return alpha_aH * a_h2; }
    double v() const { return std::tanh(a_h1() * tau_a); }
    void validate() const;
};

struct CycleReport {
    double i1 = 0.0;
    double i1_error = 0.0;
    EntangledParity parity = EntangledParity::symmetric;
    bool parity_degenerate = false;  // |I1| below noise, no sign verdict
    double alpha_aC = 0.0;
    double trace_v = 0.0;
    double trace_aH = 0.0;
    double trace_aC = 0.0;
    double w1 = 0.0;
    double w3 = 0.0;
    double w_total = 0.0;
    double q2 = 0.0;
    double q4 = 0.0;
    double q_total = 0.0;
    double residual = 0.0;
    double eta_0 = 0.0;
    double eta_e = 0.0;
    double eta_e_closed = 0.0;
    bool valid = false;
    std::string invalid_reason;
    std::size_t evaluations = 0;
};

// Evaluates one full cycle for the maximally entangled configuration; the
// efficiency uses the factorized trace ratio (1+alpha_v)/(1+alpha_aH) so it
// stays defined in the alpha_aH -> 0 limit where I1 itself vanishes.
CycleReport run_cycle(const CycleConfig& config);

}  // namespace euqoe
