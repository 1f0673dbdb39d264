#pragma once

#include <utility>
#include <vector>

#include "euqoe/algebra.hpp"
#include "euqoe/engine.hpp"

namespace euqoe {

// Brute-force trace evaluation from the raw second-order series: spectral
// variable outermost, double time integrals numeric, bypassing the analytic
// sinc reductions used by engine.
struct OracleConfig {
    CycleConfig cycle;
    double spectral_rel = 2e-5;   // outer spectral integral, relative
    double spectral_abs = 1e-12;  // outer spectral integral, absolute
    double time_tol = 1e-6;       // inner double time integrals, relative
    double k_2d = 0.0;            // tensor-grid/strip-reduction switch; 0 = auto
    double ir_cutoff_frac = 1e-6;

    void validate() const;
};

struct TraceReport {
    double value = 0.0;
    double abs_error = 0.0;
    double analytic = 0.0;       // engine's reduced-form value, same inputs
    double rel_deviation = 0.0;  // |value - analytic| / max(|analytic|, tiny)
    double imag_residual = 0.0;  // largest imaginary part left by the time integrals
    std::size_t evaluations = 0;
};

TraceReport delta_rho_trace_numeric(const OracleConfig& cfg, double alpha_prime);

// At fixed spectral point k: tensor-product numeric time integral of the
// summed channel integrands vs the analytically reduced per-k density.
// Returns (numeric, analytic).
std::pair<double, double> inner_time_integral_check(double k, const OracleConfig& cfg,
                                                    double alpha_prime);

// The twelve explicit operator products entering the second-order
// commutators, by direct 4x4 multiplication. Order: the four M M rho, the
// four rho M M, the four M rho M.
std::vector<Mat4> gamma_matrix_products(double tau1p, double tau1pp, double tau_a,
                                        double alpha_a, const InitialState& state,
                                        double omega, double mu);

}  // namespace euqoe
