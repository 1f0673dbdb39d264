#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace euqoe {

// Accelerations of the detector pair during a joint heating/cooling stage.
struct DetectorPairKinematics {
    double a1;        // observer (detector 1) proper acceleration
    double alpha_a;   // a1/a2

    double a2() const {
        if (!(alpha_a > 0.0))
            throw std::domain_error("DetectorPairKinematics: a2 undefined for alpha_a = 0");
        return a1 / alpha_a;
    }
};

// Spectral weight of a pulled-back Wightman function at frequency k. The
// full kernel is weight * [e^{-ik d_eta} e^{+exponent} + e^{+ik d_eta}
// e^{-exponent}]; the oscillatory time factors are supplied by the caller.
// Log-space fields keep the weight*e^{+exponent} product stable when both
// factors overflow/underflow individually.
struct ThermalKernel {
    double log_weight;
    double exponent;
    double log_weight_plus;  // log(weight) + exponent, computed stably

    double weight() const { return std::exp(log_weight); }
    double weight_plus() const { return std::exp(log_weight_plus); }
    double weight_minus() const { return std::exp(log_weight_plus - 2.0 * exponent); }
};

// Cross-correlator kernel in 1+1D: weight 1/(4 pi k sqrt(sinh(pi k/a1)
// sinh(pi k alpha/a1))), thermal exponent pi k (1+alpha)/(2 a1).
ThermalKernel g12_kernel_1p1(double k, const DetectorPairKinematics& kin);

// Same-detector kernel in 1+1D: weight 1/(4 pi k sinh(pi k/a1)), exponent
// pi k/a1.
ThermalKernel g11_kernel_1p1(double k, double a1);

// Modified Bessel function of the second kind with imaginary order,
// K_{i nu}(x), via the cosine integral representation (rotated onto a
// damped contour for large nu where the real-axis representation cancels
// catastrophically).
double bessel_k_imag(double nu, double x);

// e^{pi nu / 2} K_{i nu}(x); the scaling cancels against the thermal
// exponent in every kernel product, keeping 1+3D evaluations in range.
double bessel_k_imag_scaled(double nu, double x);

// 1+3D cross-correlator kernel at (omega_k, |k_p|): Bessel product times the
// 2/sqrt(a1 a2) and (2 pi)^-4 measure factors, with the azimuthal transverse
// integral pre-reduced to 2 pi kp_mag. Underflows for large omega_k/a1;
// prefer the scaled variant in quadrature loops.
double g_kernel_1p3(double omega_k, double kp_mag, const DetectorPairKinematics& kin);

// e^{+exponent} * g_kernel_1p3 with exponent pi omega_k (1+alpha)/(2 a1).
double g_kernel_1p3_scaled(double omega_k, double kp_mag,
                           const DetectorPairKinematics& kin);

struct TransverseWeight {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
};

// Integral of g_kernel_1p3_scaled over kp in [0, inf): the exponent-scaled
// spectral weight of the 1+3D correlator at frequency omega_k. The small-kp
// region oscillates in log(kp) and is integrated in that variable; the tail
// beyond the Bessel turning point is integrated linearly.
TransverseWeight transverse_weight_1p3(double omega_k,
                                       const DetectorPairKinematics& kin,
                                       double rel_tol = 1e-7);

// Lazily built Chebyshev surrogate of transverse_weight_1p3 over omega_k, for
// the outer spectral integrals that sample the weight thousands of times.
// Dyadic segments are fitted on first access and each fit is validated
// against direct evaluations; a failing segment is split.
class TransverseWeightTable {
  public:
    TransverseWeightTable(const DetectorPairKinematics& kin, double rel_tol = 1e-6);

    double value(double omega_k) const;
    // value and first two derivatives w.r.t. omega_k, from the fitted
    // Chebyshev coefficients; d must hold 3 doubles
    void derivs(double omega_k, double* d) const;
    std::size_t evaluations() const { return evaluations_; }

  private:
    struct Segment {
        double lo = 0.0;
        double hi = 0.0;
        std::vector<double> coef;  // Chebyshev coefficients on [lo, hi]
    };

    void build(double lo, double hi, int depth) const;
    const Segment* find(double omega_k) const;

    DetectorPairKinematics kin_;
    double rel_tol_;
    double base_;  // width of the first segment; later segments double
    mutable std::vector<Segment> segments_;
    mutable std::size_t evaluations_ = 0;
};

// Asymptotic tail integral_{k0}^inf table(k) [S(k+omega) - S(k-omega)] dk of
// the scaled cross-channel spectral integrand, where
// S(x) = sin(x tau) sin(alpha x tau) / x^2. The scaled weight grows like a
// power of k, so brute-force extension never converges; instead each
// oscillatory component cos((1 -+ alpha) tau x)/x^2 is expanded at the
// endpoint in inverse powers of its frequency. abs_error carries the first
// omitted term. Requires k0 well past omega and the saturation scale; the
// alpha -> 1 slow component falls back to a power-law estimate.
TransverseWeight cross_tail_1p3(const TransverseWeightTable& table, double k0,
                                double omega, double tau, double alpha);

}  // namespace euqoe
