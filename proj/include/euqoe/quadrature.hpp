#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace euqoe {

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
};

struct ComplexQuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double abs_error = 0.0;
    std::size_t evaluations = 0;
};

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& msg, QuadratureResult partial_result)
        : std::runtime_error(msg), partial(partial_result) {}
    QuadratureResult partial;
};

// Semi-infinite integrand description. decay_scale marks where the tail
// decay sets in; integration runs on [0, decay_scale] and is then extended
// by interval doubling until two consecutive extensions fall below the
// requested tolerance. singular_points force panel boundaries (removable
// singularities are assumed patched by the evaluator itself).
// max_panel_width caps initial panel size to resolve oscillations.
struct IntegrandSpec {
    std::function<double(double)> evaluator;
    std::vector<double> singular_points;
    double decay_scale = 1.0;
    double max_panel_width = 0.0;
};

// Adaptive Gauss-Kronrod 15(7) on a finite interval.
QuadratureResult integrate_interval(const std::function<double(double)>& f,
                                    double a, double b,
                                    double rel_tol, double abs_tol,
                                    double max_panel_width = 0.0,
                                    const std::vector<double>& split_points = {},
                                    std::size_t max_panels = 200000);

QuadratureResult integrate_semi_infinite(const IntegrandSpec& spec,
                                         double rel_tol, double abs_tol);

// Tensor-product adaptive Gauss-Kronrod over [lo,hi]^2 for complex-valued
// integrands (both trace channels carry phases).
ComplexQuadratureResult integrate_square(
    const std::function<std::complex<double>(double, double)>& f,
    double lo, double hi, double rel_tol, double abs_tol,
    double max_panel_width = 0.0, std::size_t max_panels = 400000);

// sin((k-omega) tau_a) sin(alpha (k-omega) tau_a) / (k-omega)^2 with the
// removable singularity at k = omega patched by its series.
double patched_sinc_pair(double k, double omega, double tau_a, double alpha);

}  // namespace euqoe
