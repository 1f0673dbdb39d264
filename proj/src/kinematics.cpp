#include "euqoe/kinematics.hpp"

#include <cmath>

namespace euqoe {

WorldlinePoint rindler_position(const RindlerWorldline& w, double tau) {
    if (!(w.a > 0.0) || !std::isfinite(w.a))
        throw std::domain_error("rindler_position: acceleration must be positive");
    return {std::sinh(w.a * tau) / w.a, std::cosh(w.a * tau) / w.a};
}

double accel_stage_duration(double a, double v) {
    if (!(a > 0.0)) throw std::domain_error("accel_stage_duration: a must be positive");
    if (!(v >= 0.0 && v < 1.0))
        throw std::domain_error("accel_stage_duration: need 0 <= v < 1");
    return 2.0 * std::atanh(v) / a;
}

double alpha_v(double v_rel) {
    if (!(std::abs(v_rel) < 1.0))
        throw std::domain_error("alpha_v: |v_rel| must be < 1");
    return std::sqrt(1.0 - v_rel * v_rel);
}

double alpha_a(double a1, double a2) {
    if (!(a2 > 0.0)) throw std::domain_error("alpha_a: a2 must be positive");
    if (a1 < 0.0) throw std::domain_error("alpha_a: a1 must be non-negative");
    return a1 / a2;
}

}  // namespace euqoe
