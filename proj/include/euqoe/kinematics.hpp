#pragma once

#include <stdexcept>

namespace euqoe {

// Uniformly accelerated worldline, X^2 - T^2 = 1/a^2. Natural units
// (hbar = c = 1) everywhere in this library.
struct RindlerWorldline {
    double a;  // proper acceleration, > 0
};

struct WorldlinePoint {
    double t;
    double x;
};

// (T, X) = (sinh(a tau)/a, cosh(a tau)/a)
WorldlinePoint rindler_position(const RindlerWorldline& w, double tau);

// Proper duration of an acceleration stage that takes the detector from
// speed -v to +v: 2*arctanh(v)/a.
double accel_stage_duration(double a, double v);

// Proper-time ratio for the constant-velocity stages. Both detectors move
// with the same speed in the adiabatic stages, so v_rel = 0 and alpha_v = 1.
double alpha_v(double v_rel);

// Proper-time ratio tau_2/tau_1 = a1/a2 during joint acceleration stages.
// a1 = 0 encodes the unaccelerated-observer limit directly.
double alpha_a(double a1, double a2);

// Accelerations and common speed of the four cycle stages, with the derived
// proper-time ratios.
struct StagePlan {
    double v = 0.0;
    double a_h1 = 1.0;
    double a_h2 = 1.0;
    double a_c1 = 1.0;
    double a_c2 = 1.0;

    double alpha_ah() const { return alpha_a(a_h1, a_h2); }
    double alpha_ac() const { return alpha_a(a_c1, a_c2); }
};

}  // namespace euqoe
