#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "euqoe/engine.hpp"

namespace euqoe {

struct ProtocolChecks {
    bool constraint_chain = false;
    bool positivity_v = false;
    bool positivity_aH = false;
    bool positivity_aC = false;
    bool conservation = false;
    bool eta_below_one = false;

    bool all() const {
        return constraint_chain && positivity_v && positivity_aH && positivity_aC &&
               conservation && eta_below_one;
    }
};

struct ProtocolRecord {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double alpha_aH = 0.0;
    double alpha_aC = 0.0;
    double tau_a = 0.0;
    EntangledParity parity = EntangledParity::symmetric;
    bool parity_degenerate = false;
    double i1 = 0.0;
    double i1_error = 0.0;
    double eta_E = 0.0;
    double trace_v = 0.0;
    double trace_aH = 0.0;
    double trace_aC = 0.0;
    double residual = 0.0;
    ProtocolChecks checks;
    bool valid = false;
    std::string note;
};

struct TauScanPoint {
    double tau_a = 0.0;
    double i1 = 0.0;
    double i1_error = 0.0;
    std::optional<EntangledParity> parity;  // unset when |I1| is inside noise
    std::string error;                      // nonempty on quadrature failure
};

// (alpha_aH omega2 - omega2 + omega1) / omega1; may be <= 0 for infeasible
// alpha_aH (a value, not an error).
double alpha_aC_from(double alpha_aH, double omega1, double omega2);

// strict chain 0 < eta_0 < alpha_aH < 1
bool feasible_alpha_aH(double alpha_aH, double omega1, double omega2);

// strict chain 0 < alpha_aC < alpha_aH
bool check_alpha_chain(double alpha_aH, double alpha_aC);

// default tau_a scan window, bracketing the oscillation and thermal scales
std::pair<double, double> default_tau_range(double omega2);

// I1 on a log-spaced tau_a grid with per-point parity verdicts; quadrature
// failures are recorded on the point, not thrown.
std::vector<TauScanPoint> scan_tau_a(double omega1, double omega2, double alpha_aH,
                                     double a_h2, std::pair<double, double> tau_range,
                                     std::size_t n_grid,
                                     Dimension dimension = Dimension::d1p1);

ProtocolRecord build_protocol(double omega1, double omega2, double alpha_aH,
                              double a_h2, double tau_a,
                              Dimension dimension = Dimension::d1p1);

}  // namespace euqoe
