#include "euqoe/protocol.hpp"

#include <cmath>

#include "euqoe/quadrature.hpp"

namespace euqoe {

double alpha_aC_from(double alpha_aH, double omega1, double omega2) {
    if (!(omega1 > 0.0) || !(omega1 < omega2))
        throw std::domain_error("alpha_aC_from: need 0 < omega1 < omega2");
    return (alpha_aH * omega2 - omega2 + omega1) / omega1;
}

bool feasible_alpha_aH(double alpha_aH, double omega1, double omega2) {
    const double e0 = eta0(omega1, omega2);
    return e0 > 0.0 && alpha_aH > e0 && alpha_aH < 1.0;
}

bool check_alpha_chain(double alpha_aH, double alpha_aC) {
    return alpha_aC > 0.0 && alpha_aC < alpha_aH;
}

std::pair<double, double> default_tau_range(double omega2) {
    if (!(omega2 > 0.0)) throw std::domain_error("default_tau_range: omega2 must be positive");
    return {0.1 / omega2, 20.0 / omega2};
}

std::vector<TauScanPoint> scan_tau_a(double omega1, double omega2, double alpha_aH,
                                     double a_h2, std::pair<double, double> tau_range,
                                     std::size_t n_grid, Dimension dimension) {
    if (!(tau_range.first > 0.0) || !(tau_range.second > tau_range.first))
        throw std::domain_error("scan_tau_a: tau_range must be positive and increasing");
    if (n_grid < 2) throw std::domain_error("scan_tau_a: n_grid must be at least 2");
    (void)eta0(omega1, omega2);

    const double log_lo = std::log(tau_range.first);
    const double step = (std::log(tau_range.second) - log_lo) /
                        static_cast<double>(n_grid - 1);
    std::vector<TauScanPoint> out(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) {
        TauScanPoint& pt = out[i];
        pt.tau_a = std::exp(log_lo + step * static_cast<double>(i));
        try {
            auto r = i1_spectral(dimension, alpha_aH, omega2, pt.tau_a, a_h2);
            pt.i1 = r.value;
            pt.i1_error = r.abs_error;
            if (std::abs(r.value) > 10.0 * r.abs_error)
                pt.parity = r.value > 0.0 ? EntangledParity::symmetric
                                          : EntangledParity::antisymmetric;
        } catch (const QuadratureError& err) {
            pt.i1 = err.partial.value;
            pt.i1_error = err.partial.abs_error;
            pt.error = err.what();
        }
    }
    return out;
}

ProtocolRecord build_protocol(double omega1, double omega2, double alpha_aH,
                              double a_h2, double tau_a, Dimension dimension) {
    ProtocolRecord rec;
    rec.omega1 = omega1;
    rec.omega2 = omega2;
    rec.alpha_aH = alpha_aH;
    rec.tau_a = tau_a;

    CycleConfig cfg;
    cfg.omega1 = omega1;
    cfg.omega2 = omega2;
    cfg.alpha_aH = alpha_aH;
    cfg.a_h2 = a_h2;
    cfg.tau_a = tau_a;
    cfg.dimension = dimension;
    cfg.validate();

    rec.alpha_aC = alpha_aC_from(alpha_aH, omega1, omega2);
    rec.checks.constraint_chain = feasible_alpha_aH(alpha_aH, omega1, omega2) &&
                                  check_alpha_chain(alpha_aH, rec.alpha_aC);

    CycleReport rep = run_cycle(cfg);
    rec.parity = rep.parity;
    rec.parity_degenerate = rep.parity_degenerate;
    rec.i1 = rep.i1;
    rec.i1_error = rep.i1_error;
    rec.eta_E = rep.eta_e;
    rec.trace_v = rep.trace_v;
    rec.trace_aH = rep.trace_aH;
    rec.trace_aC = rep.trace_aC;
    rec.residual = rep.residual;

    rec.checks.positivity_v = rep.trace_v > 0.0 && !rep.parity_degenerate;
    rec.checks.positivity_aH = rep.trace_aH > 0.0 && !rep.parity_degenerate;
    rec.checks.positivity_aC = rep.trace_aC > 0.0 && !rep.parity_degenerate;
    rec.checks.conservation =
        std::abs(rep.residual) <= 1e-12 * std::abs(rep.q2) && rep.q2 != 0.0;
    rec.checks.eta_below_one = std::isfinite(rep.eta_e) && rep.eta_e < 1.0;

    rec.valid = rec.checks.all();
    if (!rec.valid) {
        if (!rec.checks.constraint_chain)
            rec.note = "acceleration-ratio chain violated";
        else if (rec.parity_degenerate)
            rec.note = "I1 indistinguishable from zero at this tau_a";
        else if (!rec.checks.positivity_aH)
            rec.note = "no positive heat intake";
        else if (!rec.checks.conservation)
            rec.note = "conservation residual above tolerance";
        else
            rec.note = "efficiency bound violated";
    }
    return rec;
}

}  // namespace euqoe
