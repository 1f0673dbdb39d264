#include "euqoe/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "euqoe/quadrature.hpp"
#include "euqoe/wightman.hpp"

namespace euqoe {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cplx kI{0.0, 1.0};

enum KernelId { kCross = 0, kSame1 = 1, kSame2 = 2 };

// u = up*tau' + upp*tau''; both the closed-form trace and the correlator
// phase of each channel depend on the times through u alone.
struct ChannelGeom {
    GammaChannel ch;
    double up;
    double upp;
    KernelId kernel;
};

std::vector<ChannelGeom> channel_table(double a) {
    return {
        {GammaChannel::g12_first, 1.0, -a, kCross},
        {GammaChannel::g12_second, -a, 1.0, kCross},
        {GammaChannel::g21_first, a, -1.0, kCross},
        {GammaChannel::g21_second, -1.0, a, kCross},
        {GammaChannel::g11, 1.0, -1.0, kSame1},
        {GammaChannel::g22, a, -a, kSame2},
    };
}

double channel_coef_bound(const ChannelGeom& ch, double a, double ap,
                          const InitialState& state, double mu) {
    const double mu2 = mu * mu;
    const double q = state.q();
    const double cross = 2.0 * q * mu2 * a * 2.0 * std::abs(state.b1 * std::conj(state.b2));
    const double bb = std::norm(state.b1) - std::norm(state.b2);
    switch (ch.ch) {
        case GammaChannel::g12_first:
        case GammaChannel::g21_second: return cross;
        case GammaChannel::g12_second:
        case GammaChannel::g21_first: return cross * std::abs(ap);
        case GammaChannel::g11: return 4.0 * mu2 * std::abs(state.p + q * bb);
        case GammaChannel::g22:
            return 4.0 * mu2 * std::abs(ap) * a * a * std::abs(state.p - q * bb);
    }
    return 0.0;
}

// Spectral weights (w_plus, w_minus) per kernel at frequency k.
struct KernelWeights {
    double wp[3] = {0.0, 0.0, 0.0};
    double wm[3] = {0.0, 0.0, 0.0};
    std::size_t evaluations = 0;
};

struct TransverseTables {
    std::optional<TransverseWeightTable> cross, same1, same2;

    std::size_t evaluations() const {
        std::size_t n = 0;
        if (cross) n += cross->evaluations();
        if (same1) n += same1->evaluations();
        if (same2) n += same2->evaluations();
        return n;
    }
};

KernelWeights kernel_weights(double k, double a1, double a2, double alpha,
                             Dimension dim, const bool (&active)[3],
                             const TransverseTables& tables) {
    KernelWeights w;
    if (dim == Dimension::d1p1) {
        if (active[kCross]) {
            const auto ker = g12_kernel_1p1(k, DetectorPairKinematics{a1, alpha});
            w.wp[kCross] = ker.weight_plus();
            w.wm[kCross] = ker.weight_minus();
        }
        if (active[kSame1]) {
            const auto ker = g11_kernel_1p1(k, a1);
            w.wp[kSame1] = ker.weight_plus();
            w.wm[kSame1] = ker.weight_minus();
        }
        if (active[kSame2]) {
            const auto ker = g11_kernel_1p1(k, a2);
            w.wp[kSame2] = ker.weight_plus();
            w.wm[kSame2] = ker.weight_minus();
        }
        return w;
    }
    if (active[kCross]) {
        w.wp[kCross] = tables.cross->value(k);
        w.wm[kCross] = w.wp[kCross] * std::exp(-kPi * k * (1.0 + alpha) / a1);
    }
    if (active[kSame1]) {
        w.wp[kSame1] = tables.same1->value(k);
        w.wm[kSame1] = w.wp[kSame1] * std::exp(-2.0 * kPi * k / a1);
    }
    if (active[kSame2]) {
        w.wp[kSame2] = tables.same2->value(k);
        w.wm[kSame2] = w.wp[kSame2] * std::exp(-2.0 * kPi * k / a2);
    }
    return w;
}

// overlap length in tau'' of the strip {up*tau' + upp*tau'' = u} inside the
// square [-tau,tau]^2, including the 1/|up| Jacobian of du dtau''
double strip_weight(double u, double up, double upp, double tau) {
    // tau' = (u - upp*tau'') / up must lie in [-tau, tau]
    const double c = -upp / up;
    double lo = -tau, hi = tau;  // bounds on tau'' from tau' range
    if (c > 0.0) {
        lo = std::max(lo, (-tau - u / up) / c);
        hi = std::min(hi, (tau - u / up) / c);
    } else if (c < 0.0) {
        lo = std::max(lo, (tau - u / up) / c);
        hi = std::min(hi, (-tau - u / up) / c);
    } else {
        if (std::abs(u / up) > tau) return 0.0;
    }
    return std::max(0.0, hi - lo) / std::abs(up);
}

struct OracleContext {
    double omega, tau_a, alpha, a1, a2, mu, alpha_prime;
    InitialState state;
    Dimension dim;
    double time_tol;
    bool active[3] = {false, false, false};
    std::vector<ChannelGeom> channels;  // active channels only
    double coef_scale = 0.0;            // magnitude bound for abs tolerances
    TransverseTables tables;
};

OracleContext make_context(const OracleConfig& cfg, double alpha_prime) {
    cfg.validate();
    const CycleConfig& c = cfg.cycle;
    if (!(c.alpha_aH > 0.0))
        throw std::domain_error("oracle: alpha_aH must be positive (detector 1 accelerated)");
    OracleContext ctx;
    ctx.omega = c.omega2;
    ctx.tau_a = c.tau_a;
    ctx.alpha = c.alpha_aH;
    ctx.a1 = c.a_h1();
    ctx.a2 = c.a_h2;
    ctx.mu = c.mu;
    ctx.alpha_prime = alpha_prime;
    ctx.state = maximally_entangled(c.parity.value_or(EntangledParity::symmetric), c.p);
    ctx.dim = c.dimension;
    ctx.time_tol = cfg.time_tol;
    for (const auto& ch : channel_table(ctx.alpha)) {
        const double bound = channel_coef_bound(ch, ctx.alpha, alpha_prime, ctx.state, ctx.mu);
        if (bound < 1e-15) continue;
        ctx.channels.push_back(ch);
        ctx.active[ch.kernel] = true;
        ctx.coef_scale += bound;
    }
    if (ctx.dim == Dimension::d1p3) {
        if (ctx.active[kCross])
            ctx.tables.cross.emplace(DetectorPairKinematics{ctx.a1, ctx.alpha});
        if (ctx.active[kSame1])
            ctx.tables.same1.emplace(DetectorPairKinematics{ctx.a1, 1.0});
        if (ctx.active[kSame2])
            ctx.tables.same2.emplace(DetectorPairKinematics{ctx.a2, 1.0});
    }
    return ctx;
}

// Tensor-product numeric double time integral of the summed channel
// integrands at fixed spectral point k.
std::complex<double> inner_square(const OracleContext& ctx, double k,
                                  const KernelWeights& w, std::size_t* evals) {
    auto f = [&](double tp, double tpp) {
        cplx val{0.0, 0.0};
        for (const auto& ch : ctx.channels) {
            const cplx t = gamma_trace_closed(ch.ch, tp, tpp, ctx.tau_a, ctx.alpha,
                                              ctx.alpha_prime, ctx.state, ctx.omega, ctx.mu);
            const double u = ch.up * tp + ch.upp * tpp;
            val += t * (w.wp[ch.kernel] * std::exp(-kI * k * u) +
                        w.wm[ch.kernel] * std::exp(kI * k * u));
        }
        return val;
    };
    const double wmax = *std::max_element(std::begin(w.wp), std::end(w.wp)) +
                        *std::max_element(std::begin(w.wm), std::end(w.wm));
    const double abs_tol =
        ctx.time_tol * ctx.coef_scale * wmax * 4.0 * ctx.tau_a * ctx.tau_a + 1e-300;
    const double cap = 2.0 * kPi / (ctx.omega + k);
    auto r = integrate_square(f, -ctx.tau_a, ctx.tau_a, ctx.time_tol, abs_tol, cap);
    *evals += r.evaluations;
    return r.value;
}

// Same integral via the exact strip reduction: every channel integrand
// depends on the times only through u, so the square collapses to 1D with
// the geometric overlap weight. Used for the fast-phase spectral tail.
std::complex<double> inner_strip(const OracleContext& ctx, double k,
                                 const KernelWeights& w, std::size_t* evals) {
    cplx total{0.0, 0.0};
    for (const auto& ch : ctx.channels) {
        const double span = (std::abs(ch.up) + std::abs(ch.upp)) * ctx.tau_a;
        auto f = [&](double u) {
            const cplx t = gamma_trace_closed(ch.ch, u / ch.up, 0.0, ctx.tau_a, ctx.alpha,
                                              ctx.alpha_prime, ctx.state, ctx.omega, ctx.mu);
            return t * (w.wp[ch.kernel] * std::exp(-kI * k * u) +
                        w.wm[ch.kernel] * std::exp(kI * k * u)) *
                   strip_weight(u, ch.up, ch.upp, ctx.tau_a);
        };
        const double wch = w.wp[ch.kernel] + w.wm[ch.kernel];
        const double abs_tol =
            0.25 * ctx.time_tol * ctx.coef_scale * wch * 4.0 * ctx.tau_a * ctx.tau_a + 1e-300;
        const double cap = 2.0 * kPi / (ctx.omega + k);
        auto re = integrate_interval([&](double u) { return f(u).real(); }, -span, span,
                                     ctx.time_tol, abs_tol, cap, {0.0});
        auto im = integrate_interval([&](double u) { return f(u).imag(); }, -span, span,
                                     ctx.time_tol, abs_tol, cap, {0.0});
        total += cplx{re.value, im.value};
        *evals += re.evaluations + im.evaluations;
    }
    return total;
}

double auto_k_2d(const OracleContext& ctx) {
    return ctx.omega + 10.0 / ctx.tau_a + 2.0 * std::max(ctx.a1, ctx.a2);
}

// Analytically reduced per-k spectral density matching inner_square.
double inner_analytic(const OracleContext& ctx, double k, const KernelWeights& w) {
    const double mu2 = ctx.mu * ctx.mu;
    const double q = ctx.state.q();
    const double ap = ctx.alpha_prime;
    const double a = ctx.alpha;
    double val = 0.0;
    if (ctx.active[kCross]) {
        const cplx phase = std::exp(kI * ctx.omega * (a - 1.0) * ctx.tau_a);
        const double b_factor = 2.0 * std::real(ctx.state.b1 * std::conj(ctx.state.b2) * phase);
        const double sat_wp = w.wp[kCross] - w.wm[kCross];  // (1 - e^{-2E}) w_plus
        const double sp = patched_sinc_pair(k, -ctx.omega, ctx.tau_a, a);
        const double sm = patched_sinc_pair(k, ctx.omega, ctx.tau_a, a);
        val += -8.0 * mu2 * q * (1.0 + ap) * b_factor * sat_wp * (sp - sm);
    }
    const double bb = std::norm(ctx.state.b1) - std::norm(ctx.state.b2);
    if (ctx.active[kSame1]) {
        const double c1 = ctx.state.p + q * bb;
        const double s2 = patched_sinc_pair(k, -ctx.omega, ctx.tau_a, 1.0) +
                          patched_sinc_pair(k, ctx.omega, ctx.tau_a, 1.0);
        val += 8.0 * mu2 * c1 * (w.wp[kSame1] + w.wm[kSame1]) * s2;
    }
    if (ctx.active[kSame2]) {
        const double c2 = ctx.state.p - q * bb;
        const double s2 = patched_sinc_pair(a * k, -a * ctx.omega, ctx.tau_a, 1.0) +
                          patched_sinc_pair(a * k, a * ctx.omega, ctx.tau_a, 1.0);
        val += 8.0 * mu2 * ap * a * a * c2 * (w.wp[kSame2] + w.wm[kSame2]) * s2;
    }
    return val;
}

}  // namespace

void OracleConfig::validate() const {
    cycle.validate();
    if (!(spectral_rel > 0.0) || !(spectral_abs > 0.0) || !(time_tol > 0.0))
        throw std::domain_error("OracleConfig: tolerances must be positive");
    if (!(ir_cutoff_frac > 0.0))
        throw std::domain_error("OracleConfig: ir_cutoff_frac must be positive");
}

TraceReport delta_rho_trace_numeric(const OracleConfig& cfg, double alpha_prime) {
    OracleContext ctx = make_context(cfg, alpha_prime);
    TraceReport rep;

    // matched analytic value from the reduced formulas
    if (cfg.cycle.p == 0.0) {
        auto i1 = i1_spectral(ctx.dim, ctx.alpha, ctx.omega, ctx.tau_a, ctx.a2, ctx.mu,
                              cfg.cycle.effective_tol());
        const auto parity = cfg.cycle.parity.value_or(EntangledParity::symmetric);
        rep.analytic = trace_delta_rho_h(alpha_prime, i1.value, parity);
        rep.evaluations += i1.evaluations;
    } else {
        auto g = trace_delta_rho_h_general(ctx.state, ctx.alpha, alpha_prime, ctx.omega,
                                           ctx.tau_a, ctx.a2, ctx.mu, ctx.dim,
                                           cfg.ir_cutoff_frac, cfg.cycle.effective_tol());
        rep.analytic = g.value;
        rep.evaluations += g.evaluations;
    }

    if (ctx.channels.empty()) {
        rep.rel_deviation = std::abs(rep.analytic);
        return rep;
    }

    const bool needs_ir_cutoff = ctx.active[kSame1] || ctx.active[kSame2];
    const double k_min = needs_ir_cutoff ? cfg.ir_cutoff_frac * ctx.a1 : 0.0;
    const double k_2d = cfg.k_2d > 0.0 ? cfg.k_2d : auto_k_2d(ctx);

    std::size_t inner_evals = 0;
    double imag_residual = 0.0;
    IntegrandSpec spec;
    spec.evaluator = [&](double t) {
        const double k = k_min + t;
        const auto w = kernel_weights(k, ctx.a1, ctx.a2, ctx.alpha, ctx.dim,
                                      ctx.active, ctx.tables);
        const cplx inner = (k <= k_2d) ? inner_square(ctx, k, w, &inner_evals)
                                       : inner_strip(ctx, k, w, &inner_evals);
        imag_residual = std::max(imag_residual, std::abs(inner.imag()));
        return inner.real();
    };
    spec.singular_points = {ctx.omega - k_min};
    spec.decay_scale = k_2d - k_min;
    spec.max_panel_width = 2.0 * kPi / (ctx.tau_a * (1.0 + ctx.alpha));

    // In 1+3D the scaled cross weight grows like a power of k, so the
    // semi-infinite doubling never converges; integrate a finite head and
    // close with the endpoint-asymptotic tail of the reduced density, whose
    // only surviving piece past saturation is coef * weight(k) * sinc pair.
    const bool cross_only_1p3 = ctx.dim == Dimension::d1p3 && ctx.active[kCross] &&
                                !ctx.active[kSame1] && !ctx.active[kSame2];
    QuadratureResult outer;
    if (cross_only_1p3) {
        const cplx phase = std::exp(kI * ctx.omega * (ctx.alpha - 1.0) * ctx.tau_a);
        const double b_factor =
            2.0 * std::real(ctx.state.b1 * std::conj(ctx.state.b2) * phase);
        const double coef =
            -8.0 * ctx.mu * ctx.mu * ctx.state.q() * (1.0 + alpha_prime) * b_factor;
        const double beta_m = (1.0 - ctx.alpha) * ctx.tau_a;
        const double cap = spec.max_panel_width;
        double k_cut = std::max({2.0 * ctx.omega, ctx.omega + 20.0 / ctx.tau_a,
                                 12.0 * ctx.a1 / (1.0 + ctx.alpha),
                                 beta_m > 0.0 ? ctx.omega + 8.0 / beta_m : 0.0});
        outer = integrate_interval(spec.evaluator, 0.0, k_cut, cfg.spectral_rel,
                                   cfg.spectral_abs, cap, {ctx.omega});
        for (int iter = 0;; ++iter) {
            auto tail = cross_tail_1p3(*ctx.tables.cross, k_cut, ctx.omega,
                                       ctx.tau_a, ctx.alpha);
            const double budget =
                std::max(cfg.spectral_abs,
                         0.5 * cfg.spectral_rel * std::abs(outer.value)) / 2.0;
            if (std::abs(coef) * tail.abs_error <= budget || iter == 4) {
                outer.value += coef * tail.value;
                outer.abs_error += std::abs(coef) * tail.abs_error;
                break;
            }
            const double grow =
                std::pow(std::abs(coef) * tail.abs_error / budget, 0.3) * 1.4;
            const double k_next = k_cut * std::min(std::max(grow, 1.3), 6.0);
            auto seg = integrate_interval(spec.evaluator, k_cut, k_next,
                                          cfg.spectral_rel, cfg.spectral_abs, cap, {});
            outer.value += seg.value;
            outer.abs_error += seg.abs_error;
            outer.evaluations += seg.evaluations;
            k_cut = k_next;
        }
    } else {
        outer = integrate_semi_infinite(spec, cfg.spectral_rel, cfg.spectral_abs);
    }

    rep.value = -0.5 * outer.value;
    rep.abs_error = 0.5 * outer.abs_error;
    rep.imag_residual = imag_residual;
    rep.evaluations += outer.evaluations + inner_evals + ctx.tables.evaluations();
    rep.rel_deviation = std::abs(rep.value - rep.analytic) /
                        std::max(std::abs(rep.analytic), 1e-300);
    return rep;
}

std::pair<double, double> inner_time_integral_check(double k, const OracleConfig& cfg,
                                                    double alpha_prime) {
    OracleContext ctx = make_context(cfg, alpha_prime);
    if (!(k > 0.0))
        throw std::domain_error("inner_time_integral_check: k must be positive");
    std::size_t evals = 0;
    const auto w = kernel_weights(k, ctx.a1, ctx.a2, ctx.alpha, ctx.dim,
                                  ctx.active, ctx.tables);
    const cplx numeric = inner_square(ctx, k, w, &evals);
    return {numeric.real(), inner_analytic(ctx, k, w)};
}

std::vector<Mat4> gamma_matrix_products(double tau1p, double tau1pp, double tau_a,
                                        double alpha_a, const InitialState& state,
                                        double omega, double mu) {
    const double d1p = tau1p + tau_a;
    const double d1pp = tau1pp + tau_a;
    const double d2p = alpha_a * (tau1p + tau_a);   // tau_b = alpha_a tau_a
    const double d2pp = alpha_a * (tau1pp + tau_a);
    const Mat4 m1p = monopole_m1(d1p, omega, mu);
    const Mat4 m1pp = monopole_m1(d1pp, omega, mu);
    const Mat4 m2p = monopole_m2(d2p, omega, mu);
    const Mat4 m2pp = monopole_m2(d2pp, omega, mu);
    const Mat4 rho = initial_density(state);
    return {
        m1p * m1pp * rho,  m1p * m2pp * rho,  m2p * m1pp * rho,  m2p * m2pp * rho,
        rho * m1pp * m1p,  rho * m1pp * m2p,  rho * m2pp * m1p,  rho * m2pp * m2p,
        m1p * rho * m1pp,  m1p * rho * m2pp,  m2p * rho * m1pp,  m2p * rho * m2pp,
    };
}

}  // namespace euqoe
