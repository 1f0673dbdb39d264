#include "euqoe/wightman.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "euqoe/quadrature.hpp"

namespace euqoe {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.6931471805599453094;
constexpr double kExpFloor = 708.0;  // e^{-x} underflows past this

// log1p(-e^{-2x}), the finite-x correction to ln sinh(x) = x - ln 2 + ...
double ln_sinh_corr(double x) {
    return std::log1p(-std::exp(-2.0 * x));
}

}  // namespace

ThermalKernel g12_kernel_1p1(double k, const DetectorPairKinematics& kin) {
    if (!(k > 0.0)) throw std::domain_error("g12_kernel_1p1: k must be positive");
    if (!(kin.a1 > 0.0) || !(kin.alpha_a > 0.0))
        throw std::domain_error("g12_kernel_1p1: need a1 > 0 and alpha_a > 0");
    const double u = kPi * k / kin.a1;
    const double v = u * kin.alpha_a;
    ThermalKernel ker;
    ker.exponent = 0.5 * (u + v);
    // log(weight) + exponent = log(2) - log(4 pi k) - [corr(u) + corr(v)]/2,
    // since the leading (u+v)/2 of the sinh square root cancels the exponent.
    ker.log_weight_plus =
        kLn2 - std::log(4.0 * kPi * k) - 0.5 * (ln_sinh_corr(u) + ln_sinh_corr(v));
    ker.log_weight = ker.log_weight_plus - ker.exponent;
    return ker;
}

ThermalKernel g11_kernel_1p1(double k, double a1) {
    if (!(k > 0.0)) throw std::domain_error("g11_kernel_1p1: k must be positive");
    if (!(a1 > 0.0)) throw std::domain_error("g11_kernel_1p1: a1 must be positive");
    const double u = kPi * k / a1;
    ThermalKernel ker;
    ker.exponent = u;
    ker.log_weight_plus = kLn2 - std::log(4.0 * kPi * k) - ln_sinh_corr(u);
    ker.log_weight = ker.log_weight_plus - ker.exponent;
    return ker;
}

namespace {

// Real-axis representation int_0^inf e^{-x cosh t} cos(nu t) dt, truncated
// once the envelope drops 35 e-folds below the result scale
// max(e^{-x}, e^{-pi nu/2}). Adequate while that e^{-pi nu/2} cancellation
// stays within budget (nu <= 4 here).
double bessel_direct(double nu, double x) {
    const double result_log = std::max(x, kPi * nu / 2.0) + 35.0;
    if (result_log >= kExpFloor && x >= kExpFloor) return 0.0;
    const double t_max = std::acosh(std::max(result_log / x, 1.0 + 1e-12));
    const double cap = kPi / (2.0 * std::max(std::abs(nu), 1.0));
    auto f = [nu, x](double t) { return std::exp(-x * std::cosh(t)) * std::cos(nu * t); };
    const double abs_tol = 1e-13 * std::exp(-std::min(x, 700.0));
    auto r = integrate_interval(f, 0.0, t_max, 1e-12, std::max(abs_tol, 1e-290), cap);
    return r.value;
}

// Contour-rotated representation: with t = s + i(pi/2 - delta),
//   K_{i nu}(x) = e^{-nu (pi/2 - delta)} *
//                 int_0^inf e^{-x sin(delta) cosh s} cos(nu s - x cos(delta) sinh s) ds,
// so e^{pi nu/2} K_{i nu}(x) = e^{nu delta} * (the same integral). The
// damping e^{-x sin(delta) cosh s} keeps the oscillation bounded and removes
// the e^{-pi nu/2} cancellation of the real-axis form. Used for x >~ nu/2
// where the damping scale x sin(delta) is O(1) or larger.
double bessel_rotated_scaled(double nu, double x) {
    // The angle trades oscillation count (small delta) against cancellation:
    // the integrand peak at s = 0 overshoots the result scale e^{-nu delta}
    // by e^{nu delta - x sin delta} ~ e^{(nu-x) delta + x delta^3/6}. The
    // cube root bounds the cubic term; for x < nu the linear term dominates
    // and the angle must shrink with the gap nu - x (the saddle sits at
    // height pi/2, so a wide rotation cannot reach it).
    double delta = std::cbrt(48.0 / nu);
    if (x < nu)
        delta = std::min(delta, 8.0 / (nu - x + std::cbrt(nu)));
    else
        // saddle height drops to asin(nu/x); rotate through it
        delta = std::max(delta, std::acos(nu / x));
    delta = std::clamp(delta, 0.005, 1.5);
    const double sd = std::sin(delta), cd = std::cos(delta);
    const double scaling = nu * delta - x * sd;  // log of the factored s=0 envelope
    if (scaling < -745.0) return 0.0;
    // the factored integrand peaks at e^0; the result sits ~e^{-overshoot}
    // below it (bounded by the angle choice above)
    const double shoot = std::max(scaling, 0.0);
    const double s_max = std::acosh(1.0 + (shoot + 35.0) / (x * sd));
    auto f = [x, sd, nu, cd](double s) {
        return std::exp(-x * sd * (std::cosh(s) - 1.0)) *
               std::cos(nu * s - x * cd * std::sinh(s));
    };
    // integrate in unit segments so the oscillation cap can track the
    // sinh-growing local frequency
    const double abs_tol = 3e-13 / std::max(1.0, s_max);
    double total = 0.0;
    double s0 = 0.0;
    while (s0 < s_max) {
        const double s1 = std::min(s0 + 1.0, s_max);
        const double freq = nu + x * cd * std::cosh(s1);
        auto r = integrate_interval(f, s0, s1, 1e-11, abs_tol, kPi / (2.0 * freq));
        total += r.value;
        s0 = s1;
    }
    return std::exp(scaling) * total;
}

// Im log Gamma(1 + i nu), Lanczos approximation (g = 7, 9 terms).
double arg_gamma_one_plus_i(double nu) {
    static const double kLanczos[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    const cplx z{1.0, nu};
    cplx a{kLanczos[0], 0.0};
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + cplx(i - 1, 0.0));
    const cplx t = z + cplx(6.5, 0.0);
    const cplx lg = 0.5 * std::log(2.0 * kPi) + (z - 0.5) * std::log(t) - t + std::log(a);
    return lg.imag();
}

// Ascending series via K_{i nu}(x) = -pi Im I_{i nu}(x) / sinh(pi nu):
// S = sum_n (x^2/4)^n / (n! (1+i nu)_n) converges rapidly and without
// cancellation for x <~ nu, where the quadrature representations are at
// their worst. Returns the e^{pi nu/2}-scaled value.
double bessel_series_scaled(double nu, double x) {
    cplx term{1.0, 0.0};
    cplx s{1.0, 0.0};
    const double x24 = 0.25 * x * x;
    for (int n = 1; n < 1000; ++n) {
        term *= x24 / (cplx(static_cast<double>(n), 0.0) *
                       cplx(static_cast<double>(n), nu));
        s += term;
        if (n > 3 && std::abs(term) < 1e-18 * std::abs(s)) break;
    }
    const double psi = nu * std::log(0.5 * x) - arg_gamma_one_plus_i(nu);
    const double im = std::sin(psi) * s.real() + std::cos(psi) * s.imag();
    // e^{pi nu/2} / (|Gamma(1+i nu)| sinh(pi nu)) = 1 / sqrt(pi nu h) with
    // h = (1 - e^{-2 pi nu})/2
    const double h = 0.5 * (-std::expm1(-2.0 * kPi * nu));
    return -kPi * im / std::sqrt(kPi * nu * h);
}

constexpr double kDirectSwitch = 4.0;  // below: real-axis integral for all x

double bessel_scaled_impl(double nu, double x) {
    if (nu <= kDirectSwitch) {
        const double e = kPi * nu / 2.0;
        return e < kExpFloor ? std::exp(e) * bessel_direct(nu, x) : 0.0;
    }
    // series cancellation grows like e^{x^2/(4 nu)}; keep it under ~e^16
    if (x < std::min(0.5 * nu, 8.0 * std::sqrt(nu))) return bessel_series_scaled(nu, x);
    return bessel_rotated_scaled(nu, x);
}

}  // namespace

double bessel_k_imag(double nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k_imag: x must be positive");
    nu = std::abs(nu);  // K_{i nu} = K_{-i nu}
    if (nu <= kDirectSwitch) return bessel_direct(nu, x);
    const double e = kPi * nu / 2.0;
    return e < kExpFloor ? std::exp(-e) * bessel_scaled_impl(nu, x) : 0.0;
}

double bessel_k_imag_scaled(double nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k_imag_scaled: x must be positive");
    nu = std::abs(nu);
    return bessel_scaled_impl(nu, x);
}

namespace {

double kernel_1p3_measure(double kp_mag, const DetectorPairKinematics& kin) {
    const double a2 = kin.a2();
    const double two_pi_4 = std::pow(2.0 * kPi, 4);
    return (2.0 / std::sqrt(kin.a1 * a2)) * (2.0 * kPi * kp_mag) / two_pi_4;
}

}  // namespace

double g_kernel_1p3(double omega_k, double kp_mag, const DetectorPairKinematics& kin) {
    if (!(omega_k > 0.0)) throw std::domain_error("g_kernel_1p3: omega_k must be positive");
    if (kp_mag < 0.0) throw std::domain_error("g_kernel_1p3: kp_mag must be non-negative");
    if (kp_mag == 0.0) return 0.0;
    const double a2 = kin.a2();
    return kernel_1p3_measure(kp_mag, kin) *
           bessel_k_imag(omega_k / kin.a1, kp_mag / kin.a1) *
           bessel_k_imag(omega_k / a2, kp_mag / a2);
}

TransverseWeight transverse_weight_1p3(double omega_k,
                                       const DetectorPairKinematics& kin,
                                       double rel_tol) {
    if (!(omega_k > 0.0))
        throw std::domain_error("transverse_weight_1p3: omega_k must be positive");
    const double a1 = kin.a1;
    const double alpha = kin.alpha_a;
    const double nu1 = omega_k / a1;

    TransverseWeight out;
    auto g = [&](double kp) { return g_kernel_1p3_scaled(omega_k, kp, kin); };

    // Below the turning point the Bessel product oscillates in log(kp) at
    // frequency nu1 (1+alpha); integrate in u = log(kp). The discarded
    // [0, kp_lo] piece is O(kp_lo^2) against the kp measure.
    const double kp_turn = a1 * std::max(nu1, 1.0);
    const double kp_lo = 1e-5 * kp_turn;
    auto fu = [&](double u) {
        const double kp = std::exp(u);
        return g(kp) * kp;
    };
    const double cap_u = 2.0 * kPi / (nu1 * (1.0 + alpha) + 2.0);
    // Oscillation envelope near the turning point, probed at three phase
    // offsets. The Bessel evaluations carry ~1e-8 relative noise at large
    // nu1, so an absolute floor tied to the envelope keeps the adaptive
    // refinement from chasing that noise.
    double envelope = 0.0;
    for (double off : {0.0, 0.25, 0.5}) {
        envelope = std::max(envelope,
                            std::abs(fu(std::log(kp_turn) - off * cap_u)));
        out.evaluations += 1;
    }
    auto head = integrate_interval(fu, std::log(kp_lo), std::log(kp_turn),
                                   rel_tol, rel_tol * envelope + 1e-300, cap_u);
    out.value += head.value;
    out.abs_error += head.abs_error;
    out.evaluations += head.evaluations;

    // Past the turning point the scaled product decays like
    // e^{-(kp/a1 - pi nu1/2)(1+alpha)} (up to algebraic factors).
    const double kp_max = a1 * (kPi * nu1 / 2.0 + 60.0 / (1.0 + alpha) + 5.0);
    const double tail_scale =
        envelope / kp_turn * (a1 / (1.0 + alpha) + 1.0);
    auto tail = integrate_interval(g, kp_turn, kp_max, rel_tol,
                                   rel_tol * tail_scale + 1e-300,
                                   (kp_max - kp_turn) / 4.0);
    out.value += tail.value;
    out.abs_error += tail.abs_error;
    out.evaluations += tail.evaluations;
    return out;
}

namespace {

constexpr int kChebNodes = 17;

double cheb_eval(const std::vector<double>& coef, double lo, double hi, double x) {
    const double t = (2.0 * x - lo - hi) / (hi - lo);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coef.size(); k-- > 1;) {
        const double b0 = 2.0 * t * b1 - b2 + coef[k];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + 0.5 * coef[0];
}

}  // namespace

TransverseWeightTable::TransverseWeightTable(const DetectorPairKinematics& kin,
                                             double rel_tol)
    : kin_(kin), rel_tol_(rel_tol) {
    if (!(rel_tol > 0.0))
        throw std::domain_error("TransverseWeightTable: rel_tol must be positive");
    (void)kin_.a2();  // validates alpha_a
    base_ = std::max(kin.a1, kin.a2());
}

void TransverseWeightTable::build(double lo, double hi, int depth) const {
    double fj[kChebNodes];
    double scale = 0.0;
    for (int j = 0; j < kChebNodes; ++j) {
        const double t = std::cos(kPi * (j + 0.5) / kChebNodes);
        const double w = std::max(0.5 * ((hi - lo) * t + lo + hi), 1e-300);
        const auto tw = transverse_weight_1p3(w, kin_, rel_tol_);
        evaluations_ += tw.evaluations;
        fj[j] = tw.value;
        scale = std::max(scale, std::abs(tw.value));
    }
    Segment seg;
    seg.lo = lo;
    seg.hi = hi;
    seg.coef.resize(kChebNodes);
    for (int k = 0; k < kChebNodes; ++k) {
        double s = 0.0;
        for (int j = 0; j < kChebNodes; ++j)
            s += fj[j] * std::cos(kPi * k * (j + 0.5) / kChebNodes);
        seg.coef[k] = 2.0 * s / kChebNodes;
    }
    for (double frac : {0.171, 0.518, 0.912}) {
        const double w = lo + frac * (hi - lo);
        if (!(w > 0.0)) continue;
        const auto tw = transverse_weight_1p3(w, kin_, rel_tol_);
        evaluations_ += tw.evaluations;
        if (std::abs(cheb_eval(seg.coef, lo, hi, w) - tw.value) >
            5.0 * rel_tol_ * std::max(scale, std::abs(tw.value)) + 1e-300) {
            if (depth < 5) {
                const double mid = 0.5 * (lo + hi);
                build(lo, mid, depth + 1);
                build(mid, hi, depth + 1);
                return;
            }
        }
    }
    segments_.push_back(std::move(seg));
}

const TransverseWeightTable::Segment* TransverseWeightTable::find(double omega_k) const {
    while (segments_.empty() || omega_k > segments_.back().hi) {
        const double lo = segments_.empty() ? 0.0 : segments_.back().hi;
        const double hi = lo == 0.0 ? base_ : 2.0 * lo;
        build(lo, hi, 0);
    }
    // segments are contiguous and sorted; binary search on the upper edge
    std::size_t a = 0, b = segments_.size() - 1;
    while (a < b) {
        const std::size_t m = (a + b) / 2;
        if (omega_k > segments_[m].hi)
            a = m + 1;
        else
            b = m;
    }
    return &segments_[a];
}

double TransverseWeightTable::value(double omega_k) const {
    if (!(omega_k > 0.0))
        throw std::domain_error("TransverseWeightTable: omega_k must be positive");
    const Segment* seg = find(omega_k);
    return cheb_eval(seg->coef, seg->lo, seg->hi, omega_k);
}

void TransverseWeightTable::derivs(double omega_k, double* d) const {
    if (!(omega_k > 0.0))
        throw std::domain_error("TransverseWeightTable: omega_k must be positive");
    const Segment* seg = find(omega_k);
    std::vector<double> c = seg->coef;
    d[0] = cheb_eval(c, seg->lo, seg->hi, omega_k);
    // trailing coefficients at the fit-noise level would dominate the
    // differentiated series (amplification ~ (2 N^2 / width)^m); drop them
    double cmax = 0.0;
    for (double v : c) cmax = std::max(cmax, std::abs(v));
    while (c.size() > 3 && std::abs(c.back()) < 1e-7 * cmax) c.pop_back();
    const double scale = 2.0 / (seg->hi - seg->lo);
    for (int m = 1; m <= 2; ++m) {
        const std::size_t n = c.size();
        std::vector<double> cd(n, 0.0);
        if (n >= 2) cd[n - 2] = 2.0 * static_cast<double>(n - 1) * c[n - 1];
        for (std::size_t j = n - 2; j-- > 0;)
            cd[j] = cd[j + 2] + 2.0 * static_cast<double>(j + 1) * c[j + 1];
        for (double& v : cd) v *= scale;
        c = std::move(cd);
        d[m] = cheb_eval(c, seg->lo, seg->hi, omega_k);
    }
}

TransverseWeight cross_tail_1p3(const TransverseWeightTable& table, double k0,
                                double omega, double tau, double alpha) {
    if (!(k0 > omega) || !(tau > 0.0) || !(alpha > 0.0) || !(alpha <= 1.0))
        throw std::domain_error("cross_tail_1p3: need k0 > omega, tau > 0, 0 < alpha <= 1");
    double d[3];
    table.derivs(k0, d);
    const double beta[2] = {(1.0 - alpha) * tau, (1.0 + alpha) * tau};
    TransverseWeight out;

    // Slow component near alpha = 1: cos(beta_minus x) barely oscillates over
    // the decay range, but its +-omega pair nearly cancels, leaving
    // table(k) 2 omega k/(k^2-omega^2)^2 ~ 2 omega table(k)/k^3. Estimate via
    // the local power law table ~ C k^g and charge most of it as error.
    const bool slow = beta[0] * (k0 - omega) < 6.0;
    if (slow) {
        const double g = std::clamp(d[1] * k0 / std::max(d[0], 1e-300), 0.0, 1.0);
        const double dc = -2.0 * omega * d[0] / (k0 * k0 * (2.0 - g));
        out.value += dc;
        out.abs_error += 0.6 * std::abs(dc);
    }

    for (int c = 0; c < 2; ++c) {
        // x = k - omega (c = 0) enters with -, x = k + omega with +
        const double sc = c == 0 ? -1.0 : 1.0;
        const double u = c == 0 ? k0 - omega : k0 + omega;
        const double iu = 1.0 / u;
        // h(u) = table(k(u)) / u^2 and derivatives in u
        const double h0 = d[0] * iu * iu;
        const double h1 = (d[1] - 2.0 * d[0] * iu) * iu * iu;
        const double h2 = (d[2] - 4.0 * d[1] * iu + 6.0 * d[0] * iu * iu) * iu * iu;
        for (int b = 0; b < 2; ++b) {
            if (b == 0 && slow) continue;
            const double sb = b == 0 ? 1.0 : -1.0;  // cos(beta_minus) - cos(beta_plus)
            const double be = beta[b];
            const double s = std::sin(be * u), co = std::cos(be * u);
            const double a1 = -h0 * s / be - h1 * co / (be * be) + h2 * s / (be * be * be);
            out.value += 0.5 * sc * sb * a1;
            // first omitted term ~ h3/be^4 with h3 ~ 4 h2/u by the local
            // power law, plus the fit-noise floor of the twice-differentiated
            // Chebyshev series
            out.abs_error += 0.5 * (4.0 * std::abs(h2) / u / be +
                                    3e-9 * std::abs(h0)) /
                             (be * be * be);
        }
    }
    return out;
}

double g_kernel_1p3_scaled(double omega_k, double kp_mag,
                           const DetectorPairKinematics& kin) {
    if (!(omega_k > 0.0))
        throw std::domain_error("g_kernel_1p3_scaled: omega_k must be positive");
    if (kp_mag < 0.0) throw std::domain_error("g_kernel_1p3_scaled: kp_mag must be non-negative");
    if (kp_mag == 0.0) return 0.0;
    const double a2 = kin.a2();
    // e^{+E} with E = pi omega_k (1/a1 + 1/a2)/2 splits into the two
    // per-detector Bessel scalings exactly.
    return kernel_1p3_measure(kp_mag, kin) *
           bessel_k_imag_scaled(omega_k / kin.a1, kp_mag / kin.a1) *
           bessel_k_imag_scaled(omega_k / a2, kp_mag / a2);
}

}  // namespace euqoe
