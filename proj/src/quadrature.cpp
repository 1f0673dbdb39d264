#include "euqoe/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace euqoe {

namespace {

// Gauss-Kronrod 15(7) nodes and weights on [-1,1], positive half.
constexpr int kNodes = 8;
constexpr double kXgk[kNodes] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[kNodes] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// 7-point Gauss weights matching nodes 1, 3, 5, 7 above.
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel1 {
    double a, b;
    double value;
    double error;
};

struct PanelOrder {
    bool operator()(const Panel1& p, const Panel1& q) const {
        if (p.error != q.error) return p.error < q.error;
        return p.a > q.a;  // deterministic tie-break
    }
};

template <typename T>
double abs_of(const T& v) {
    return std::abs(v);
}

// One GK15 evaluation; returns (kronrod, gauss, resabs, resasc).
template <typename T, typename F>
void gk15(const F& f, double a, double b, T& resk, T& resg,
          double& resabs, double& resasc) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    T fv[15];
    resk = T{};
    resg = T{};
    resabs = 0.0;
    int gi = 0;
    for (int i = 0; i < kNodes; ++i) {
        const double dx = h * kXgk[i];
        if (i == kNodes - 1) {
            fv[2 * i] = f(c);
            resk += kWgk[i] * fv[2 * i];
            resg += kWg[3] * fv[2 * i];
            resabs += kWgk[i] * abs_of(fv[2 * i]);
        } else {
            fv[2 * i] = f(c - dx);
            fv[2 * i + 1] = f(c + dx);
            const T s = fv[2 * i] + fv[2 * i + 1];
            resk += kWgk[i] * s;
            resabs += kWgk[i] * (abs_of(fv[2 * i]) + abs_of(fv[2 * i + 1]));
            if (i % 2 == 1) {
                resg += kWg[gi] * s;
                ++gi;
            }
        }
    }
    const T mean = resk * 0.5;
    resasc = kWgk[kNodes - 1] * abs_of(fv[2 * (kNodes - 1)] - mean);
    for (int i = 0; i < kNodes - 1; ++i)
        resasc += kWgk[i] * (abs_of(fv[2 * i] - mean) + abs_of(fv[2 * i + 1] - mean));
    resk *= h;
    resg *= h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
}

template <typename T, typename F>
void eval_panel(const F& f, double a, double b, T& value, double& error) {
    T resk, resg;
    double resabs, resasc;
    gk15(f, a, b, resk, resg, resabs, resasc);
    value = resk;
    double err = abs_of(resk - resg);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps_floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
    error = std::max(err, eps_floor);
}

std::vector<double> initial_breaks(double a, double b, double max_panel_width,
                                   const std::vector<double>& split_points) {
    std::vector<double> breaks{a};
    for (double s : split_points)
        if (s > a && s < b) breaks.push_back(s);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (max_panel_width > 0.0) {
        std::vector<double> refined;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            refined.push_back(breaks[i]);
            const double w = breaks[i + 1] - breaks[i];
            const auto n = static_cast<std::size_t>(std::ceil(w / max_panel_width));
            for (std::size_t j = 1; j < n; ++j)
                refined.push_back(breaks[i] + w * static_cast<double>(j) / static_cast<double>(n));
        }
        refined.push_back(breaks.back());
        breaks = std::move(refined);
    }
    return breaks;
}

}  // namespace

QuadratureResult integrate_interval(const std::function<double(double)>& f,
                                    double a, double b,
                                    double rel_tol, double abs_tol,
                                    double max_panel_width,
                                    const std::vector<double>& split_points,
                                    std::size_t max_panels) {
    if (!(rel_tol > 0.0) && !(abs_tol > 0.0))
        throw std::invalid_argument("integrate_interval: need a positive tolerance");
    if (a == b) return {0.0, 0.0, 0};

    const auto breaks = initial_breaks(a, b, max_panel_width, split_points);
    std::vector<Panel1> heap;
    heap.reserve(breaks.size());
    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Panel1 p{breaks[i], breaks[i + 1], 0.0, 0.0};
        eval_panel(f, p.a, p.b, p.value, p.error);
        total.evaluations += 15;
        heap.push_back(p);
    }
    std::make_heap(heap.begin(), heap.end(), PanelOrder{});

    auto sum_all = [&heap]() {
        std::vector<Panel1> sorted(heap);
        std::sort(sorted.begin(), sorted.end(),
                  [](const Panel1& p, const Panel1& q) { return p.a < q.a; });
        double v = 0.0, e = 0.0;
        for (const auto& p : sorted) {
            v += p.value;
            e += p.error;
        }
        return std::pair<double, double>(v, e);
    };

    double value, error;
    std::tie(value, error) = sum_all();
    while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (heap.size() >= max_panels) {
            total.value = value;
            total.abs_error = error;
            throw QuadratureError("integrate_interval: panel budget exhausted", total);
        }
        std::pop_heap(heap.begin(), heap.end(), PanelOrder{});
        Panel1 worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at rounding resolution; accept as is
            worst.error = 0.0;
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), PanelOrder{});
            std::tie(value, error) = sum_all();
            continue;
        }
        Panel1 left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
        eval_panel(f, left.a, left.b, left.value, left.error);
        eval_panel(f, right.a, right.b, right.value, right.error);
        total.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), PanelOrder{});
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), PanelOrder{});
    }
    std::tie(value, error) = sum_all();
    total.value = value;
    total.abs_error = error;
    return total;
}

QuadratureResult integrate_semi_infinite(const IntegrandSpec& spec,
                                         double rel_tol, double abs_tol) {
    if (!(spec.decay_scale > 0.0))
        throw std::invalid_argument("integrate_semi_infinite: decay_scale must be positive");
    QuadratureResult total;
    double hi = spec.decay_scale;
    {
        auto head = integrate_interval(spec.evaluator, 0.0, hi, rel_tol, abs_tol,
                                       spec.max_panel_width, spec.singular_points);
        total.value = head.value;
        total.abs_error = head.abs_error;
        total.evaluations = head.evaluations;
    }
    int quiet = 0;
    for (int ext = 0; ext < 26 && quiet < 2; ++ext) {
        const double tol_now = std::max(abs_tol, rel_tol * std::abs(total.value));
        auto seg = integrate_interval(spec.evaluator, hi, 2.0 * hi,
                                      rel_tol, 0.125 * tol_now,
                                      spec.max_panel_width, spec.singular_points);
        total.value += seg.value;
        total.abs_error += seg.abs_error;
        total.evaluations += seg.evaluations;
        hi *= 2.0;
        if (std::abs(seg.value) + seg.abs_error < 0.25 * tol_now)
            ++quiet;
        else
            quiet = 0;
    }
    if (quiet < 2)
        throw QuadratureError("integrate_semi_infinite: tail did not converge", total);
    return total;
}

namespace {

struct Panel2 {
    double x0, x1, y0, y1;
    std::complex<double> value;
    double error;
};

struct Panel2Order {
    bool operator()(const Panel2& p, const Panel2& q) const {
        if (p.error != q.error) return p.error < q.error;
        if (p.x0 != q.x0) return p.x0 > q.x0;
        return p.y0 > q.y0;
    }
};

// Tensor GK15x15 with embedded 7x7 Gauss error estimate.
void eval_panel2(const std::function<std::complex<double>(double, double)>& f,
                 Panel2& p) {
    using C = std::complex<double>;
    const double hx = 0.5 * (p.x1 - p.x0), cx = 0.5 * (p.x0 + p.x1);
    const double hy = 0.5 * (p.y1 - p.y0), cy = 0.5 * (p.y0 + p.y1);
    double xs[15], ys[15], wkx[15], wky[15];
    double wgx[15] = {0}, wgy[15] = {0};
    int idx = 0;
    for (int i = 0; i < kNodes; ++i) {
        if (i == kNodes - 1) {
            xs[idx] = cx;
            ys[idx] = cy;
            wkx[idx] = kWgk[i];
            wky[idx] = kWgk[i];
            if (i % 2 == 1) {}  // center is a Gauss node
            wgx[idx] = kWg[3];
            wgy[idx] = kWg[3];
            ++idx;
        } else {
            for (int s = -1; s <= 1; s += 2) {
                xs[idx] = cx + s * hx * kXgk[i];
                ys[idx] = cy + s * hy * kXgk[i];
                wkx[idx] = kWgk[i];
                wky[idx] = kWgk[i];
                if (i % 2 == 1) {
                    wgx[idx] = kWg[i / 2];
                    wgy[idx] = kWg[i / 2];
                }
                ++idx;
            }
        }
    }
    C resk{}, resg{};
    double resabs = 0.0;
    C fvals[15][15];
    for (int i = 0; i < 15; ++i) {
        for (int j = 0; j < 15; ++j) {
            const C v = f(xs[i], ys[j]);
            fvals[i][j] = v;
            resk += wkx[i] * wky[j] * v;
            resabs += wkx[i] * wky[j] * std::abs(v);
            if (wgx[i] != 0.0 && wgy[j] != 0.0) resg += wgx[i] * wgy[j] * v;
        }
    }
    const C mean = resk * 0.25;
    double resasc = 0.0;
    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j)
            resasc += wkx[i] * wky[j] * std::abs(fvals[i][j] - mean);
    const double jac = hx * hy;
    p.value = resk * jac;
    resabs *= std::abs(jac);
    resasc *= std::abs(jac);
    double err = std::abs(resk - resg) * std::abs(jac);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    p.error = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * resabs);
}

}  // namespace

ComplexQuadratureResult integrate_square(
    const std::function<std::complex<double>(double, double)>& f,
    double lo, double hi, double rel_tol, double abs_tol,
    double max_panel_width, std::size_t max_panels) {
    if (!(hi > lo)) throw std::invalid_argument("integrate_square: need lo < hi");
    std::size_t n = 1;
    if (max_panel_width > 0.0)
        n = static_cast<std::size_t>(std::ceil((hi - lo) / max_panel_width));
    n = std::min<std::size_t>(std::max<std::size_t>(n, 1), 256);

    std::vector<Panel2> heap;
    heap.reserve(n * n);
    ComplexQuadratureResult total;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Panel2 p;
            p.x0 = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
            p.x1 = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n);
            p.y0 = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n);
            p.y1 = lo + (hi - lo) * static_cast<double>(j + 1) / static_cast<double>(n);
            eval_panel2(f, p);
            total.evaluations += 225;
            heap.push_back(p);
        }
    }
    std::make_heap(heap.begin(), heap.end(), Panel2Order{});

    auto sum_all = [&heap]() {
        std::vector<const Panel2*> sorted;
        sorted.reserve(heap.size());
        for (const auto& p : heap) sorted.push_back(&p);
        std::sort(sorted.begin(), sorted.end(), [](const Panel2* p, const Panel2* q) {
            if (p->x0 != q->x0) return p->x0 < q->x0;
            return p->y0 < q->y0;
        });
        std::complex<double> v{};
        double e = 0.0;
        for (const auto* p : sorted) {
            v += p->value;
            e += p->error;
        }
        return std::pair<std::complex<double>, double>(v, e);
    };

    auto [value, error] = sum_all();
    while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
        if (heap.size() >= max_panels) {
            total.value = value;
            total.abs_error = error;
            QuadratureResult partial{value.real(), error, total.evaluations};
            throw QuadratureError("integrate_square: panel budget exhausted", partial);
        }
        std::pop_heap(heap.begin(), heap.end(), Panel2Order{});
        Panel2 worst = heap.back();
        heap.pop_back();
        const double mx = 0.5 * (worst.x0 + worst.x1);
        const double my = 0.5 * (worst.y0 + worst.y1);
        value -= worst.value;
        error -= worst.error;
        const Panel2 quads[4] = {
            {worst.x0, mx, worst.y0, my}, {mx, worst.x1, worst.y0, my},
            {worst.x0, mx, my, worst.y1}, {mx, worst.x1, my, worst.y1}};
        for (Panel2 q : quads) {
            eval_panel2(f, q);
            total.evaluations += 225;
            value += q.value;
            error += q.error;
            heap.push_back(q);
            std::push_heap(heap.begin(), heap.end(), Panel2Order{});
        }
    }
    std::tie(value, error) = sum_all();
    total.value = value;
    total.abs_error = error;
    return total;
}

double patched_sinc_pair(double k, double omega, double tau_a, double alpha) {
    if (!(tau_a > 0.0)) throw std::domain_error("patched_sinc_pair: tau_a must be positive");
    const double x = k - omega;
    const double eps_switch = 1e-6 * std::max(1.0, std::abs(omega));
    if (std::abs(x) < eps_switch) {
        const double xt = x * tau_a;
        return alpha * tau_a * tau_a *
               (1.0 - (1.0 + alpha * alpha) * xt * xt / 6.0);
    }
    return std::sin(x * tau_a) * std::sin(alpha * x * tau_a) / (x * x);
}

}  // namespace euqoe
