#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <string>
#include <type_traits>
#include <vector>

#include "otoc/core/errors.hpp"

namespace otoc::bath {

namespace detail {

// Gauss-Kronkod 7-15 abscissae/weights on [-1, 1] (positive half; symmetric).
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(const std::complex<double>& v) { return std::abs(v); }

template <class F>
auto gk15(F& f, double a, double b) {
    using T = std::decay_t<decltype(f(a))>;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T resk = gk_wk[7] * fc;
    T resg = gk_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const T f1 = f(c - h * gk_x[j]);
        const T f2 = f(c + h * gk_x[j]);
        resk += gk_wk[j] * (f1 + f2);
        if (j % 2 == 1) resg += gk_wg[(j - 1) / 2] * (f1 + f2);
    }
    resk *= h;
    resg *= h;
    return std::pair<T, double>(resk, quad_norm(resk - resg));
}

} // namespace detail

struct QuadratureOptions {
    double abs_tol = 1e-10;
    std::size_t max_intervals = 8000;
};

/// Adaptive Gauss-Kronrod integration over the intervals defined by the
/// (sorted) breakpoints. Worst-error interval is bisected until the summed
/// error estimate drops below abs_tol. Throws numerical_error (reporting the
/// estimated error) if the interval budget runs out.
template <class F>
auto integrate_adaptive(F&& f, std::vector<double> breakpoints,
                        const QuadratureOptions& opt = {}) {
    using T = std::decay_t<decltype(f(breakpoints.front()))>;
    struct Seg {
        double a, b, err;
        T value;
        bool operator<(const Seg& o) const { return err < o.err; }
    };

    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    std::priority_queue<Seg> heap;
    double total_err = 0.0;
    std::size_t n_seg = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i], b = breakpoints[i + 1];
        if (!(b > a)) continue;
        auto [v, e] = detail::gk15(f, a, b);
        heap.push(Seg{a, b, e, v});
        total_err += e;
        ++n_seg;
    }
    if (n_seg == 0) return T{};

    const double span = breakpoints.back() - breakpoints.front();
    while (total_err > opt.abs_tol) {
        if (n_seg >= opt.max_intervals) {
            throw numerical_error("integrate_adaptive: not converged, estimated error " +
                                  std::to_string(total_err) + " > tol " +
                                  std::to_string(opt.abs_tol));
        }
        Seg worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a < 1e-15 * span || mid <= worst.a || mid >= worst.b) {
            // Interval at floating-point resolution; accept its estimate.
            heap.push(Seg{worst.a, worst.b, 0.0, worst.value});
            total_err -= worst.err;
            continue;
        }
        auto [v1, e1] = detail::gk15(f, worst.a, mid);
        auto [v2, e2] = detail::gk15(f, mid, worst.b);
        heap.push(Seg{worst.a, mid, e1, v1});
        heap.push(Seg{mid, worst.b, e2, v2});
        total_err += e1 + e2 - worst.err;
        ++n_seg;
    }

    // Sum in interval order for a partition-independent result.
    std::vector<Seg> segs;
    segs.reserve(n_seg);
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
    T total{};
    for (const Seg& s : segs) total += s.value;
    return total;
}

template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    return integrate_adaptive(std::forward<F>(f), std::vector<double>{a, b}, opt);
}

/// Subdivide each breakpoint interval so that osc_rate * length <= pi,
/// giving the adaptive pass a fair start on oscillatory integrands.
inline std::vector<double> with_oscillation_chunks(std::vector<double> breakpoints,
                                                   double osc_rate) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
    if (osc_rate <= 0.0 || breakpoints.size() < 2) return breakpoints;
    std::vector<double> out;
    constexpr double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i], b = breakpoints[i + 1];
        out.push_back(a);
        const std::size_t n = static_cast<std::size_t>(std::ceil((b - a) * osc_rate / pi));
        for (std::size_t k = 1; k < n; ++k) {
            out.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(n));
        }
    }
    out.push_back(breakpoints.back());
    return out;
}

} // namespace otoc::bath
