#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "otoc/bath/quadrature.hpp"
#include "otoc/bath/spectral_density.hpp"

namespace otoc::bath {

using Complex = std::complex<double>;

// --------------------------- Bath correlation xi_J ---------------------------

/// Thermal bath correlation function
///   xi_J(t) = int_0^inf J(w) [coth(beta w/2) cos(w t) + i sin(w t)] dw.
/// The upper limit is folded by the exponential cutoff (tail < 1e-12).
inline Complex xi_J(const SpectralDensity& j, const ThermalContext& ctx, double t,
                    double abs_tol = 1e-10) {
    auto breaks = with_oscillation_chunks(frequency_breakpoints(j, ctx), std::abs(t));
    QuadratureOptions opt;
    opt.abs_tol = abs_tol;
    return integrate_adaptive(
        [&](double w) {
            const double jw = spectral_value(j, w);
            return Complex(jw * coth_half(ctx.beta, w) * std::cos(w * t),
                           jw * std::sin(w * t));
        },
        breaks, opt);
}

/// Re xi_J(t) = int J(w) coth(beta w/2) cos(w t) dw; the part that drives
/// dephasing.
inline double re_xi_J(const SpectralDensity& j, const ThermalContext& ctx, double t,
                      double abs_tol = 1e-10) {
    auto breaks = with_oscillation_chunks(frequency_breakpoints(j, ctx), std::abs(t));
    QuadratureOptions opt;
    opt.abs_tol = abs_tol;
    return integrate_adaptive(
        [&](double w) {
            return spectral_value(j, w) * coth_half(ctx.beta, w) * std::cos(w * t);
        },
        breaks, opt);
}

// --------------------------- Dephasing integral D(t) -------------------------

/// D(t) = int_0^t dt' int_0^t' dt'' Re xi_J(t'-t''), reduced by the
/// convolution identity to the single integral int_0^t (t-tau) Re xi_J(tau) dtau.
inline double dephasing_integral_D(const SpectralDensity& j, const ThermalContext& ctx,
                                   double t, double abs_tol = 1e-9) {
    if (t < 0.0) throw std::invalid_argument("dephasing_integral_D: t must be >= 0");
    if (t == 0.0) return 0.0;
    const double inner_tol = std::max(1e-13, abs_tol / (t * t));
    QuadratureOptions opt;
    opt.abs_tol = 0.5 * abs_tol;
    auto breaks = with_oscillation_chunks({0.0, t}, 2.0 * j.cutoff);
    return integrate_adaptive(
        [&](double tau) { return (t - tau) * re_xi_J(j, ctx, tau, inner_tol); },
        breaks, opt);
}

/// Same quantity with the order of integration swapped:
///   D(t) = int_0^inf J(w) coth(beta w/2) (1 - cos(w t)) / w^2 dw,
/// a single frequency-space quadrature. Used on dense time grids.
inline double dephasing_integral_D_spectral(const SpectralDensity& j,
                                            const ThermalContext& ctx, double t,
                                            double abs_tol = 1e-9) {
    if (t < 0.0) throw std::invalid_argument("dephasing_integral_D_spectral: t must be >= 0");
    if (t == 0.0) return 0.0;
    auto breaks = with_oscillation_chunks(frequency_breakpoints(j, ctx), t);
    QuadratureOptions opt;
    opt.abs_tol = abs_tol;
    return integrate_adaptive(
        [&](double w) {
            const double s = std::sin(0.5 * w * t);
            return spectral_value(j, w) * coth_half(ctx.beta, w) * 2.0 * s * s / (w * w);
        },
        breaks, opt);
}

// --------------------------- |xi| double integral ----------------------------

/// int_0^t dt' int_0^t' dt'' |xi_J(t'-t'')| = int_0^t (t-tau) |xi_J(tau)| dtau.
inline double abs_xi_double_integral(const SpectralDensity& j, const ThermalContext& ctx,
                                     double t, double abs_tol = 1e-9) {
    if (t < 0.0) throw std::invalid_argument("abs_xi_double_integral: t must be >= 0");
    if (t == 0.0) return 0.0;
    const double inner_tol = std::max(1e-13, 0.1 * abs_tol / (t * t));
    QuadratureOptions opt;
    opt.abs_tol = 0.5 * abs_tol;
    auto breaks = with_oscillation_chunks({0.0, t}, 2.0 * j.cutoff);
    return integrate_adaptive(
        [&](double tau) { return (t - tau) * std::abs(xi_J(j, ctx, tau, inner_tol)); },
        breaks, opt);
}

// --------------------------- Sampled |xi| table -------------------------------

/// Dense |xi_J| samples with cumulative Simpson prefix integrals, for series
/// sweeps that need int (t - tau)|xi(tau)| dtau at many grid times. Grid times
/// must coincide with even sample indices; bound_series builds the table with
/// an 8x refinement of its own grid so this holds by construction.
class AbsXiTable {
public:
    AbsXiTable(const SpectralDensity& j, const ThermalContext& ctx, double t_max,
               std::size_t n_samples, double xi_tol = 1e-11)
        : h_(t_max / static_cast<double>(n_samples)), n_(n_samples) {
        if (n_ % 2 != 0) ++n_;
        abs_xi_.resize(n_ + 1);
        for (std::size_t i = 0; i <= n_; ++i) {
            abs_xi_[i] = std::abs(xi_J(j, ctx, h_ * static_cast<double>(i), xi_tol));
        }
        // Cumulative Simpson over interval pairs: prefix values at even indices.
        i0_.assign(n_ / 2 + 1, 0.0);
        i1_.assign(n_ / 2 + 1, 0.0);
        for (std::size_t k = 1; k <= n_ / 2; ++k) {
            const std::size_t i = 2 * k;
            const double t0 = h_ * static_cast<double>(i - 2);
            const double t1 = h_ * static_cast<double>(i - 1);
            const double t2 = h_ * static_cast<double>(i);
            i0_[k] = i0_[k - 1] +
                     h_ / 3.0 * (abs_xi_[i - 2] + 4.0 * abs_xi_[i - 1] + abs_xi_[i]);
            i1_[k] = i1_[k - 1] +
                     h_ / 3.0 * (t0 * abs_xi_[i - 2] + 4.0 * t1 * abs_xi_[i - 1] +
                                 t2 * abs_xi_[i]);
        }
    }

    /// int_0^t (t - tau) |xi(tau)| dtau for t on an even sample index.
    double weighted_integral(double t) const {
        const double fi = t / h_;
        const auto i = static_cast<std::size_t>(std::llround(fi));
        if (i > n_ || std::abs(fi - static_cast<double>(i)) > 1e-9 || i % 2 != 0) {
            throw std::invalid_argument("AbsXiTable: t not on an even sample index");
        }
        return t * i0_[i / 2] - i1_[i / 2];
    }

private:
    double h_;
    std::size_t n_;
    std::vector<double> abs_xi_;
    std::vector<double> i0_, i1_;
};

} // namespace otoc::bath
