#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "otoc/bath/special_functions.hpp"
#include "otoc/bath/spectral_density.hpp"

namespace otoc::bath {

// --------------------------- s = 1 closed form -------------------------------

/// Low-temperature dephasing integral for the ohmic (s = 1) density:
///   D(t) = ln[ sqrt(1 + cutoff^2 t^2) * sinh(t/tau_T) / (t/tau_T) ],
/// with tau_T = 1/(pi kT). Accurate for kT << cutoff.
inline double dephasing_closed_s1(double cutoff, const ThermalContext& ctx, double t) {
    if (t < 0.0) throw std::invalid_argument("dephasing_closed_s1: t must be >= 0");
    if (t == 0.0) return 0.0;
    const double x = t / ctx.thermal_time();
    // ln(sinh x / x), stable for both small and large x.
    double log_sinhc;
    if (x < 1e-4) {
        log_sinhc = std::log1p(x * x / 6.0 * (1.0 + x * x / 20.0));
    } else if (x > 30.0) {
        log_sinhc = x - std::numbers::ln2 - std::log(x) + std::log1p(-std::exp(-2.0 * x));
    } else {
        log_sinhc = std::log(std::sinh(x) / x);
    }
    return 0.5 * std::log1p(cutoff * cutoff * t * t) + log_sinhc;
}

/// The closed form assumes kT << cutoff; this is the regime gate used when
/// choosing between it and direct quadrature.
inline bool s1_closed_form_in_regime(double cutoff, const ThermalContext& ctx) {
    return ctx.kT() <= 0.05 * cutoff;
}

// --------------------------- s > 1 closed forms -------------------------------

/// Residual imaginary part of the zeta/digamma combination of the last call;
/// the conjugate-pair structure should cancel it to roundoff.
inline thread_local double dephasing_closed_imag_residual = 0.0;

/// Dephasing integral for s > 1, valid at all temperatures:
///   D(t) = Gamma(s-1)/(beta*cutoff)^(s-1) * { zeta(s-1, q) + zeta(s-1, 1+q)
///          - 1/2 [ zeta(s-1, q + i t/beta) + zeta(s-1, 1+q + i t/beta) + c.c. ] },
/// q = 1/(beta*cutoff). At s = 2 the zeta combination degenerates to digamma
/// functions. Non-integer s in (1,2) would need the p < 1 continuation of the
/// Hurwitz series and is rejected; callers fall back to quadrature there.
inline double dephasing_closed_s_gt1(const SpectralDensity& j, const ThermalContext& ctx,
                                     double t) {
    const double s = j.exponent;
    if (!(s > 1.0)) throw std::domain_error("dephasing_closed_s_gt1: requires s > 1");
    if (t < 0.0) throw std::invalid_argument("dephasing_closed_s_gt1: t must be >= 0");
    const double q = 1.0 / (ctx.beta * j.cutoff);
    const double x = t / ctx.beta;
    const Complex qx(q, x);

    if (std::abs(s - 2.0) < 1e-12) {
        const Complex combo = -digamma(Complex(q, 0.0)) - digamma(Complex(1.0 + q, 0.0)) +
                              0.5 * (digamma(qx) + digamma(1.0 + qx) + std::conj(digamma(qx)) +
                                     std::conj(digamma(1.0 + qx)));
        dephasing_closed_imag_residual = std::abs(combo.imag());
        return combo.real() / (ctx.beta * j.cutoff);
    }
    if (s < 2.0) {
        throw std::domain_error("dephasing_closed_s_gt1: s in (1,2) not supported in closed "
                                "form; use quadrature");
    }
    const double p = s - 1.0;
    const Complex zq  = hurwitz_zeta(p, Complex(q, 0.0));
    const Complex zq1 = hurwitz_zeta(p, Complex(1.0 + q, 0.0));
    const Complex zx  = hurwitz_zeta(p, qx);
    const Complex zx1 = hurwitz_zeta(p, 1.0 + qx);
    const Complex combo = zq + zq1 - 0.5 * (zx + zx1 + std::conj(zx) + std::conj(zx1));
    dephasing_closed_imag_residual = std::abs(combo.imag());
    return std::tgamma(p) * std::pow(ctx.beta * j.cutoff, -p) * combo.real();
}

} // namespace otoc::bath
