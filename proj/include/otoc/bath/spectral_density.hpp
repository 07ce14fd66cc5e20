#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace otoc::bath {

/// Ohmic-family spectral density J(w) = w^s / cutoff^(s-1) * exp(-w/cutoff).
/// s = 1 ohmic, s > 1 superohmic. The cutoff sets the frequency unit.
struct SpectralDensity {
    double exponent = 1.0; // s
    double cutoff   = 1.0; // Lambda

    SpectralDensity(double s, double lambda) : exponent(s), cutoff(lambda) {
        if (!(exponent > 0.0)) throw std::invalid_argument("SpectralDensity: s must be > 0");
        if (!(cutoff > 0.0)) throw std::invalid_argument("SpectralDensity: cutoff must be > 0");
    }
};

inline double spectral_value(const SpectralDensity& j, double omega) {
    if (omega < 0.0) throw std::invalid_argument("spectral_value: omega must be >= 0");
    if (omega == 0.0) return 0.0;
    return std::pow(omega, j.exponent) * std::pow(j.cutoff, 1.0 - j.exponent) *
           std::exp(-omega / j.cutoff);
}

/// Inverse temperature and the derived thermal time 1/(pi kT).
struct ThermalContext {
    double beta = 1.0;

    explicit ThermalContext(double inverse_temperature) : beta(inverse_temperature) {
        if (!(beta > 0.0)) throw std::invalid_argument("ThermalContext: beta must be > 0");
    }

    double kT() const { return 1.0 / beta; }
    double thermal_time() const { return beta / std::numbers::pi; }
};

/// coth(beta*omega/2); safe for small arguments (1/tanh underflows gracefully).
inline double coth_half(double beta, double omega) {
    return 1.0 / std::tanh(0.5 * beta * omega);
}

/// Upper frequency cutoff such that the neglected tail of
/// integral J(w) coth(beta w/2) dw is below tol.
inline double spectral_tail_cutoff(const SpectralDensity& j, double beta, double tol = 1e-12) {
    const double lam = j.cutoff;
    double omega = 5.0 * lam;
    for (; omega < 400.0 * lam; omega += 0.5 * lam) {
        // Tail bound: integrand decays at least as fast as exp(-(w-omega)/(2 cutoff))
        // once omega > 2 s cutoff, so 2*cutoff*J(omega)*coth is a safe envelope.
        if (omega < 2.0 * j.exponent * lam) continue;
        const double est = 2.0 * lam * spectral_value(j, omega) * coth_half(beta, omega) *
                           std::pow(2.0, j.exponent);
        if (est < tol) break;
    }
    return omega;
}

/// Breakpoints for frequency-space quadratures: natural scales (kT, cutoff)
/// plus the exponential-tail cutoff, clipped to [0, tail].
inline std::vector<double> frequency_breakpoints(const SpectralDensity& j,
                                                 const ThermalContext& ctx,
                                                 double tail_tol = 1e-12) {
    const double tail = spectral_tail_cutoff(j, ctx.beta, tail_tol);
    std::vector<double> out{0.0, tail};
    for (double w : {ctx.kT(), j.cutoff, 2.0 * j.cutoff}) {
        if (w > 0.0 && w < tail) out.push_back(w);
    }
    return out;
}

} // namespace otoc::bath
