#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "otoc/bath/correlation.hpp"
#include "otoc/bath/quadrature.hpp"
#include "otoc/bath/spectral_density.hpp"
#include "otoc/model/bath_discretization.hpp"

namespace otoc::influence {

using Complex = std::complex<double>;

namespace detail {

// Stable double time integrals of exp(i w (t'-t'')):
//   rectangle [a,b] x [c,d]:  4 sin(w L1/2) sin(w L2/2) exp(i w mu) / w^2,
//   with L1 = b-a, L2 = d-c, mu = (a+b-c-d)/2;
//   triangle a <= t'' <= t' <= b:  [(1 - cos(w L)) + i (w L - sin(w L))] / w^2.
inline double rect_cos(double omega, double a, double b, double c, double d) {
    const double mu = 0.5 * (a + b - c - d);
    return 4.0 * std::sin(0.5 * omega * (b - a)) * std::sin(0.5 * omega * (d - c)) *
           std::cos(omega * mu) / (omega * omega);
}

inline double rect_sin(double omega, double a, double b, double c, double d) {
    const double mu = 0.5 * (a + b - c - d);
    return 4.0 * std::sin(0.5 * omega * (b - a)) * std::sin(0.5 * omega * (d - c)) *
           std::sin(omega * mu) / (omega * omega);
}

inline double tri_cos(double omega, double length) {
    const double s = std::sin(0.5 * omega * length);
    return 2.0 * s * s / (omega * omega);
}

inline double tri_sin(double omega, double length) {
    const double x = omega * length;
    if (std::abs(x) < 1e-3) {
        // x - sin x by series; avoids cancellation.
        return length * length * x / 6.0 * (1.0 - x * x / 20.0 * (1.0 - x * x / 42.0));
    }
    return (x - std::sin(x)) / (omega * omega);
}

} // namespace detail

/// Double time integrals of the influence kernel K(tau) = conj(xi_J(tau)),
/// i.e. K = int J(w) [coth(beta w/2) cos(w tau) - i sin(w tau)] dw. This is
/// the sign that reproduces the exact truncated-Fock trace engine; xi_J
/// itself is exposed with the opposite imaginary sign (see bath/correlation).
/// The convention was fixed once against displacement_trace_oracle and the
/// joint-space engines, and is frozen here.
class BathKernel {
public:
    virtual ~BathKernel() = default;

    /// xi_J(tau), for reference and for nested-quadrature cross-checks.
    virtual Complex xi(double tau) const = 0;

    /// int_a^b dt' int_c^d dt'' K(t' - t''); caller guarantees d <= a (the
    /// rectangle lies inside the ordered domain t'' <= t').
    virtual Complex rect_integral(double a, double b, double c, double d) const = 0;

    /// int_a^b dt' int_a^t' dt'' K(t' - t'').
    virtual Complex tri_integral(double a, double b) const = 0;

    /// D(b - a): the dephasing double integral of Re xi over the triangle.
    double dephasing_d(double t) const { return tri_integral(0.0, t).real(); }
};

/// Kernel of a finite mode set: closed trigonometric forms, exact.
class DiscreteBathKernel final : public BathKernel {
public:
    DiscreteBathKernel(std::vector<model::BathMode> modes, double beta)
        : modes_(std::move(modes)), beta_(beta) {}

    Complex xi(double tau) const override {
        Complex acc(0.0, 0.0);
        for (const auto& m : modes_) {
            const double c2 = m.coupling * m.coupling;
            acc += Complex(c2 * bath::coth_half(beta_, m.omega) * std::cos(m.omega * tau),
                           c2 * std::sin(m.omega * tau));
        }
        return acc;
    }

    Complex rect_integral(double a, double b, double c, double d) const override {
        Complex acc(0.0, 0.0);
        for (const auto& m : modes_) {
            const double c2 = m.coupling * m.coupling;
            acc += Complex(c2 * bath::coth_half(beta_, m.omega) *
                               detail::rect_cos(m.omega, a, b, c, d),
                           -c2 * detail::rect_sin(m.omega, a, b, c, d));
        }
        return acc;
    }

    Complex tri_integral(double a, double b) const override {
        Complex acc(0.0, 0.0);
        const double len = b - a;
        for (const auto& m : modes_) {
            const double c2 = m.coupling * m.coupling;
            acc += Complex(c2 * bath::coth_half(beta_, m.omega) * detail::tri_cos(m.omega, len),
                           -c2 * detail::tri_sin(m.omega, len));
        }
        return acc;
    }

    const std::vector<model::BathMode>& modes() const { return modes_; }
    double beta() const { return beta_; }

private:
    std::vector<model::BathMode> modes_;
    double beta_;
};

/// Kernel of a continuous ohmic-family density: the segment double integrals
/// collapse to single frequency quadratures with the closed trigonometric
/// factors above.
class OhmicBathKernel final : public BathKernel {
public:
    OhmicBathKernel(bath::SpectralDensity j, bath::ThermalContext ctx, double abs_tol = 1e-8)
        : j_(j), ctx_(ctx), tol_(abs_tol) {}

    Complex xi(double tau) const override { return bath::xi_J(j_, ctx_, tau, 0.1 * tol_); }

    Complex rect_integral(double a, double b, double c, double d) const override {
        const double rate = std::abs(0.5 * (a + b - c - d)) + 0.5 * (b - a) + 0.5 * (d - c);
        return quadrature(
            [&](double w) {
                return Complex(bath::coth_half(ctx_.beta, w) * detail::rect_cos(w, a, b, c, d),
                               -detail::rect_sin(w, a, b, c, d));
            },
            rate);
    }

    Complex tri_integral(double a, double b) const override {
        const double len = b - a;
        return quadrature(
            [&](double w) {
                return Complex(bath::coth_half(ctx_.beta, w) * detail::tri_cos(w, len),
                               -detail::tri_sin(w, len));
            },
            len);
    }

    const bath::SpectralDensity& spectral() const { return j_; }
    const bath::ThermalContext& thermal() const { return ctx_; }

private:
    template <class F>
    Complex quadrature(F&& trig, double osc_rate) const {
        auto breaks =
            bath::with_oscillation_chunks(bath::frequency_breakpoints(j_, ctx_), osc_rate);
        bath::QuadratureOptions opt;
        opt.abs_tol = tol_;
        return bath::integrate_adaptive(
            [&](double w) { return bath::spectral_value(j_, w) * trig(w); }, breaks, opt);
    }

    bath::SpectralDensity j_;
    bath::ThermalContext ctx_;
    double tol_;
};

} // namespace otoc::influence
