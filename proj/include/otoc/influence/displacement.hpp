#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "otoc/bath/quadrature.hpp"
#include "otoc/bath/spectral_density.hpp"
#include "otoc/core/eigensystem.hpp"
#include "otoc/core/errors.hpp"
#include "otoc/core/operator.hpp"
#include "otoc/influence/kernel.hpp"
#include "otoc/influence/trajectory.hpp"

namespace otoc::influence {

// --------------------------- Displacement argument ---------------------------

/// chi_t = -i lambda C sum_segments n_z int exp(i w t') dt', the displacement
/// accumulated by one mode driven by a piecewise-constant trajectory.
inline Complex chi_t(const PiecewiseTrajectory& traj, const model::BathMode& mode,
                     double lambda) {
    const double w = mode.omega;
    Complex acc(0.0, 0.0);
    for (const Segment& s : traj.segments()) {
        if (s.value == 0.0 || s.t1 == s.t0) continue;
        const Complex e1 = std::exp(Complex(0.0, w * s.t1));
        const Complex e0 = std::exp(Complex(0.0, w * s.t0));
        acc += s.value * (e1 - e0);
    }
    return -(lambda * mode.coupling / w) * acc;
}

// --------------------------- Dynamical phase ---------------------------------

/// xi phase of one mode: C^2 int int n_z(t') n_z(t'') sin(w (t'-t'')) over the
/// ordered double time domain (the generator of the spectral-density form
/// int J(w) ... dw).
inline double xi_phase_t(const PiecewiseTrajectory& traj, const model::BathMode& mode) {
    const auto& segs = traj.segments();
    double acc = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (segs[i].value == 0.0) continue;
        for (std::size_t j = 0; j <= i; ++j) {
            if (segs[j].value == 0.0) continue;
            const double s =
                (j == i) ? detail::tri_sin(mode.omega, segs[i].t1 - segs[i].t0)
                         : detail::rect_sin(mode.omega, segs[i].t0, segs[i].t1, segs[j].t0,
                                            segs[j].t1);
            acc += segs[i].value * segs[j].value * s;
        }
    }
    return mode.coupling * mode.coupling * acc;
}

/// Continuous-density version: int J(w) [segment sin-integrals] dw.
inline double xi_phase_t(const PiecewiseTrajectory& traj, const bath::SpectralDensity& j,
                         const bath::ThermalContext& ctx, double abs_tol = 1e-9) {
    const auto& segs = traj.segments();
    auto breaks =
        bath::with_oscillation_chunks(bath::frequency_breakpoints(j, ctx), traj.span());
    bath::QuadratureOptions opt;
    opt.abs_tol = abs_tol;
    return bath::integrate_adaptive(
        [&](double w) {
            double acc = 0.0;
            for (std::size_t i = 0; i < segs.size(); ++i) {
                if (segs[i].value == 0.0) continue;
                for (std::size_t k = 0; k <= i; ++k) {
                    if (segs[k].value == 0.0) continue;
                    const double s = (k == i)
                                         ? detail::tri_sin(w, segs[i].t1 - segs[i].t0)
                                         : detail::rect_sin(w, segs[i].t0, segs[i].t1,
                                                            segs[k].t0, segs[k].t1);
                    acc += segs[i].value * segs[k].value * s;
                }
            }
            return bath::spectral_value(j, w) * acc;
        },
        breaks, opt);
}

// --------------------------- Fock-space trace oracle --------------------------

namespace detail {

inline core::Matrix displacement_matrix(Complex chi, core::Index n_max) {
    // exp(chi a^dag - chi* a) = exp(-i H) with Hermitian H = i(chi a^dag - chi* a).
    const core::Matrix gen = Complex(0.0, 1.0) * (chi * core::creation(n_max) -
                                                  std::conj(chi) * core::annihilation(n_max));
    return core::matexp_unitary_mat(gen, 1.0);
}

inline Complex displacement_trace_at(const std::array<Complex, 4>& chi, double omega,
                                     double beta, core::Index n_max) {
    const core::State rho = core::thermal_state(core::FockSpace(n_max, omega), beta);
    const core::Matrix d1 = displacement_matrix(chi[0], n_max);
    const core::Matrix d2 = displacement_matrix(chi[1], n_max);
    const core::Matrix d3 = displacement_matrix(chi[2], n_max);
    const core::Matrix d4 = displacement_matrix(chi[3], n_max);
    const core::Matrix prod = d4.adjoint() * d3 * d2.adjoint() * d1;
    return core::trace_of_product_with(prod, rho.mat());
}

} // namespace detail

/// Tr( D^dag(chi4) D(chi3) D^dag(chi2) D(chi1) rho_th ) on a truncated Fock
/// space, with the cutoff doubled until the value is stable to 1e-10. Serves
/// as the independent oracle for the analytic influence-phase expressions.
inline Complex displacement_trace_oracle(const std::array<Complex, 4>& chi,
                                         const core::FockSpace& mode, double beta,
                                         double tol = 1e-10) {
    core::Index n = mode.n_max;
    Complex prev = detail::displacement_trace_at(chi, mode.omega, beta, n);
    for (; n <= 2048; ) {
        n *= 2;
        const Complex curr = detail::displacement_trace_at(chi, mode.omega, beta, n);
        if (std::abs(curr - prev) < tol) return curr;
        prev = curr;
    }
    throw numerical_error("displacement_trace_oracle: Fock truncation did not converge");
}

inline Complex displacement_trace_oracle(Complex chi, const core::FockSpace& mode,
                                         double beta, double tol = 1e-10) {
    return displacement_trace_oracle({chi, Complex(0.0, 0.0), Complex(0.0, 0.0),
                                      Complex(0.0, 0.0)},
                                     mode, beta, tol);
}

} // namespace otoc::influence
