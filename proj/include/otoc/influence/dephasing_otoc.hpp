#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "otoc/core/errors.hpp"
#include "otoc/core/operator.hpp"
#include "otoc/engines/scheme.hpp"
#include "otoc/influence/influence_phase.hpp"
#include "otoc/influence/kernel.hpp"
#include "otoc/model/spin_chain.hpp"

namespace otoc::influence {

/// Inputs of the discrete-path dephasing engine. The chain must commute with
/// every sz_k (diagonal in the product basis); rho_s is a 2^n density matrix
/// (only its diagonal enters, as the string of Pauli products closes on
/// itself); lambda_per_site optionally overrides the uniform coupling.
struct DephasingSetup {
    model::SpinChainSpec chain;
    model::ObservableSpec w, v;
    core::Matrix rho_s;
    double lambda = 0.0;
    std::vector<double> lambda_per_site;

    double site_lambda(int k) const {
        return lambda_per_site.empty() ? lambda
                                       : lambda_per_site[static_cast<std::size_t>(k)];
    }
};

namespace detail {

/// Flip mask and matrix elements of a Pauli product in the computational
/// basis. Site 0 is the most significant bit; bit 0 means sz = +1.
struct PauliString {
    int n_sites = 0;
    std::uint32_t flip_mask = 0;
    std::vector<model::ObservableFactor> factors;

    PauliString(const model::ObservableSpec& spec, int n) : n_sites(n), factors(spec.factors) {
        model::validate_observable(spec, n);
        for (const auto& f : factors) {
            if (f.axis != model::PauliAxis::z) {
                flip_mask |= site_bit(f.site);
            }
        }
    }

    std::uint32_t site_bit(int site) const {
        return 1u << static_cast<unsigned>(n_sites - 1 - site);
    }

    /// <ket ^ flip_mask | P | ket>
    Complex element(std::uint32_t ket) const {
        Complex c(1.0, 0.0);
        for (const auto& f : factors) {
            const int b = (ket & site_bit(f.site)) ? 1 : 0;
            switch (f.axis) {
                case model::PauliAxis::x: break;
                case model::PauliAxis::y: c *= Complex(0.0, b ? -1.0 : 1.0); break;
                case model::PauliAxis::z: c *= (b ? -1.0 : 1.0); break;
            }
        }
        return c;
    }
};

} // namespace detail

/// Per-site influence phases of all 16 constant branch-sign tuples at
/// coupling 1 (the phase scales as lambda^2). Tuple index bit layout:
/// b1 | b2<<1 | b3<<2 | b4<<3, with n_i = 1 - 2 b_i.
inline std::array<Complex, 16> constant_branch_phi_table(engines::Scheme scheme,
                                                         const BathKernel& kernel, double t) {
    std::array<Complex, 16> table{};
    if (t == 0.0) return table;
    for (int idx = 0; idx < 16; ++idx) {
        const std::array<double, 4> n = {1.0 - 2.0 * ((idx >> 0) & 1),
                                         1.0 - 2.0 * ((idx >> 1) & 1),
                                         1.0 - 2.0 * ((idx >> 2) & 1),
                                         1.0 - 2.0 * ((idx >> 3) & 1)};
        if (scheme == engines::Scheme::fbte) {
            table[static_cast<std::size_t>(idx)] =
                phi_fbte(PathConfiguration::constant_fbte(n, t), kernel, 1.0);
        } else if (scheme == engines::Scheme::pbte) {
            table[static_cast<std::size_t>(idx)] =
                phi_pbte(PathConfiguration::constant_pbte(n, t), kernel, 1.0);
        } else {
            throw std::invalid_argument("constant_branch_phi_table: open scheme required");
        }
    }
    return table;
}

/// Open-system OTOC of a sz-commuting chain by exact summation over the
/// product-basis path labels. With Pauli-product observables each label s4
/// fixes the whole label chain (s3, s2, s1), so the sum has 2^n terms:
///   F = sum_{s4} <s4|W'|s3><s3|V'|s2><s2|W|s1><s1|V|s4> rho(s4,s4)
///       * exp(i t (E4 - E3 + E2 - E1)) * exp(-sum_k lambda_k^2 Phi_k),
/// where Phi_k is the per-site influence phase of the branch signs the four
/// labels carry at site k. Branch-to-label assignment (s1 rightmost) and the
/// kernel conjugation are frozen against the joint-space engines.
inline Complex dephasing_otoc(engines::Scheme scheme, const DephasingSetup& setup,
                              const BathKernel& kernel, double t) {
    if (scheme == engines::Scheme::closed) {
        throw std::invalid_argument("dephasing_otoc: scheme must be fbte or pbte");
    }
    const std::string bad = model::non_commuting_term(setup.chain);
    if (!bad.empty()) {
        throw capability_error("dephasing_otoc: chain does not commute with sigma_z (" + bad +
                               ")");
    }
    const int n = setup.chain.n_sites;
    const core::Matrix h = model::build_chain_hamiltonian(setup.chain).mat();
    {
        core::Matrix offdiag = h;
        offdiag.diagonal().setZero();
        if (core::max_abs(offdiag) > 1e-12) {
            throw capability_error("dephasing_otoc: chain Hamiltonian not diagonal");
        }
    }
    const Eigen::VectorXd energy = h.diagonal().real();
    if (setup.rho_s.rows() != h.rows()) {
        throw std::invalid_argument("dephasing_otoc: rho_S dimension mismatch");
    }

    const auto phi = constant_branch_phi_table(scheme, kernel, t);
    const detail::PauliString w(setup.w, n), v(setup.v, n);

    const std::uint32_t dim = 1u << static_cast<unsigned>(n);
    Complex f(0.0, 0.0);
    for (std::uint32_t s4 = 0; s4 < dim; ++s4) {
        const Complex rho44 = setup.rho_s(s4, s4);
        const std::uint32_t s3 = s4 ^ w.flip_mask;
        const std::uint32_t s2 = s3 ^ v.flip_mask;
        const std::uint32_t s1 = s2 ^ w.flip_mask;
        const Complex coeff = std::conj(w.element(s4)) * std::conj(v.element(s3)) *
                              w.element(s1) * v.element(s4);

        Complex phi_sum(0.0, 0.0);
        for (int k = 0; k < n; ++k) {
            const std::uint32_t bit = 1u << static_cast<unsigned>(n - 1 - k);
            const int idx = ((s1 & bit) ? 1 : 0) | ((s2 & bit) ? 2 : 0) |
                            ((s3 & bit) ? 4 : 0) | ((s4 & bit) ? 8 : 0);
            const double lam = setup.site_lambda(k);
            phi_sum += lam * lam * phi[static_cast<std::size_t>(idx)];
        }
        const double dphase = t * (energy(static_cast<Eigen::Index>(s4)) -
                                   energy(static_cast<Eigen::Index>(s3)) +
                                   energy(static_cast<Eigen::Index>(s2)) -
                                   energy(static_cast<Eigen::Index>(s1)));
        f += coeff * rho44 * std::exp(Complex(0.0, dphase)) * std::exp(-phi_sum);
    }
    return f;
}

inline Complex dephasing_otoc(engines::Scheme scheme, const DephasingSetup& setup,
                              const bath::SpectralDensity& j, const bath::ThermalContext& ctx,
                              double t) {
    return dephasing_otoc(scheme, setup, OhmicBathKernel(j, ctx), t);
}

} // namespace otoc::influence
