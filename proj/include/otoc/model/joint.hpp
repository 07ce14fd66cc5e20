#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "otoc/core/errors.hpp"
#include "otoc/core/operator.hpp"
#include "otoc/model/bath_discretization.hpp"
#include "otoc/model/spin_chain.hpp"

namespace otoc::model {

enum class JointVariant {
    forward,         // H_S + H_E + H_SE
    system_reversed, // -H_S + H_E + H_SE, so exp(-i * H * t) reverses only the system
};

/// Joint-space tensor ordering: chain sites first, then site-0 modes, site-1
/// modes, ... Every site carries the same per-site mode list.
inline std::vector<core::Index> joint_dims(int n_sites, int modes_per_site, int n_max) {
    std::vector<core::Index> dims(static_cast<std::size_t>(n_sites), 2);
    for (int k = 0; k < n_sites * modes_per_site; ++k) {
        dims.push_back(static_cast<core::Index>(n_max));
    }
    return dims;
}

/// log2 of the joint dimension, safe against overflow.
inline double joint_log2_dim(int n_sites, int modes_per_site, int n_max) {
    return static_cast<double>(n_sites) +
           static_cast<double>(n_sites) * modes_per_site * std::log2(static_cast<double>(n_max));
}

inline void check_joint_dim(int n_sites, int modes_per_site, int n_max,
                            std::size_t dim_cap = default_dim_cap) {
    if (joint_log2_dim(n_sites, modes_per_site, n_max) >
        std::log2(static_cast<double>(dim_cap)) + 1e-9) {
        throw dimension_cap_error(
            "joint dimension 2^" + std::to_string(n_sites) + " * " + std::to_string(n_max) +
            "^" + std::to_string(n_sites * modes_per_site) + " exceeds cap " +
            std::to_string(dim_cap));
    }
}

/// H_S + H_E + H_SE on the truncated joint space (or the system-reversed
/// variant). H_E = sum w_j n_j per mode; H_SE couples each site's sz to
/// lambda_k * sum_j C_j (a + a^dag) of its own modes.
inline core::Operator assemble_joint(const core::Operator& chain, const BathSpec& bath,
                                     JointVariant variant, int n_max_override = 0,
                                     std::size_t dim_cap = default_dim_cap) {
    const int n_sites = static_cast<int>(chain.subsystem_dims().size());
    for (core::Index d : chain.subsystem_dims()) {
        if (d != 2) throw std::invalid_argument("assemble_joint: chain factors must be qubits");
    }
    const auto modes = bath_modes(bath);
    const int m = static_cast<int>(modes.size());
    const int n_max = n_max_override > 0 ? n_max_override : bath.n_max;
    if (n_max < 2) throw std::invalid_argument("assemble_joint: n_max must be >= 2");
    check_joint_dim(n_sites, m, n_max, dim_cap);

    const auto dims = joint_dims(n_sites, m, n_max);
    core::Index dim = 1;
    for (core::Index d : dims) dim *= d;

    const double sys_sign = (variant == JointVariant::system_reversed) ? -1.0 : 1.0;
    const core::Index env_dim = dim / chain.dim();
    core::Matrix h =
        sys_sign * core::kron_mat(chain.mat(), core::Matrix::Identity(env_dim, env_dim));

    const core::Matrix num = core::number_operator(n_max);
    const core::Matrix pos = core::annihilation(n_max) + core::creation(n_max);
    const core::Matrix sz = core::sigma_z();
    for (int k = 0; k < n_sites; ++k) {
        const double lam = bath.site_lambda(k);
        for (int j = 0; j < m; ++j) {
            const std::size_t slot = static_cast<std::size_t>(n_sites + k * m + j);
            h += modes[static_cast<std::size_t>(j)].omega *
                 core::embed_product(dims, {{slot, &num}});
            const double g = lam * modes[static_cast<std::size_t>(j)].coupling;
            if (g != 0.0) {
                h += g * core::embed_product(dims, {{static_cast<std::size_t>(k), &sz},
                                                    {slot, &pos}});
            }
        }
    }
    return core::Operator(std::move(h), dims);
}

/// Product thermal state of all modes of all sites.
inline core::State environment_thermal_state(const BathSpec& bath, int n_sites,
                                             int n_max_override = 0) {
    const auto modes = bath_modes(bath);
    const int n_max = n_max_override > 0 ? n_max_override : bath.n_max;
    core::Matrix rho = core::Matrix::Identity(1, 1);
    std::vector<core::Index> dims;
    for (int k = 0; k < n_sites; ++k) {
        for (const BathMode& mode : modes) {
            const core::State th =
                core::thermal_state(core::FockSpace(n_max, mode.omega), bath.beta);
            rho = core::kron_mat(rho, th.mat());
            dims.push_back(n_max);
        }
    }
    return core::State::trusted(core::Operator(std::move(rho), std::move(dims)));
}

/// V_S -> V_S (x) I_E on the joint space.
inline core::Matrix lift_to_joint(const core::Matrix& chain_op, core::Index joint_dim) {
    const core::Index env_dim = joint_dim / chain_op.rows();
    return core::kron_mat(chain_op, core::Matrix::Identity(env_dim, env_dim));
}

} // namespace otoc::model
