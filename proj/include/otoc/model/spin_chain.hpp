#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "otoc/core/errors.hpp"
#include "otoc/core/operator.hpp"

namespace otoc::model {

using core::Complex;
using core::Index;
using core::Matrix;
using core::Operator;

enum class ChainFamily { ising_zz, transverse_ising, xxz, custom_diagonal };

inline const char* family_name(ChainFamily f) {
    switch (f) {
        case ChainFamily::ising_zz: return "ising_zz";
        case ChainFamily::transverse_ising: return "transverse_ising";
        case ChainFamily::xxz: return "xxz";
        case ChainFamily::custom_diagonal: return "custom_diagonal";
    }
    return "?";
}

/// Open spin-1/2 chain. couplings holds one value per bond (n_sites-1).
/// ising_zz:          H = sum J_k sz_k sz_{k+1} + sum hz_k sz_k
/// transverse_ising:  adds sum gx_k sx_k
/// xxz:               H = sum J_k (sx sx + sy sy + aniso * sz sz) + sum hz_k sz_k
/// custom_diagonal:   explicit 2^n diagonal if given, else the ising_zz form
struct SpinChainSpec {
    int n_sites = 1;
    ChainFamily family = ChainFamily::ising_zz;
    std::vector<double> couplings;
    std::vector<double> fields_z;
    std::vector<double> fields_x;
    double anisotropy = 1.0;
    std::vector<double> diagonal;
};

enum class PauliAxis { x, y, z };

struct ObservableFactor {
    int site = 0;
    PauliAxis axis = PauliAxis::x;
};

/// Tensor product of single-site Paulis; identity when empty.
struct ObservableSpec {
    std::vector<ObservableFactor> factors;
};

// --------------------------- Validation --------------------------------------

inline void validate_chain(const SpinChainSpec& spec) {
    if (spec.n_sites < 1) throw std::invalid_argument("chain: n_sites must be >= 1");
    const std::size_t n = static_cast<std::size_t>(spec.n_sites);
    const std::size_t bonds = n - 1;
    auto check_len = [&](const std::vector<double>& v, std::size_t len, const char* what) {
        if (!v.empty() && v.size() != len) {
            throw std::invalid_argument(std::string("chain: ") + what + " must have " +
                                        std::to_string(len) + " entries, got " +
                                        std::to_string(v.size()));
        }
    };
    check_len(spec.couplings, bonds, "couplings");
    check_len(spec.fields_z, n, "fields_z");
    check_len(spec.fields_x, n, "fields_x");
    if (spec.family == ChainFamily::custom_diagonal && !spec.diagonal.empty()) {
        if (spec.diagonal.size() != (std::size_t{1} << n)) {
            throw std::invalid_argument("chain: diagonal must have 2^n_sites entries");
        }
    }
    if (spec.family != ChainFamily::transverse_ising && !spec.fields_x.empty()) {
        for (double g : spec.fields_x) {
            if (g != 0.0) {
                throw std::invalid_argument("chain: fields_x only valid for transverse_ising");
            }
        }
    }
}

inline void validate_observable(const ObservableSpec& obs, int n_sites) {
    std::vector<bool> seen(static_cast<std::size_t>(n_sites), false);
    for (const auto& f : obs.factors) {
        if (f.site < 0 || f.site >= n_sites) {
            throw std::invalid_argument("observable: site " + std::to_string(f.site) +
                                        " out of range for " + std::to_string(n_sites) +
                                        " sites");
        }
        if (seen[static_cast<std::size_t>(f.site)]) {
            throw std::invalid_argument("observable: duplicate site " + std::to_string(f.site));
        }
        seen[static_cast<std::size_t>(f.site)] = true;
    }
}

// --------------------------- Construction ------------------------------------

inline std::vector<Index> chain_dims(int n_sites) {
    return std::vector<Index>(static_cast<std::size_t>(n_sites), 2);
}

/// Pauli at one site of the chain, identity elsewhere. Site 0 is the leftmost
/// tensor factor; sz|0> = +|0>.
inline Matrix site_pauli(int n_sites, int site, PauliAxis axis) {
    Matrix p;
    switch (axis) {
        case PauliAxis::x: p = core::sigma_x(); break;
        case PauliAxis::y: p = core::sigma_y(); break;
        case PauliAxis::z: p = core::sigma_z(); break;
    }
    return core::embed_product(chain_dims(n_sites),
                               {{static_cast<std::size_t>(site), &p}});
}

inline Operator local_operator(int n_sites, const ObservableSpec& obs,
                               std::size_t dim_cap = default_dim_cap) {
    validate_observable(obs, n_sites);
    const std::size_t dim = std::size_t{1} << static_cast<std::size_t>(n_sites);
    if (dim > dim_cap) {
        throw dimension_cap_error("local_operator: 2^" + std::to_string(n_sites) +
                                  " exceeds cap");
    }
    const auto dims = chain_dims(n_sites);
    Matrix acc = Matrix::Identity(static_cast<Index>(dim), static_cast<Index>(dim));
    bool first = true;
    for (const auto& f : obs.factors) {
        const Matrix m = site_pauli(n_sites, f.site, f.axis);
        acc = first ? m : Matrix(acc * m);
        first = false;
    }
    return Operator(std::move(acc), dims);
}

inline Operator build_chain_hamiltonian(const SpinChainSpec& spec,
                                        std::size_t dim_cap = default_dim_cap) {
    validate_chain(spec);
    const int n = spec.n_sites;
    const std::size_t dim = std::size_t{1} << static_cast<std::size_t>(n);
    if (dim > dim_cap) {
        throw dimension_cap_error("build_chain_hamiltonian: 2^" + std::to_string(n) +
                                  " exceeds cap " + std::to_string(dim_cap));
    }
    const auto dims = chain_dims(n);
    Matrix h = Matrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));

    if (spec.family == ChainFamily::custom_diagonal && !spec.diagonal.empty()) {
        for (std::size_t i = 0; i < dim; ++i) h(static_cast<Index>(i), static_cast<Index>(i)) = spec.diagonal[i];
        return Operator(std::move(h), dims);
    }

    auto coupling = [&](int bond) {
        return spec.couplings.empty() ? 0.0 : spec.couplings[static_cast<std::size_t>(bond)];
    };
    auto field_z = [&](int site) {
        return spec.fields_z.empty() ? 0.0 : spec.fields_z[static_cast<std::size_t>(site)];
    };
    auto field_x = [&](int site) {
        return spec.fields_x.empty() ? 0.0 : spec.fields_x[static_cast<std::size_t>(site)];
    };

    const Matrix sx = core::sigma_x(), sy = core::sigma_y(), sz = core::sigma_z();
    for (int b = 0; b + 1 < n; ++b) {
        const double jb = coupling(b);
        if (jb == 0.0) continue;
        auto bond_term = [&](const Matrix& p) {
            return core::embed_product(dims, {{static_cast<std::size_t>(b), &p},
                                              {static_cast<std::size_t>(b + 1), &p}});
        };
        switch (spec.family) {
            case ChainFamily::ising_zz:
            case ChainFamily::transverse_ising:
            case ChainFamily::custom_diagonal:
                h += jb * bond_term(sz);
                break;
            case ChainFamily::xxz:
                h += jb * (bond_term(sx) + bond_term(sy) + spec.anisotropy * bond_term(sz));
                break;
        }
    }
    for (int k = 0; k < n; ++k) {
        if (field_z(k) != 0.0) h += field_z(k) * site_pauli(n, k, PauliAxis::z);
        if (spec.family == ChainFamily::transverse_ising && field_x(k) != 0.0) {
            h += field_x(k) * site_pauli(n, k, PauliAxis::x);
        }
    }
    return Operator(std::move(h), dims);
}

// --------------------------- Commutation gate ---------------------------------

/// A chain commutes with every sz_k exactly when its Hamiltonian is diagonal
/// in the product basis. Returns an empty string if so, otherwise a
/// description of the offending term (for capability errors).
inline std::string non_commuting_term(const SpinChainSpec& spec) {
    validate_chain(spec);
    switch (spec.family) {
        case ChainFamily::ising_zz:
        case ChainFamily::custom_diagonal:
            return {};
        case ChainFamily::transverse_ising:
            for (std::size_t k = 0; k < spec.fields_x.size(); ++k) {
                if (spec.fields_x[k] != 0.0) {
                    return "transverse field fields_x[" + std::to_string(k) + "]=" +
                           std::to_string(spec.fields_x[k]);
                }
            }
            return {};
        case ChainFamily::xxz:
            for (std::size_t b = 0; b < spec.couplings.size(); ++b) {
                if (spec.couplings[b] != 0.0) {
                    return "xxz exchange couplings[" + std::to_string(b) + "]=" +
                           std::to_string(spec.couplings[b]);
                }
            }
            return {};
    }
    return {};
}

inline bool is_sigma_z_commuting(const SpinChainSpec& spec) {
    return non_commuting_term(spec).empty();
}

} // namespace otoc::model
