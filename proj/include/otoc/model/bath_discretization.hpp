#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "otoc/bath/spectral_density.hpp"
#include "otoc/core/errors.hpp"

namespace otoc::model {

/// One discretized environment mode: frequency and real coupling amplitude,
/// with J(w) = sum_j C_j^2 delta(w - w_j).
struct BathMode {
    double omega = 1.0;
    double coupling = 0.0;
};

/// Per-site environment specification. The same mode set is attached to every
/// site. explicit_modes overrides the spectral-density discretization when
/// non-empty. lambda is the uniform site-environment coupling; lambda_per_site
/// may override it per site (the bounds module requires uniformity).
struct BathSpec {
    bath::SpectralDensity spectral{1.0, 1.0};
    double lambda = 0.0;
    std::vector<double> lambda_per_site;
    double beta = 1.0;
    int modes_per_site = 1;
    int n_max = 8;
    double omega_max = 0.0; // <= 0: use 10 * cutoff
    std::vector<BathMode> explicit_modes;

    double effective_omega_max() const {
        return omega_max > 0.0 ? omega_max : 10.0 * spectral.cutoff;
    }
    double site_lambda(int k) const {
        return lambda_per_site.empty() ? lambda
                                       : lambda_per_site[static_cast<std::size_t>(k)];
    }
};

// --------------------------- Gauss-Legendre nodes -----------------------------

/// Nodes and weights on [-1, 1] via Golub-Welsch (symmetric tridiagonal
/// eigenproblem of the Jacobi matrix).
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jac(k - 1, k) = b;
        jac(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    if (es.info() != Eigen::Success) throw numerical_error("gauss_legendre: eigensolver failed");
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        nodes[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        weights[static_cast<std::size_t>(k)] = 2.0 * v0 * v0;
    }
}

// --------------------------- Discretization -----------------------------------

/// Gauss-Legendre discretization of J on (0, omega_max]: nodes w_j, couplings
/// C_j^2 = J(w_j) * weight_j, so sum_j C_j^2 f(w_j) ~ int J(w) f(w) dw.
inline std::vector<BathMode> discretize_bath(const bath::SpectralDensity& j, int m,
                                             double omega_max) {
    if (m < 1) throw std::invalid_argument("discretize_bath: mode count must be >= 1");
    if (!(omega_max > 0.0)) throw std::invalid_argument("discretize_bath: omega_max must be > 0");
    std::vector<double> x, w;
    gauss_legendre(m, x, w);
    std::vector<BathMode> modes(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const double omega = 0.5 * omega_max * (x[static_cast<std::size_t>(k)] + 1.0);
        const double weight = 0.5 * omega_max * w[static_cast<std::size_t>(k)];
        modes[static_cast<std::size_t>(k)] = {omega,
                                              std::sqrt(bath::spectral_value(j, omega) * weight)};
    }
    return modes;
}

/// The mode set a BathSpec describes: explicit modes if given, otherwise the
/// Gauss-Legendre discretization of its spectral density.
inline std::vector<BathMode> bath_modes(const BathSpec& spec) {
    if (!spec.explicit_modes.empty()) return spec.explicit_modes;
    return discretize_bath(spec.spectral, spec.modes_per_site, spec.effective_omega_max());
}

} // namespace otoc::model
