#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "otoc/core/eigensystem.hpp"
#include "otoc/core/errors.hpp"
#include "otoc/core/operator.hpp"
#include "otoc/core/parallel.hpp"
#include "otoc/engines/scheme.hpp"
#include "otoc/model/joint.hpp"
#include "otoc/model/spin_chain.hpp"

namespace otoc::engines {

using core::Complex;
using core::Index;
using core::Matrix;

// --------------------------- Closed system -----------------------------------

/// F_t(V, W) = Tr(W_t^dag V^dag W_t V rho) with W_t = exp(itH) W exp(-itH).
inline Complex closed_otoc(const core::HermitianEigensystem& eig, const Matrix& w,
                           const Matrix& v, const Matrix& rho, double t) {
    const Matrix u = eig.unitary(t);
    const Matrix wt = u.adjoint() * w * u;
    const Matrix a = wt.adjoint() * v.adjoint() * wt * v;
    return core::trace_of_product_with(a, rho);
}

inline Complex closed_otoc(const core::Operator& h_s, const core::Operator& w,
                           const core::Operator& v, const core::State& rho_s, double t) {
    if (w.dim() != h_s.dim() || v.dim() != h_s.dim() || rho_s.dim() != h_s.dim()) {
        throw std::invalid_argument("closed_otoc: dimension mismatch");
    }
    core::HermitianEigensystem eig(h_s.mat());
    return closed_otoc(eig, w.mat(), v.mat(), rho_s.mat(), t);
}

// --------------------------- Joint-space model --------------------------------

/// Everything the open-system engines need at a fixed Fock truncation:
/// forward and system-reversed joint Hamiltonians (eigendecomposed once so a
/// whole time grid reuses them), lifted observables and the product initial
/// state.
struct JointModel {
    Index dim = 0;
    int n_max = 0;
    Matrix w_full, v_full;
    Matrix rho_joint;
    std::shared_ptr<const core::HermitianEigensystem> eig_forward;
    std::shared_ptr<const core::HermitianEigensystem> eig_reversed;
};

inline JointModel make_joint_model(const model::SpinChainSpec& chain_spec,
                                   const model::BathSpec& bath,
                                   const model::ObservableSpec& w_spec,
                                   const model::ObservableSpec& v_spec,
                                   const core::State& rho_s, int n_max_override = 0,
                                   std::size_t dim_cap = default_dim_cap,
                                   bool need_reversed = true) {
    const core::Operator h_s = model::build_chain_hamiltonian(chain_spec, dim_cap);
    const core::Operator h_fwd =
        model::assemble_joint(h_s, bath, model::JointVariant::forward, n_max_override, dim_cap);

    JointModel m;
    m.dim = h_fwd.dim();
    m.n_max = n_max_override > 0 ? n_max_override : bath.n_max;
    m.w_full = model::lift_to_joint(
        model::local_operator(chain_spec.n_sites, w_spec, dim_cap).mat(), m.dim);
    m.v_full = model::lift_to_joint(
        model::local_operator(chain_spec.n_sites, v_spec, dim_cap).mat(), m.dim);

    if (rho_s.dim() != h_s.dim()) {
        throw std::invalid_argument("make_joint_model: rho_S dimension mismatch");
    }
    const core::State rho_e =
        model::environment_thermal_state(bath, chain_spec.n_sites, n_max_override);
    m.rho_joint = core::kron_mat(rho_s.mat(), rho_e.mat());

    m.eig_forward = std::make_shared<core::HermitianEigensystem>(h_fwd.mat());
    if (need_reversed) {
        const core::Operator h_rev = model::assemble_joint(
            h_s, bath, model::JointVariant::system_reversed, n_max_override, dim_cap);
        m.eig_reversed = std::make_shared<core::HermitianEigensystem>(h_rev.mat());
    }
    return m;
}

// --------------------------- Open-system engines -------------------------------

/// Full backward time evolution:
///   F = Tr(U^dag W^dag U V^dag U^dag W U V rho_SE), U = exp(-i H_SE t).
inline Complex fbte_otoc(const JointModel& m, double t) {
    const Matrix u = m.eig_forward->unitary(t);
    const Matrix ud = u.adjoint();
    Matrix a = ud * m.w_full.adjoint();
    a = a * u;
    a = a * m.v_full.adjoint();
    a = a * ud;
    a = a * m.w_full;
    a = a * u;
    a = a * m.v_full;
    return core::trace_of_product_with(a, m.rho_joint);
}

/// Partial backward time evolution: only the system Hamiltonian is negated.
/// With U* = exp(i(H_S - H_E - H_SE)t) and U*^dag its adjoint, the trace
/// string is evaluated verbatim, including the three-operator prefix:
///   F = Tr(U^dag U*^dag U^dag W^dag U V^dag U* W U V rho_SE).
inline Complex pbte_otoc(const JointModel& m, double t) {
    if (!m.eig_reversed) {
        throw std::invalid_argument("pbte_otoc: model built without the reversed eigensystem");
    }
    const Matrix u = m.eig_forward->unitary(t);
    const Matrix ud = u.adjoint();
    const Matrix u_star = m.eig_reversed->unitary(t); // U_{S^dag E}
    const Matrix u_star_dag = u_star.adjoint();
    Matrix a = ud * u_star_dag;
    a = a * ud;
    a = a * m.w_full.adjoint();
    a = a * u;
    a = a * m.v_full.adjoint();
    a = a * u_star;
    a = a * m.w_full;
    a = a * u;
    a = a * m.v_full;
    return core::trace_of_product_with(a, m.rho_joint);
}

// --------------------------- Series evaluation --------------------------------

struct TruncationReport {
    int n_max_requested = 0;
    int n_max_used = 0;
    double max_abs_change = 0.0;
    bool converged = true;
    int doublings = 0;
};

struct SystemSetup {
    model::SpinChainSpec chain;
    model::ObservableSpec w, v;
    core::State rho_s;
};

struct OTOCSeries {
    std::vector<double> times;
    std::vector<Complex> values;
    Scheme scheme = Scheme::closed;
    // Run provenance: what was evaluated, and how far the Fock truncation had
    // to go for it.
    model::SpinChainSpec chain;
    model::ObservableSpec w, v;
    std::optional<model::BathSpec> bath;
    TruncationReport truncation;
};

inline constexpr double truncation_gate_tol = 1e-8;
inline constexpr int truncation_n_max_ceiling = 1024;

namespace detail {

inline std::vector<Complex> evaluate_open_grid(Scheme scheme, const SystemSetup& setup,
                                               const model::BathSpec& bath, int n_max,
                                               const std::vector<double>& times,
                                               std::size_t dim_cap) {
    const JointModel m = make_joint_model(setup.chain, bath, setup.w, setup.v, setup.rho_s,
                                          n_max, dim_cap, scheme == Scheme::pbte);
    std::vector<Complex> out(times.size());
    core::parallel_for_index(times.size(), [&](std::size_t i) {
        out[i] = scheme == Scheme::fbte ? fbte_otoc(m, times[i]) : pbte_otoc(m, times[i]);
    });
    return out;
}

} // namespace detail

/// Evaluates an OTOC over a time grid, reusing one eigendecomposition per
/// Hamiltonian. Open schemes run the Fock-truncation doubling gate: results
/// at n_max and 2 n_max must agree to 1e-8 over the whole grid, doubling
/// again otherwise up to the ceiling; the converged (doubled) values are
/// returned.
inline OTOCSeries otoc_series(Scheme scheme, const SystemSetup& setup,
                              const std::optional<model::BathSpec>& bath,
                              std::vector<double> times,
                              std::size_t dim_cap = default_dim_cap) {
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        if (!(times[i] < times[i + 1])) {
            throw std::invalid_argument("otoc_series: times must be strictly ascending");
        }
    }
    if (!times.empty() && times.front() < 0.0) {
        throw std::invalid_argument("otoc_series: times must be non-negative");
    }

    OTOCSeries series;
    series.scheme = scheme;
    series.times = std::move(times);
    series.values.resize(series.times.size());
    series.chain = setup.chain;
    series.w = setup.w;
    series.v = setup.v;
    series.bath = bath;

    if (scheme == Scheme::closed) {
        const core::Operator h_s = model::build_chain_hamiltonian(setup.chain, dim_cap);
        const core::HermitianEigensystem eig(h_s.mat());
        const Matrix w = model::local_operator(setup.chain.n_sites, setup.w, dim_cap).mat();
        const Matrix v = model::local_operator(setup.chain.n_sites, setup.v, dim_cap).mat();
        core::parallel_for_index(series.times.size(), [&](std::size_t i) {
            series.values[i] = closed_otoc(eig, w, v, setup.rho_s.mat(), series.times[i]);
        });
        return series;
    }

    if (!bath) throw std::invalid_argument("otoc_series: open scheme requires a bath");
    int base = bath->n_max;
    series.truncation.n_max_requested = base;
    std::vector<Complex> prev =
        detail::evaluate_open_grid(scheme, setup, *bath, base, series.times, dim_cap);
    for (int doublings = 1;; ++doublings) {
        const int next = 2 * base;
        if (next > truncation_n_max_ceiling) {
            throw numerical_error("otoc_series: Fock truncation did not converge below "
                                  "n_max ceiling " + std::to_string(truncation_n_max_ceiling));
        }
        std::vector<Complex> curr =
            detail::evaluate_open_grid(scheme, setup, *bath, next, series.times, dim_cap);
        double dev = 0.0;
        for (std::size_t i = 0; i < curr.size(); ++i) {
            dev = std::max(dev, std::abs(curr[i] - prev[i]));
        }
        if (dev < truncation_gate_tol) {
            series.values = std::move(curr);
            series.truncation.n_max_used = next;
            series.truncation.max_abs_change = dev;
            series.truncation.converged = true;
            series.truncation.doublings = doublings;
            return series;
        }
        prev = std::move(curr);
        base = next;
    }
}

} // namespace otoc::engines
