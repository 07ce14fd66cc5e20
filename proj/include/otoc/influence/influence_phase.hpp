#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "otoc/influence/kernel.hpp"
#include "otoc/influence/trajectory.hpp"

namespace otoc::influence {

namespace detail {

/// Union of the two trajectories' segment boundaries.
inline std::vector<double> merged_edges(const std::vector<const PiecewiseTrajectory*>& trajs) {
    std::vector<double> edges;
    for (const auto* tr : trajs) {
        for (const Segment& s : tr->segments()) {
            edges.push_back(s.t0);
            edges.push_back(s.t1);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                edges.end());
    return edges;
}

inline void check_equal_span(double a, double b, const char* what) {
    if (std::abs(a - b) > 1e-10) {
        throw std::invalid_argument(std::string(what) + ": trajectory spans differ");
    }
}

} // namespace detail

/// Thermal-bath influence phase for one forward/backward trajectory pair:
///   Phi^B_t[z, z'] = int_0^t dt' int_0^t' dt''
///       (z(t') - z'(t')) (K(t'-t'') z(t'') - K*(t'-t'') z'(t'')),
/// with the kernel K = conj(xi_J) (see BathKernel). For piecewise-constant
/// trajectories the double integral decomposes exactly into kernel integrals
/// over segment rectangles and triangles.
inline Complex phi_B(const PiecewiseTrajectory& z, const PiecewiseTrajectory& zp,
                     const BathKernel& kernel) {
    detail::check_equal_span(z.span(), zp.span(), "phi_B");
    const auto edges = detail::merged_edges({&z, &zp});
    const std::size_t m = edges.size() < 2 ? 0 : edges.size() - 1;
    std::vector<double> zv(m), zpv(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double mid = 0.5 * (edges[i] + edges[i + 1]);
        zv[i] = z.value_at(mid);
        zpv[i] = zp.value_at(mid);
    }
    Complex phi(0.0, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double di = zv[i] - zpv[i];
        if (di == 0.0) continue;
        for (std::size_t j = 0; j <= i; ++j) {
            const Complex r = (j == i)
                                  ? kernel.tri_integral(edges[i], edges[i + 1])
                                  : kernel.rect_integral(edges[i], edges[i + 1], edges[j],
                                                         edges[j + 1]);
            phi += di * (r * zv[j] - std::conj(r) * zpv[j]);
        }
    }
    return phi;
}

/// Influence phase of the full-reversal scheme, per site:
///   lambda^2 { Phi^B[n1,n2] + Phi^B[n3,n4] + cross },
/// where the cross coupling of the two forward/backward pairs is
///   int int (n1-n2)(t') K*(t'-t'') (n3-n4)(t'')
/// + int int (n3-n4)(t') K (t'-t'') (n1-n2)(t'').
/// The conjugation split of the cross terms (one K, one K*) is what matches
/// the exact Fock-space trace; with both terms unconjugated the phase of the
/// influence functional comes out wrong while its modulus is unchanged.
inline Complex phi_fbte(const PathConfiguration& cfg, const BathKernel& kernel,
                        double lambda) {
    const double t = cfg.branches[0].span();
    for (int i = 1; i < 4; ++i) detail::check_equal_span(t, cfg.branches[i].span(), "phi_fbte");

    const auto edges = detail::merged_edges(
        {&cfg.branches[0], &cfg.branches[1], &cfg.branches[2], &cfg.branches[3]});
    const std::size_t m = edges.size() < 2 ? 0 : edges.size() - 1;
    std::vector<std::array<double, 4>> vals(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double mid = 0.5 * (edges[i] + edges[i + 1]);
        for (int b = 0; b < 4; ++b) vals[i][static_cast<std::size_t>(b)] = cfg.branches[static_cast<std::size_t>(b)].value_at(mid);
    }
    Complex phi(0.0, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double d12_i = vals[i][0] - vals[i][1];
        const double d34_i = vals[i][2] - vals[i][3];
        if (d12_i == 0.0 && d34_i == 0.0) continue;
        for (std::size_t j = 0; j <= i; ++j) {
            const Complex r = (j == i)
                                  ? kernel.tri_integral(edges[i], edges[i + 1])
                                  : kernel.rect_integral(edges[i], edges[i + 1], edges[j],
                                                         edges[j + 1]);
            const Complex rc = std::conj(r);
            const double d12_j = vals[j][0] - vals[j][1];
            const double d34_j = vals[j][2] - vals[j][3];
            phi += d12_i * (r * vals[j][0] - rc * vals[j][1]);
            phi += d34_i * (r * vals[j][2] - rc * vals[j][3]);
            phi += d12_i * rc * d34_j + d34_i * r * d12_j;
        }
    }
    return lambda * lambda * phi;
}

/// Influence phase of the partial-reversal scheme, per site. The three
/// forward branches are windowed onto consecutive [0,t], [t,2t], [2t,3t]
/// slots of a single forward path of duration 3t; the backward branch runs
/// for the full 3t:
///   lambda^2 Phi^B_{3t}[ concat(n1, n2, n3), n4 ].
inline Complex phi_pbte(const PathConfiguration& cfg, const BathKernel& kernel,
                        double lambda) {
    const double t = cfg.branches[0].span();
    detail::check_equal_span(t, cfg.branches[1].span(), "phi_pbte");
    detail::check_equal_span(t, cfg.branches[2].span(), "phi_pbte");
    detail::check_equal_span(3.0 * t, cfg.branches[3].span(), "phi_pbte");
    if (t == 0.0) return Complex(0.0, 0.0);
    const PiecewiseTrajectory forward =
        cfg.branches[0].then(cfg.branches[1]).then(cfg.branches[2]);
    return lambda * lambda * phi_B(forward, cfg.branches[3], kernel);
}

} // namespace otoc::influence
