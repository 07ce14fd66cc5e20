#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "otoc/bounds/bounds.hpp"

using namespace otoc;
using bounds::BoundParams;

namespace {

BoundParams figure_params(double s, double kT) {
    BoundParams p;
    p.lambda = 0.1;
    p.n_sites = 20;
    p.spectral = bath::SpectralDensity(s, 1.0);
    p.thermal = bath::ThermalContext(1.0 / kT);
    return p;
}

} // namespace

TEST_CASE("bound factors at t = 0 and lambda = 0") {
    BoundParams p = figure_params(1.0, 1e-2);
    CHECK(bounds::fbte_bound_factor(p, 0.0) == 1.0);
    CHECK(bounds::pbte_bound_factor(p, 0.0) == 1.0);
    CHECK(bounds::difference_bound(p, 0.0) == 0.0);
    p.lambda = 0.0;
    for (double t : {0.5, 2.0}) {
        CHECK(bounds::fbte_bound_factor(p, t) == 1.0);
        CHECK(bounds::pbte_bound_factor(p, t) == 1.0);
        CHECK(bounds::difference_bound(p, t) == 0.0);
    }
}

TEST_CASE("exponent relations hold by construction and D paths cross-check") {
    const BoundParams p = figure_params(1.0, 1e-2);
    const double t = 5.0;
    const auto method = bounds::select_d_method(p.spectral, p.thermal);
    CHECK(method == bounds::DMethod::closed_s1);
    const double d = bounds::eval_dephasing_d(p.spectral, p.thermal, t, method);
    CHECK(std::log(bounds::fbte_bound_factor(p, t)) ==
          doctest::Approx(-4.0 * 0.01 * 20.0 * d).epsilon(1e-12));
    const double d3 = bounds::eval_dephasing_d(p.spectral, p.thermal, 3.0 * t, method);
    CHECK(std::log(bounds::pbte_bound_factor(p, t)) ==
          doctest::Approx(-0.01 * 20.0 * d3).epsilon(1e-12));

    // Closed form against quadrature in the low-temperature regime.
    const double d_quad =
        bounds::eval_dephasing_d(p.spectral, p.thermal, t, bounds::DMethod::quadrature_spectral);
    CHECK(std::abs(d - d_quad) / d_quad < 1e-3);
}

TEST_CASE("method selection per regime") {
    CHECK(bounds::select_d_method(bath::SpectralDensity(1.0, 1.0), bath::ThermalContext(100.0)) ==
          bounds::DMethod::closed_s1);
    CHECK(bounds::select_d_method(bath::SpectralDensity(1.0, 1.0), bath::ThermalContext(1.0)) ==
          bounds::DMethod::quadrature_spectral);
    CHECK(bounds::select_d_method(bath::SpectralDensity(2.0, 1.0), bath::ThermalContext(1.0)) ==
          bounds::DMethod::closed_digamma);
    CHECK(bounds::select_d_method(bath::SpectralDensity(3.0, 1.0), bath::ThermalContext(1.0)) ==
          bounds::DMethod::closed_zeta);
    CHECK(bounds::select_d_method(bath::SpectralDensity(1.5, 1.0), bath::ThermalContext(1.0)) ==
          bounds::DMethod::quadrature_spectral);
}

TEST_CASE("superohmic partial-reversal bound is tighter beyond the quadratic regime") {
    for (double kT : {1e-2, 1.0}) {
        const BoundParams p = figure_params(3.0, kT);
        for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
            CHECK(bounds::pbte_bound_factor(p, t) >= bounds::fbte_bound_factor(p, t));
        }
    }
}

TEST_CASE("at short times the ordering reverses: D(3t)/D(t) approaches 9") {
    // Both exponents are quadratic in t as t -> 0, so the 3t substitution
    // outweighs the full-reversal prefactor 4 there; the tightness claim
    // starts at the crossover (t ~ 0.3 for these panels).
    for (double kT : {1e-2, 1.0}) {
        const BoundParams p = figure_params(3.0, kT);
        CHECK(bounds::pbte_bound_factor(p, 0.1) < bounds::fbte_bound_factor(p, 0.1));
        const double d1 = bounds::eval_dephasing_d(p.spectral, p.thermal, 0.01,
                                                   bounds::DMethod::closed_zeta);
        const double d3 = bounds::eval_dephasing_d(p.spectral, p.thermal, 0.03,
                                                   bounds::DMethod::closed_zeta);
        CHECK(d3 / d1 == doctest::Approx(9.0).epsilon(5e-3));
    }
}

TEST_CASE("ohmic long-time exponent ratio approaches 3/4") {
    const BoundParams p = figure_params(1.0, 1e-2);
    const double t = 1000.0 * p.thermal.thermal_time();
    const double d1 = bath::dephasing_closed_s1(1.0, p.thermal, t);
    const double d3 = bath::dephasing_closed_s1(1.0, p.thermal, 3.0 * t);
    CHECK(std::abs(d3 / (4.0 * d1) - 0.75) < 0.01);
}

TEST_CASE("difference bound crossing time brackets the unit level") {
    const BoundParams p = figure_params(1.0, 1e-2);
    const double t_star = bounds::difference_bound_crossing_time(p, 10.0);
    CHECK(t_star > 0.0);
    CHECK(t_star < 10.0);
    CHECK(bounds::difference_bound(p, 0.9 * t_star) < 1.0);
    CHECK(bounds::difference_bound(p, 1.1 * t_star) > 1.0);
}

TEST_CASE("superohmic dephasing integral overshoots and partially recovers") {
    // For s = 3 at low temperature, dD/dt ~ (3t - t^3)/(1 + t^2)^3 changes
    // sign at t = sqrt(3): D peaks and relaxes to its saturation value, so
    // the bound factors are not monotone on superohmic panels.
    const bath::SpectralDensity j(3.0, 1.0);
    const bath::ThermalContext ctx(100.0);
    const double peak = bath::dephasing_closed_s_gt1(j, ctx, std::sqrt(3.0));
    const double late = bath::dephasing_closed_s_gt1(j, ctx, 20.0);
    const double early = bath::dephasing_closed_s_gt1(j, ctx, 0.5);
    CHECK(peak > late);
    CHECK(peak > early);
    CHECK(bounds::fbte_bound_factor(figure_params(3.0, 1e-2), 10.0) >
          bounds::fbte_bound_factor(figure_params(3.0, 1e-2), std::sqrt(3.0)));
}

TEST_CASE("bound series on a trivial grid") {
    const BoundParams p = figure_params(3.0, 1.0);
    const auto s = bounds::bound_series(p, {0.0});
    CHECK(s.fbte_factor[0] == 1.0);
    CHECK(s.pbte_factor[0] == 1.0);
    CHECK(s.diff_bound[0] == 0.0);
    CHECK(s.d_t[0] == 0.0);
}

TEST_CASE("bound series columns behave over a uniform grid") {
    const BoundParams p = figure_params(1.0, 1e-2);
    std::vector<double> times(41);
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = 10.0 * i / 40.0;
    const auto s = bounds::bound_series(p, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(s.fbte_factor[i] > 0.0);
        CHECK(s.fbte_factor[i] <= 1.0);
        CHECK(s.pbte_factor[i] > 0.0);
        CHECK(s.pbte_factor[i] <= 1.0);
        if (i > 0) {
            CHECK(s.fbte_factor[i] <= s.fbte_factor[i - 1] + 1e-12);
            CHECK(s.pbte_factor[i] <= s.pbte_factor[i - 1] + 1e-12);
        }
    }
    // Table-backed difference bound against the direct nested quadrature.
    for (std::size_t i : {std::size_t{8}, std::size_t{24}, std::size_t{40}}) {
        const double direct = bounds::difference_bound(p, times[i]);
        CHECK(std::abs(s.diff_bound[i] - direct) <=
              1e-6 * std::max(1.0, std::abs(direct)));
    }
}
