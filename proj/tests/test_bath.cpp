#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "otoc/bath/closed_forms.hpp"
#include "otoc/bath/correlation.hpp"
#include "otoc/bath/quadrature.hpp"
#include "otoc/bath/spectral_density.hpp"
#include "oracles.hpp"

using namespace otoc;
using bath::SpectralDensity;
using bath::ThermalContext;

TEST_CASE("spectral density values") {
    const SpectralDensity ohmic(1.0, 1.0);
    CHECK(bath::spectral_value(ohmic, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(bath::spectral_value(ohmic, 0.0) == 0.0);
    const SpectralDensity super(3.0, 2.0);
    CHECK(bath::spectral_value(super, 2.0) ==
          doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(SpectralDensity(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("adaptive quadrature handles a known oscillatory integral") {
    // int_0^pi sin(20 x) dx = (1 - cos(20 pi)) / 20 = 0
    const double v = bath::integrate_adaptive([](double x) { return std::sin(20.0 * x); },
                                              0.0, std::numbers::pi,
                                              bath::QuadratureOptions{1e-12, 8000});
    CHECK(std::abs(v) < 1e-12);
    // int_0^1 x e^-x dx = 1 - 2/e
    const double w = bath::integrate_adaptive([](double x) { return x * std::exp(-x); }, 0.0,
                                              1.0, bath::QuadratureOptions{1e-13, 8000});
    CHECK(w == doctest::Approx(1.0 - 2.0 / std::numbers::e).epsilon(1e-12));
}

TEST_CASE("xi_J symmetry and zero-time values") {
    const SpectralDensity j(1.0, 1.0);
    const ThermalContext cold(1e6);
    CHECK(std::abs(bath::xi_J(j, cold, 0.0).imag()) < 1e-12);
    // At T ~ 0 and s=1, cutoff=1: Re xi(0) = int w e^-w dw = 1.
    CHECK(bath::xi_J(j, cold, 0.0).real() == doctest::Approx(1.0).epsilon(1e-9));

    const ThermalContext warm(2.0);
    for (double t : {0.3, 1.1, 2.7}) {
        const auto plus = bath::xi_J(j, warm, t);
        const auto minus = bath::xi_J(j, warm, -t);
        CHECK(std::abs(minus - std::conj(plus)) < 1e-10);
    }
}

TEST_CASE("dephasing integral basics") {
    const SpectralDensity j(1.0, 1.0);
    const ThermalContext ctx(1000.0);
    CHECK(bath::dephasing_integral_D(j, ctx, 0.0) == 0.0);

    // Low-temperature ohmic closed form as oracle.
    const double d1 = bath::dephasing_integral_D(j, ctx, 1.0);
    const double closed = bath::dephasing_closed_s1(1.0, ctx, 1.0);
    CHECK(std::abs(d1 - closed) / closed < 1e-3);

    for (double s : {1.0, 3.0}) {
        const SpectralDensity js(s, 1.0);
        const ThermalContext c2(2.0);
        double prev = 0.0;
        for (double t : {0.5, 1.0, 2.0, 4.0}) {
            const double d = bath::dephasing_integral_D(js, c2, t);
            CHECK(d >= 0.0);
            CHECK(d >= prev - 1e-10);
            prev = d;
        }
    }
}

TEST_CASE("tau-space and frequency-space dephasing integrals agree") {
    for (double s : {1.0, 2.0, 3.0}) {
        const SpectralDensity j(s, 1.0);
        for (double beta : {1.0, 100.0}) {
            const ThermalContext ctx(beta);
            for (double t : {0.7, 3.0}) {
                const double a = bath::dephasing_integral_D(j, ctx, t);
                const double b = bath::dephasing_integral_D_spectral(j, ctx, t);
                CHECK(std::abs(a - b) < 1e-8);
            }
        }
    }
}

TEST_CASE("s=1 closed form: value, limit and asymptote") {
    const ThermalContext ctx(100.0); // kT = 0.01
    CHECK(bath::dephasing_closed_s1(1.0, ctx, 0.0) == 0.0);

    const double x = std::numbers::pi * 1e-2;
    const double expect = std::log(std::sqrt(2.0) * std::sinh(x) / x);
    CHECK(bath::dephasing_closed_s1(1.0, ctx, 1.0) == doctest::Approx(expect).epsilon(1e-12));

    CHECK(bath::s1_closed_form_in_regime(1.0, ctx));
    CHECK(!bath::s1_closed_form_in_regime(1.0, ThermalContext(1.0)));

    const double tau_t = ctx.thermal_time();
    const double t = 50.0 * tau_t;
    const double asym = std::log(t) + t / tau_t - std::log(2.0 * t / tau_t);
    const double full = bath::dephasing_closed_s1(1.0, ctx, t);
    CHECK(std::abs(full - asym) / full < 0.01);
}

TEST_CASE("s>1 closed form agrees with quadrature at all temperatures") {
    for (double s : {2.0, 3.0}) {
        const SpectralDensity j(s, 1.0);
        for (double beta : {100.0, 1.0}) {
            const ThermalContext ctx(beta);
            CHECK(bath::dephasing_closed_s_gt1(j, ctx, 0.0) == 0.0);
            for (double t : {0.5, 1.0, 5.0}) {
                const double closed = bath::dephasing_closed_s_gt1(j, ctx, t);
                CHECK(bath::dephasing_closed_imag_residual < 1e-12);
                const double quad = bath::dephasing_integral_D(j, ctx, t);
                CHECK(std::abs(closed - quad) / std::abs(quad) < 1e-6);
            }
        }
    }
}

TEST_CASE("s>1 closed form agrees with quadrature at non-integer s > 2") {
    const SpectralDensity j(2.5, 1.0);
    const ThermalContext ctx(2.0);
    const double closed = bath::dephasing_closed_s_gt1(j, ctx, 1.5);
    const double quad = bath::dephasing_integral_D(j, ctx, 1.5);
    CHECK(std::abs(closed - quad) / std::abs(quad) < 1e-6);
}

TEST_CASE("s>1 closed form domain errors") {
    const ThermalContext ctx(1.0);
    CHECK_THROWS_AS(bath::dephasing_closed_s_gt1(SpectralDensity(1.0, 1.0), ctx, 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(bath::dephasing_closed_s_gt1(SpectralDensity(1.5, 1.0), ctx, 1.0),
                    std::domain_error);
}

TEST_CASE("|xi| double integral dominates D and matches a 2-D oracle") {
    const SpectralDensity j(1.0, 1.0);
    const ThermalContext ctx(100.0);
    CHECK(bath::abs_xi_double_integral(j, ctx, 0.0) == 0.0);

    for (double t : {0.5, 1.5}) {
        CHECK(bath::abs_xi_double_integral(j, ctx, t) + 1e-12 >=
              bath::dephasing_integral_D(j, ctx, t));
    }

    // 2-D tensor-grid oracle: t'' = u t', reducing to a smooth 2-D Simpson grid.
    const double t = 2.0;
    auto abs_xi = [&](double tau) { return std::abs(bath::xi_J(j, ctx, tau, 1e-12)); };
    auto inner = [&](double tp) {
        return tp * oracles::simpson([&](double u) { return abs_xi(tp * (1.0 - u)); }, 0.0,
                                     1.0, 96);
    };
    const double oracle = oracles::simpson(inner, 0.0, t, 96);
    const double lib = bath::abs_xi_double_integral(j, ctx, t);
    CHECK(std::abs(lib - oracle) / oracle < 2e-3);
}

TEST_CASE("sampled |xi| table matches the direct nested quadrature") {
    const SpectralDensity j(1.0, 1.0);
    const ThermalContext ctx(1.0);
    const std::size_t n_grid = 11;
    const double t_max = 5.0;
    bath::AbsXiTable table(j, ctx, t_max, 8 * (n_grid - 1));
    for (std::size_t i = 1; i < n_grid; i += 3) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(n_grid - 1);
        const double direct = bath::abs_xi_double_integral(j, ctx, t);
        CHECK(std::abs(table.weighted_integral(t) - direct) < 1e-5);
    }
}

TEST_CASE("quadrature failure reports the estimated error") {
    bath::QuadratureOptions opt;
    opt.abs_tol = 1e-300;
    opt.max_intervals = 8;
    CHECK_THROWS_AS(bath::integrate_adaptive([](double x) { return std::sin(100.0 * x) / (1e-8 + x * x); },
                                             0.0, 10.0, opt),
                    numerical_error);
}
