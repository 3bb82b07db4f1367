#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "support/oracles.hpp"
#include "tde/chains.hpp"
#include "tde/errors.hpp"
#include "tde/quadrature.hpp"

using namespace tde;

namespace {

// wide y-window holding all but ~1e-15 of the transition mass at x
Interval kernel_window(const ChainSpec& spec, double x) {
    switch (spec.kind()) {
        case ProcessKind::ar1: {
            const double mu = spec.a() * x + spec.b();
            return {mu - 9.0 * spec.sigma(), mu + 9.0 * spec.sigma()};
        }
        case ProcessKind::radial_ou:
            return {1e-12, spec.a() * x + 14.0 * spec.beta()};
        case ProcessKind::arch: {
            const double s = std::cos(x) + 3.0;
            return {std::sin(x) - 9.0 * s, std::sin(x) + 9.0 * s};
        }
    }
    return {0.0, 1.0};
}

}  // namespace

TEST_CASE("parameter validation at construction") {
    CHECK_THROWS_AS(ChainSpec::ar1(1.0, 3.0, 1.0), domain_error);
    CHECK_THROWS_AS(ChainSpec::ar1(-1.2, 3.0, 1.0), domain_error);
    CHECK_THROWS_AS(ChainSpec::ar1(0.5, 3.0, 0.0), domain_error);
    CHECK_THROWS_AS(ChainSpec::radial_ou(0.5, -1.0), domain_error);
    CHECK_THROWS_AS(ChainSpec::radial_ou(2.0, 3.0), domain_error);
    CHECK_THROWS_AS(ChainSpec::arch(-1), domain_error);
}

TEST_CASE("paths are seeded deterministically and sized n+1") {
    for (const auto& spec :
         {ChainSpec::ar1(0.5, 3.0, 1.0), ChainSpec::radial_ou(0.5, 3.0), ChainSpec::arch()}) {
        const Path p1 = simulate(spec, 10, 42);
        const Path p2 = simulate(spec, 10, 42);
        REQUIRE(p1.values.size() == 11);
        CHECK(p1.values == p2.values);
        const Path p3 = simulate(spec, 10, 43);
        CHECK(p1.values != p3.values);
    }
}

TEST_CASE("AR(1) long-run moments match the stationary Gaussian") {
    const Path p = simulate(ChainSpec::ar1(0.5, 3.0, 1.0), 100000, 9001);
    double mean = 0.0;
    for (double v : p.values) mean += v;
    mean /= static_cast<double>(p.values.size());
    double var = 0.0;
    for (double v : p.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(p.values.size() - 1);
    CHECK(std::abs(mean - 6.0) < 0.05);
    CHECK(std::abs(var - 4.0 / 3.0) < 0.05);
}

TEST_CASE("radial chain squares the three-component stationary law") {
    // E X^2 = 3 rho^2 = 36 for the norm of three N(0, rho^2) components
    const Path p = simulate(ChainSpec::radial_ou(0.5, 3.0), 100000, 77);
    double m2 = 0.0;
    for (double v : p.values) {
        CHECK(v > 0.0);
        m2 += v * v;
    }
    m2 /= static_cast<double>(p.values.size());
    CHECK(std::abs(m2 - 36.0) < 0.5);
}

TEST_CASE("transition density closed forms at hand-checked points") {
    const ChainSpec ar = ChainSpec::ar1(0.5, 3.0, 1.0);
    CHECK(transition_density(ar, 6.0, 6.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
    const ChainSpec arch = ChainSpec::arch();
    CHECK(transition_density(arch, 0.0, 0.0) ==
          doctest::Approx(1.0 / (4.0 * std::sqrt(2.0 * std::numbers::pi))).epsilon(1e-12));
    const ChainSpec rad = ChainSpec::radial_ou(0.5, 3.0);
    CHECK(transition_density(rad, 4.0, -1.0) == 0.0);
    CHECK(transition_density(rad, 4.0, 0.0) == 0.0);
    CHECK_THROWS_AS(transition_density(rad, 0.0, 5.0), domain_error);
    CHECK_THROWS_AS(transition_density(rad, -2.0, 5.0), domain_error);
}

TEST_CASE("every transition kernel integrates to one across the domain") {
    const std::vector<ChainSpec> specs = {ChainSpec::ar1(0.5, 3.0, 1.0),
                                          ChainSpec::radial_ou(0.5, 3.0), ChainSpec::arch()};
    for (const auto& spec : specs) {
        const Rectangle dom = default_domain(spec);
        for (int g = 0; g < 20; ++g) {
            const double x = dom.x.lo + dom.x.length() * (g + 0.5) / 20.0;
            const auto grid = make_grid(kernel_window(spec, x), 400);
            const double mass = integrate(grid, [&](double y) {
                return transition_density(spec, x, y);
            });
            INFO(spec.name(), " x=", x);
            CHECK(std::abs(mass - 1.0) < 1e-4);
        }
    }
}

TEST_CASE("stationary densities are normalized and consistent with the kernel") {
    const ChainSpec ar = ChainSpec::ar1(0.5, 3.0, 1.0);
    CHECK(stationary_density(ar, 6.0) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * 4.0 / 3.0)).epsilon(1e-12));
    const ChainSpec rad = ChainSpec::radial_ou(0.5, 3.0);
    CHECK(stationary_density(rad, 0.0) == 0.0);
    CHECK(stationary_density(rad, -1.0) == 0.0);
    const auto grid = make_grid({1e-9, 40.0}, 600);
    const double mass = integrate(grid, [&](double x) { return stationary_density(rad, x); });
    CHECK(std::abs(mass - 1.0) < 1e-8);
    CHECK_THROWS_AS(stationary_density(ChainSpec::arch(), 0.0), unsupported_error);
    CHECK(has_stationary_density(ar));
    CHECK_FALSE(has_stationary_density(ChainSpec::arch()));

    // invariance: integrating f(x) pi(x, y) over x returns f(y)
    for (const auto& spec : {ar, rad}) {
        const Interval window =
            spec.kind() == ProcessKind::ar1 ? Interval{-6.0, 18.0} : Interval{1e-9, 40.0};
        const auto gx = make_grid(window, 800);
        for (int t = 0; t < 10; ++t) {
            const Rectangle dom = default_domain(spec);
            const double y = dom.y.lo + dom.y.length() * (t + 0.5) / 10.0;
            const double lhs = integrate(gx, [&](double x) {
                return stationary_density(spec, x) * transition_density(spec, x, y);
            });
            INFO(spec.name(), " y=", y);
            CHECK(std::abs(lhs - stationary_density(spec, y)) < 1e-3);
        }
    }
}

TEST_CASE("Bessel I(1/2) closed form agrees with the power-series oracle") {
    CHECK(bessel_i_half(1.0) == doctest::Approx(0.937674).epsilon(1e-6));
    CHECK(bessel_i_half(2.0) ==
          doctest::Approx(std::sqrt(1.0 / std::numbers::pi) * std::sinh(2.0)).epsilon(1e-10));
    CHECK(bessel_i_half(2.0) == doctest::Approx(2.04623).epsilon(1e-5));
    CHECK_THROWS_AS(bessel_i_half(0.0), domain_error);
    CHECK_THROWS_AS(bessel_i_half(-1.0), domain_error);
    // small z: I(1/2)(z) ~ sqrt(2 z / pi) since sinh z ~ z
    const double z = 1e-8;
    CHECK(bessel_i_half(z) * std::sqrt(z) ==
          doctest::Approx(std::sqrt(2.0 / std::numbers::pi) * z).epsilon(1e-6));
    for (double zz = 1e-6; zz <= 20.0; zz *= 2.7) {
        const double closed = bessel_i_half(zz);
        const double series = oracles::bessel_i_half_series(zz);
        INFO("z=", zz);
        CHECK(std::abs(closed - series) <= 1e-12 * series);
    }
}

TEST_CASE("radial kernel survives the sinh overflow region") {
    const ChainSpec rad = ChainSpec::radial_ou(0.5, 3.0);
    // z = a x y / beta^2 near 700 where sinh overflows double if taken naively
    const double x = 400.0;
    for (double y : {30.0, 31.0, 31.5, 32.0, 40.0, 200.0}) {
        const double v = transition_density(rad, x, y);
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
    // continuity across the guard: compare against the expanded two-Gaussian
    // form which is exact wherever sinh is finite
    auto expanded = [&](double xx, double yy) {
        const double beta = 3.0, a = 0.5;
        const double c = yy / (a * xx * beta * std::sqrt(2.0 * std::numbers::pi));
        const double d1 = (yy - a * xx) / beta;
        const double d2 = (yy + a * xx) / beta;
        return c * (std::exp(-0.5 * d1 * d1) - std::exp(-0.5 * d2 * d2));
    };
    for (double y : {31.0, 31.2, 31.6, 32.0}) {  // z spans ~689 to ~711
        const double v = transition_density(rad, x, y);
        CHECK(v == doctest::Approx(expanded(x, y)).epsilon(1e-11));
    }
}

TEST_CASE("pair histogram of simulated data matches f(x) pi(x,y) cell masses") {
    const ChainSpec spec = ChainSpec::ar1(0.5, 3.0, 1.0);
    const Rectangle dom = default_domain(spec);
    const int n = 100000;
    const Path p = simulate(spec, n, 1234);
    const int cells = 10;
    std::vector<int> counts(cells * cells, 0);
    for (int i = 0; i < n; ++i) {
        const double x = p.values[i], y = p.values[i + 1];
        if (!dom.contains(x, y)) continue;
        int cx = static_cast<int>((x - dom.x.lo) / dom.x.length() * cells);
        int cy = static_cast<int>((y - dom.y.lo) / dom.y.length() * cells);
        cx = std::min(cx, cells - 1);
        cy = std::min(cy, cells - 1);
        ++counts[cx * cells + cy];
    }
    const double wx = dom.x.length() / cells;
    const double wy = dom.y.length() / cells;
    for (int cx = 0; cx < cells; ++cx) {
        for (int cy = 0; cy < cells; ++cy) {
            const Interval ix{dom.x.lo + cx * wx, dom.x.lo + (cx + 1) * wx};
            const Interval iy{dom.y.lo + cy * wy, dom.y.lo + (cy + 1) * wy};
            const auto gcx = make_grid(ix, 24);
            const auto gcy = make_grid(iy, 24);
            const double prob = integrate(gcx, [&](double x) {
                return stationary_density(spec, x) * integrate(gcy, [&](double y) {
                           return transition_density(spec, x, y);
                       });
            });
            const double se = std::sqrt(prob * (1.0 - prob) / n);
            INFO("cell ", cx, ",", cy);
            CHECK(std::abs(counts[cx * cells + cy] / static_cast<double>(n) - prob) <=
                  5.0 * se + 1e-12);
        }
    }
}

TEST_CASE("default domains and replicate seed splitting") {
    CHECK(default_domain(ChainSpec::ar1(0.5, 3.0, 1.0)) ==
          Rectangle{{4.0, 8.0}, {4.0, 8.0}});
    CHECK(default_domain(ChainSpec::radial_ou(0.5, 3.0)) ==
          Rectangle{{2.0, 10.0}, {2.0, 10.0}});
    CHECK(default_domain(ChainSpec::arch()) == Rectangle{{-6.0, 6.0}, {-6.0, 6.0}});
    CHECK(replicate_seed(1, 0) == replicate_seed(1, 0));
    CHECK(replicate_seed(1, 0) != replicate_seed(1, 1));
    CHECK(replicate_seed(1, 0) != replicate_seed(2, 0));
    CHECK(replicate_seed(77, 3) == (77ULL ^ (3ULL * 0x9E3779B97F4A7C15ULL)));
}
