// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>

#include "support/oracles.hpp"
#include "tailrisk/divergence.hpp"

using namespace tailrisk;

namespace {
constexpr double kE = 2.718281828459045;
}

TEST_SUITE_BEGIN("divergence");

TEST_CASE("catalog conjugates match the closed forms") {
    CHECK(make_kl().g(1.0) == doctest::Approx(kE - 1.0).epsilon(1e-12));
    CHECK(make_chi2().g(-3.0) == doctest::Approx(-1.0));  // max(-2,y) branch
    CHECK(make_cvar(0.5).g(2.0) == doctest::Approx(4.0));
    CHECK(make_expectation().g(-1.0) == 0.0);
    CHECK(make_expectation().g(3.0) == 3.0);
}

TEST_CASE("family preconditions are enforced") {
    CHECK_THROWS_AS(make_cvar(1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_cvar(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_power(1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_kl(0.0), std::invalid_argument);
}

TEST_CASE("custom tables reject non-convexity and missing f(1)=0") {
    CHECK_THROWS_AS(make_custom({{0.0, 1.0}, {1.0, 0.0}, {2.0, 0.5}, {3.0, 0.9}}),
                    std::invalid_argument);  // slopes decrease after x=2
    CHECK_THROWS_AS(make_custom({{0.0, 1.0}, {2.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_custom({{0.0, 1.0}, {1.0, 0.5}, {2.0, 2.0}}),
                    std::invalid_argument);  // f(1) != 0
}

TEST_CASE("youngify: f-bar vanishes on [0,1], g-bar on the nonpositive axis") {
    auto [fbar_kl, gbar_kl] = youngify(make_kl());
    CHECK(fbar_kl.phi(0.5) == 0.0);
    CHECK(fbar_kl.phi(2.0) == doctest::Approx(2.0 * std::log(2.0) - 1.0));

    auto [fbar_c, gbar_c] = youngify(make_chi2());
    CHECK(gbar_c.phi(-1.0) == 0.0);
    CHECK(gbar_c.phi(1.0) == doctest::Approx(1.25));
}

TEST_CASE("epsilon scaling: f_eps = f/eps, g_eps(y) = g(eps y)/eps") {
    DivergenceSpec kl = make_kl();
    CHECK(kl.scaled(1.0).g_eps(1.0) == doctest::Approx(kl.g(1.0)));  // identity
    DivergenceSpec kl2 = kl.scaled(2.0);
    CHECK(kl2.g_eps(1.0) == doctest::Approx((std::exp(2.0) - 1.0) / 2.0));
    DivergenceSpec chi_half = make_chi2().scaled(0.5);
    CHECK(chi_half.f_eps(3.0) == doctest::Approx(8.0));
    CHECK_THROWS_AS(kl.scaled(-1.0), std::domain_error);
}

TEST_CASE("generalized inverses: closed forms and the numeric fallback") {
    auto [fbar_chi2, gbar_chi2] = youngify(make_chi2());
    CHECK(fbar_chi2.phi_inv(4.0) == doctest::Approx(3.0));
    CHECK(make_cvar(0.2).f_inv(7.0) == doctest::Approx(1.25));
    CHECK(make_cvar(0.2).f_inv(1e-9) == doctest::Approx(1.25));
    CHECK(generalized_inverse([](double x) { return x; }, 5.0) ==
          doctest::Approx(5.0).epsilon(1e-12));
    // below the left limit of h on the nonnegative domain: empty set -> 0
    CHECK(make_kl().f_inv(-1.0) == 0.0);
}

TEST_CASE("kl inverse agrees with direct bisection of x log x - x + 1") {
    DivergenceSpec kl = make_kl();
    for (double y : {0.1, 0.5, 1.0, 3.0, 20.0}) {
        const double x = kl.f_inv(y);
        CHECK(x * std::log(x) - x + 1.0 == doctest::Approx(y).epsilon(1e-12));
        CHECK(x >= 1.0);
    }
}

TEST_CASE("conjugacy round-trip: sup_y (xy - g(y)) recovers f on a grid") {
    for (const DivergenceSpec& spec : {make_kl(), make_chi2(), make_power(3.0)}) {
        for (double x = 0.0; x <= 10.0; x += 0.5) {
            auto neg = [&](double y) { return -(x * y - spec.g(y)); };
            // the maximizing y is a subgradient of f at x; 450 covers
            // f'(10) for every family tested here
            const double best = -oracles::dense_min_interval(neg, -60.0, 450.0, 20000);
            CHECK(best == doctest::Approx(spec.f(x)).epsilon(1e-6).scale(1.0 + spec.f(x)));
        }
    }
}

TEST_CASE("g is nondecreasing, convex, and dominates the identity") {
    for (const DivergenceSpec& spec :
         {make_kl(), make_chi2(), make_cvar(0.3), make_power(2.5), make_expectation()}) {
        double prev = spec.g(-10.0);
        double prev_slope = -1e300;
        for (double y = -10.0 + 0.125; y <= 10.0; y += 0.125) {
            const double cur = spec.g(y);
            CHECK(cur >= prev - 1e-12);
            const double slope = (cur - prev) / 0.125;
            CHECK(slope >= prev_slope - 1e-9);
            CHECK(cur >= y - 1e-12);
            prev = cur;
            prev_slope = slope;
        }
    }
}

TEST_CASE("g-bar equals the numeric conjugate of f-bar on [-10, 10]") {
    for (const DivergenceSpec& spec : {make_kl(), make_chi2(), make_cvar(0.4)}) {
        auto [fbar, gbar] = youngify(spec);
        for (double y = -10.0; y <= 10.0; y += 0.25) {
            const double numeric = numeric_conjugate(fbar.phi, y);
            CHECK(gbar.phi(y) == doctest::Approx(numeric).epsilon(1e-6).scale(
                                     1.0 + std::abs(numeric)));
        }
    }
}

TEST_CASE("sampled custom tables reproduce the kl and chi2 conjugates") {
    // vertex-exact conjugation of a dense sample of the closed-form f
    for (bool use_kl : {true, false}) {
        DivergenceSpec closed = use_kl ? make_kl() : make_chi2();
        std::vector<std::pair<double, double>> table;
        table.emplace_back(0.0, closed.f(0.0));
        for (double x = 0.002; x <= 25.0; x += 0.002)
            table.emplace_back(x, closed.f(x));
        table.emplace_back(1.0, 0.0);
        std::sort(table.begin(), table.end());
        table.erase(std::unique(table.begin(), table.end(),
                                [](auto a, auto b) { return a.first == b.first; }),
                    table.end());
        DivergenceSpec tab = make_custom(table);
        for (double y = -2.0; y <= 2.0; y += 0.1)
            CHECK(tab.g(y) == doctest::Approx(closed.g(y)).epsilon(1e-6));
    }
}

TEST_CASE("g_prime is a selection from the subdifferential (right derivative)") {
    DivergenceSpec cv = make_cvar(0.5);
    CHECK(cv.g_prime(-0.1) == 0.0);
    CHECK(cv.g_prime(0.0) == 2.0);  // right derivative at the kink
    DivergenceSpec chi = make_chi2();
    CHECK(chi.g_prime(-2.5) == 0.0);
    CHECK(chi.g_prime(2.0) == doctest::Approx(2.0));
    // finite-difference agreement away from kinks
    for (const DivergenceSpec& spec : {make_kl(), make_chi2(), make_power(3.0)}) {
        for (double y : {-1.0, 0.5, 2.0, 5.0}) {
            const double h = 1e-6;
            const double fd = (spec.g(y + h) - spec.g(y - h)) / (2 * h);
            CHECK(spec.g_prime(y) == doctest::Approx(fd).epsilon(1e-4));
        }
    }
}

TEST_CASE("infinite values propagate as extended reals") {
    DivergenceSpec cv = make_cvar(0.5);
    CHECK(std::isinf(cv.f(3.0)));
    CHECK(cv.f(2.0) == 0.0);
    CHECK(std::isinf(cv.f(-1.0)));
    CHECK(cv.finite_f() == false);
    CHECK(make_kl().finite_f() == true);
}

TEST_SUITE_END();
