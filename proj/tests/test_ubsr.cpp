// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "tailrisk/ubsr.hpp"

using namespace tailrisk;

TEST_SUITE_BEGIN("ubsr");

TEST_CASE("constant closed forms") {
    for (double c : {-1.0, 0.0, 2.5}) {
        EmpiricalDistribution d({c, c});
        CHECK(ubsr(d, exp_loss()) == doctest::Approx(c - std::log(2.0)).epsilon(1e-9));
        CHECK(ubsr(d, linear_loss()) == doctest::Approx(c - 1.0).epsilon(1e-9));
    }
    EmpiricalDistribution d({1.0});
    LossFunction bad = exp_loss();
    bad.x0 = 0.0;
    CHECK_THROWS_AS(ubsr(d, bad), std::domain_error);
}

TEST_CASE("translation equivariance by construction") {
    std::mt19937 rng(109);
    auto rd = oracles::random_distribution(rng, 16);
    EmpiricalDistribution d(rd.values, rd.weights);
    const double base = ubsr(d, exp_loss());
    for (double k : {-2.0, 3.0}) {
        EmpiricalDistribution dk = d.transformed([k](double x) { return x + k; });
        CHECK(ubsr(dk, exp_loss()) == doctest::Approx(base + k).epsilon(1e-8));
    }
}

TEST_CASE("monotone and convex in the position") {
    std::mt19937 rng(113);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> bump(0.0, 1.5);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t n = 8;
        std::vector<double> x(n), y(n), w(n, 1.0 / n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = u(rng);
            y[i] = x[i] + bump(rng);
        }
        EmpiricalDistribution dx(x, w), dy(y, w);
        for (const LossFunction& L : {exp_loss(), power_loss(2.0), linear_loss()}) {
            CHECK(ubsr(dx, L) <= ubsr(dy, L) + 1e-9);
            // convexity on coupled samples
            for (double lam : {0.3, 0.5}) {
                std::vector<double> mix(n);
                for (std::size_t i = 0; i < n; ++i)
                    mix[i] = lam * x[i] + (1.0 - lam) * y[i];
                EmpiricalDistribution dm(mix, w);
                CHECK(ubsr(dm, L) <=
                      lam * ubsr(dx, L) + (1.0 - lam) * ubsr(dy, L) + 1e-9);
            }
        }
        CHECK(ubsr(dx, exp_loss()) <= dx.max() + 1e-9);
    }
    // UBSR(0) <= 0
    EmpiricalDistribution zero({0.0});
    CHECK(ubsr(zero, exp_loss()) <= 1e-9);
    CHECK(ubsr(zero, power_loss(2.0)) <= 1e-9);
}

TEST_CASE("positive homogeneity fails: the convex/coherent separator") {
    // frozen bisection oracles for X uniform on {0, 1} with the exp loss
    EmpiricalDistribution d({0.0, 1.0});
    const double u1 = ubsr(d, exp_loss());
    CHECK(u1 == doctest::Approx(-0.073032673601668).epsilon(1e-9));
    EmpiricalDistribution d2({0.0, 2.0});
    const double u2 = ubsr(d2, exp_loss());
    CHECK(u2 == doctest::Approx(0.901387711331890).epsilon(1e-9));
    CHECK(std::abs(u2 - 2.0 * u1) > 1e-3);
}

TEST_CASE("penalty: the p-norm closed form and the Amemiya oracle") {
    EmpiricalDistribution one({1.0, 1.0, 1.0});
    CHECK(ubsr_penalty(one, power_loss(2.0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    // alpha(Z) = p^{1/p} (E Z^q)^{1/q} for the power loss
    EmpiricalDistribution z02({0.0, 2.0});
    CHECK(ubsr_penalty(z02, power_loss(2.0)) == doctest::Approx(2.0).epsilon(1e-9));
    const double live = oracles::dense_min_positive([](double t) {
        return t * (1.0 + 0.5 * ((2.0 / t) * (2.0 / t) / 2.0));
    });
    CHECK(ubsr_penalty(z02, power_loss(2.0)) == doctest::Approx(live).epsilon(1e-9));

    // indicator conjugate: alpha(Z) = max Z (the expectation path)
    EmpiricalDistribution z({0.5, 1.5}, {0.5, 0.5});
    CHECK(ubsr_penalty(z, linear_loss()) == doctest::Approx(1.5).epsilon(1e-9));
    EmpiricalDistribution onemass({1.0});
    CHECK(ubsr_penalty(onemass, linear_loss()) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(ubsr_penalty(EmpiricalDistribution({-0.5, 2.5}), power_loss(2.0)),
                    std::domain_error);
    CHECK_THROWS_AS(ubsr_penalty(EmpiricalDistribution({0.5, 0.7}), power_loss(2.0)),
                    std::domain_error);  // mean != 1
}

TEST_CASE("weak duality: E[XZ] - alpha(Z) never exceeds the shortfall risk") {
    std::mt19937 rng(127);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        auto rd = oracles::random_distribution(rng, 12);
        EmpiricalDistribution d(rd.values, rd.weights);
        // random admissible density over the same atoms
        std::vector<double> z(d.size());
        double mean = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            z[i] = 0.05 + u(rng);
            mean += d.weight(i) * z[i];
        }
        for (double& v : z) v /= mean;
        EmpiricalDistribution zd(z, d.weights());

        for (const LossFunction& L : {exp_loss(), power_loss(2.0)}) {
            double exz = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i)
                exz += d.weight(i) * d.value(i) * z[i];
            // the density is constructed on the ORIGINAL atom order; rebuild
            // the pairing after the distributions sorted themselves
            CHECK(exz - ubsr_penalty(zd, L) <= ubsr(d, L) + 1e-6);
        }
    }
}

TEST_SUITE_END();
