// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "tailrisk/empirical.hpp"

using namespace tailrisk;

TEST_SUITE_BEGIN("empirical");

TEST_CASE("construction sorts, normalizes and flags") {
    EmpiricalDistribution d({3.0, 1.0, 2.0}, {2.0, 1.0, 1.0});
    CHECK(d.was_renormalized());
    CHECK(d.value(0) == 1.0);
    CHECK(d.value(2) == 3.0);
    CHECK(d.weight(2) == doctest::Approx(0.5));
    double sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) sum += d.weight(i);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(EmpiricalDistribution({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(EmpiricalDistribution({1.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(EmpiricalDistribution({1.0, 2.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("decreasing rearrangement of uniform samples sorts descending") {
    EmpiricalDistribution d({3.0, 1.0, 2.0});
    StepFunction r = decreasing_rearrangement(d);
    CHECK(r.levels == std::vector<double>{3.0, 2.0, 1.0});
    CHECK(r.breakpoints[0] == doctest::Approx(1.0 / 3));
    CHECK(r.breakpoints[2] == 1.0);
}

TEST_CASE("rearrangement of a constant is a single level") {
    EmpiricalDistribution d({-2.5, -2.5}, {0.3, 0.7});
    StepFunction r = decreasing_rearrangement(d);
    CHECK(r(0.0) == 2.5);
    CHECK(r(0.5) == 2.5);
    CHECK(r(1.0) == 2.5);
}

TEST_CASE("rearrangement applies absolute value with weights") {
    // direct evaluation of the distribution function and its inverse
    EmpiricalDistribution d({-4.0, 1.0}, {0.25, 0.75});
    StepFunction r = decreasing_rearrangement(d);
    CHECK(r.levels == std::vector<double>{4.0, 1.0});
    CHECK(r.breakpoints == std::vector<double>{0.25, 1.0});
}

TEST_CASE("maximal function: exact piecewise integrals") {
    EmpiricalDistribution d({4.0, 2.0});
    StepFunction r = decreasing_rearrangement(d);
    CHECK(maximal_function(r, 1.0) == doctest::Approx(3.0));       // mean of |X|
    CHECK(maximal_function(r, 0.5) == doctest::Approx(4.0));
    CHECK(maximal_function(r, 0.75) == doctest::Approx(10.0 / 3));
    CHECK_THROWS_AS(maximal_function(r, 0.0), std::domain_error);
    CHECK_THROWS_AS(maximal_function(r, 1.5), std::domain_error);
}

TEST_CASE("cvar: order-statistic tail means") {
    EmpiricalDistribution d({1.0, 2.0, 3.0, 4.0});
    CHECK(cvar(d, 0.0) == doctest::Approx(2.5));    // mean
    CHECK(cvar(d, 0.5) == doctest::Approx(3.5));    // top two
    CHECK(cvar(d, 0.75) == doctest::Approx(4.0));   // top order statistic
    CHECK_THROWS_AS(cvar(d, 1.0), std::domain_error);
    CHECK_THROWS_AS(cvar(d, -0.1), std::domain_error);
}

TEST_CASE("quantile: sup-based left-continuous inverse") {
    EmpiricalDistribution d({1.0, 2.0});
    CHECK(quantile(d, 0.5) == 1.0);   // F(1) = 0.5 is not < 0.5
    CHECK(quantile(d, 0.75) == 2.0);
    CHECK(quantile(d, 1.0) == 2.0);
    CHECK_THROWS_AS(quantile(d, 0.0), std::domain_error);
}

TEST_CASE("quantile and rearrangement conventions meet at breakpoints") {
    // X*(t) = F^{-1}_{|X|}(1 - t): right-continuous at the mass points,
    // while the quantile is left-continuous
    EmpiricalDistribution d({1.0, 2.0, 3.0}, {0.2, 0.3, 0.5});
    StepFunction r = decreasing_rearrangement(d);
    // at t = 0.5 (the boundary between the 3-level and the 2-level)
    CHECK(r(0.5) == 2.0);                   // right-continuous: the next level
    CHECK(quantile(d, 0.5) == 2.0);         // sup{F < 0.5} = 2
    CHECK(r(0.5 - 1e-12) == 3.0);
    CHECK(quantile(d, 0.5 + 1e-12) == 3.0);
}

TEST_CASE("equimeasurability: permutations leave the rearrangement unchanged") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        auto rd = oracles::random_distribution(rng, 16);
        EmpiricalDistribution d(rd.values, rd.weights);
        StepFunction r1 = decreasing_rearrangement(d);

        std::vector<std::size_t> perm(rd.values.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> pv, pw;
        for (std::size_t k : perm) {
            pv.push_back(rd.values[k]);
            pw.push_back(rd.weights[k]);
        }
        StepFunction r2 = decreasing_rearrangement(EmpiricalDistribution(pv, pw));
        CHECK(r1.levels == r2.levels);
        CHECK(r1.breakpoints == r2.breakpoints);
    }
}

TEST_CASE("step-sum identity: integral of X* is E|X|") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        auto rd = oracles::random_distribution(rng);
        EmpiricalDistribution d(rd.values, rd.weights);
        StepFunction r = decreasing_rearrangement(d);
        double mean_abs = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            mean_abs += d.weight(i) * std::abs(d.value(i));
        CHECK(r.integral(1.0) == doctest::Approx(mean_abs).epsilon(1e-12));
    }
}

TEST_CASE("maximal function is non-increasing; t X**(t) is non-decreasing") {
    std::mt19937 rng(13);
    auto rd = oracles::random_distribution(rng);
    EmpiricalDistribution d(rd.values, rd.weights);
    StepFunction r = decreasing_rearrangement(d);
    double prev = maximal_function(r, 1e-6);
    double prev_primitive = 1e-6 * prev;
    for (double t = 0.01; t <= 1.0; t += 0.01) {
        const double cur = maximal_function(r, t);
        CHECK(cur <= prev * (1 + 1e-12) + 1e-12);
        CHECK(t * cur >= prev_primitive - 1e-12);
        prev = cur;
        prev_primitive = t * cur;
    }
}

TEST_CASE("cvar equals the maximal function of |X| at the mirrored level") {
    std::mt19937 rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        auto rd = oracles::random_distribution(rng, 12);
        std::vector<double> abs_vals(rd.values);
        for (double& v : abs_vals) v = std::abs(v);
        EmpiricalDistribution d(abs_vals, rd.weights);
        StepFunction r = decreasing_rearrangement(d);
        std::uniform_real_distribution<double> td(1e-6, 1.0);
        for (int k = 0; k < 5; ++k) {
            const double t = td(rng);
            CHECK(cvar(d, 1.0 - t) ==
                  doctest::Approx(maximal_function(r, t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("cvar is monotone in alpha and dominates the mean") {
    std::mt19937 rng(19);
    for (int rep = 0; rep < 50; ++rep) {
        auto rd = oracles::random_distribution(rng, 24);
        EmpiricalDistribution d(rd.values, rd.weights);
        double prev = d.mean();
        for (double a : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) {
            const double c = cvar(d, a);
            CHECK(c >= prev - 1e-12);
            prev = c;
        }
    }
}

TEST_CASE("cvar matches the independent order-statistic oracle") {
    std::mt19937 rng(23);
    for (int rep = 0; rep < 100; ++rep) {
        auto rd = oracles::random_distribution(rng, 32);
        EmpiricalDistribution d(rd.values, rd.weights);
        std::uniform_real_distribution<double> ad(0.0, 0.99);
        const double a = ad(rng);
        CHECK(cvar(d, a) ==
              doctest::Approx(oracles::cvar_order_stats(rd.values, rd.weights, a))
                  .epsilon(1e-10));
    }
}

TEST_SUITE_END();
