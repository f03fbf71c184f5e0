// SPDX-License-Identifier: Apache-2.0

#include "tailrisk/orlicz.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailrisk/scalar_opt.hpp"

namespace tailrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct InnerRegret {
    double value = 0.0;
    std::optional<double> t_star;
    bool boundary = false;
    int iterations = 0;
};

// V_{g_eps}(X - mu) evaluated straight off the sample arrays.
InnerRegret regret_shifted(const EmpiricalDistribution& d,
                           const DivergenceSpec& spec, double mu) {
    InnerRegret res;
    const double eps = spec.epsilon();

    if (spec.homogeneous_conjugate()) {
        // t (eps + E g(Y/t)) = t*eps + E g(Y); infimum as t -> 0
        double acc = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            acc += d.weight(i) * spec.g(d.value(i) - mu);
        res.value = acc;
        res.boundary = true;
        return res;
    }
    if (d.min() == mu && d.max() == mu) {
        res.value = 0.0;
        res.boundary = true;
        return res;
    }

    auto objective = [&](double t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double v = spec.g((d.value(i) - mu) / t);
            if (!std::isfinite(v)) return kInf;
            acc += d.weight(i) * v;
        }
        return t * (eps + acc);
    };
    ScalarMinResult r = minimize_positive(objective, 1.0, 1e-13, 1e13);
    res.value = r.fx;
    res.iterations = r.iterations;
    res.boundary = r.boundary_low || r.boundary_high;
    if (!res.boundary) res.t_star = r.x;
    return res;
}

}  // namespace

double luxemburg_norm(const EmpiricalDistribution& d, const YoungFunction& Phi) {
    double m = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        m = std::max(m, std::abs(d.value(i)));
    if (m == 0.0) return 0.0;

    auto pred = [&](double lambda) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double v = Phi.phi(std::abs(d.value(i)) / lambda);
            if (!std::isfinite(v)) return false;
            acc += d.weight(i) * v;
            if (acc > 1.0) return false;
        }
        return acc <= 1.0;
    };

    double hi = std::max(m, 1e-300);
    int guard = 0;
    while (!pred(hi)) {
        hi *= 2.0;
        if (++guard > 2100)
            throw std::runtime_error("luxemburg_norm: no finite level found");
    }
    double lo = hi;
    guard = 0;
    while (pred(lo) && lo > 1e-300) {
        lo *= 0.5;
        if (++guard > 2100) break;
    }
    if (pred(lo)) return 0.0;  // Phi vanishes over the whole sample range
    return bisect_threshold(pred, lo, hi, 1e-15);
}

double orlicz_norm(const EmpiricalDistribution& d, const YoungFunction& gbar) {
    if (d.min() == 0.0 && d.max() == 0.0) return 0.0;
    auto objective = [&](double t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double v = gbar.phi(std::abs(d.value(i)) / t);
            if (!std::isfinite(v)) return kInf;
            acc += d.weight(i) * v;
        }
        return t * (1.0 + acc);
    };
    ScalarMinResult r = minimize_positive(objective, 1.0, 1e-13, 1e13);
    return r.fx;
}

RiskResult orlicz_regret(const EmpiricalDistribution& d, const DivergenceSpec& spec) {
    InnerRegret inner = regret_shifted(d, spec, 0.0);
    RiskResult res;
    res.value = inner.value;
    res.t_star = inner.t_star;
    res.boundary = inner.boundary;
    res.iterations = inner.iterations;
    res.tolerance_achieved = inner.boundary ? 0.0 : 1e-10;
    return res;
}

RiskResult divergence_risk(const EmpiricalDistribution& d, const DivergenceSpec& spec) {
    const double lo = d.min() - 1.0;
    const double hi = d.max() + 1.0;

    auto objective = [&](double mu) { return mu + regret_shifted(d, spec, mu).value; };

    GoldenOptions opts;
    opts.arg_rel_tol = 0.0;
    opts.arg_abs_tol = std::max(1e-12, 1e-13 * (std::abs(lo) + std::abs(hi)));
    ScalarMinResult r = minimize_real(objective, lo, hi, opts);

    InnerRegret inner = regret_shifted(d, spec, r.x);
    RiskResult res;
    res.value = r.x + inner.value;
    res.mu_star = r.x;
    res.t_star = inner.t_star;
    res.boundary = inner.boundary;
    res.iterations = r.iterations + inner.iterations;
    res.tolerance_achieved = opts.arg_abs_tol;
    return res;
}

std::vector<double> dual_weights(const EmpiricalDistribution& d,
                                 const DivergenceSpec& spec,
                                 const RiskResult& result) {
    if (!result.mu_star)
        throw std::invalid_argument("dual_weights: result carries no optimizer");
    const double mu = *result.mu_star;

    std::vector<double> z(d.size());
    if (result.t_star) {
        const double t = *result.t_star;
        for (std::size_t i = 0; i < d.size(); ++i)
            z[i] = spec.g_prime((d.value(i) - mu) / t);
    } else if (spec.homogeneous_conjugate()) {
        // g' is a step function, so the t -> 0 limit of g'((x - mu)/t)
        // depends only on the sign of x - mu
        for (std::size_t i = 0; i < d.size(); ++i)
            z[i] = spec.g_prime(d.value(i) - mu);
    } else {
        throw std::runtime_error("dual_weights: boundary optimizer, weights unavailable");
    }

    double mean_z = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) mean_z += d.weight(i) * z[i];
    if (std::abs(mean_z - 1.0) > 1e-4)
        throw std::runtime_error("dual_weights: stationarity residual exceeds 1e-4");
    for (double& v : z) v /= mean_z;
    return z;
}

double entropic_risk(const EmpiricalDistribution& d, double epsilon) {
    if (!(epsilon > 0.0))
        throw std::domain_error("entropic_risk: epsilon must be positive");
    const double m = d.max();
    auto objective = [&](double t) {
        // t log E exp(X/t) = max X + t log E exp((X - max X)/t)
        double acc = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            acc += d.weight(i) * std::exp((d.value(i) - m) / t);
        return t * epsilon + m + t * std::log(acc);
    };
    ScalarMinResult r = minimize_positive(objective, 1.0, 1e-13, 1e13);
    return r.fx;
}

}  // namespace tailrisk
