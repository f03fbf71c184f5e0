// SPDX-License-Identifier: Apache-2.0

#include "tailrisk/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tailrisk {

namespace {

void validate_and_normalize(std::vector<double>& values,
                            std::vector<double>& weights,
                            std::vector<double>& cumulative,
                            bool& renormalized) {
    if (values.empty())
        throw std::invalid_argument("EmpiricalDistribution: need at least one sample");
    if (weights.size() != values.size())
        throw std::invalid_argument("EmpiricalDistribution: values/weights length mismatch");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("EmpiricalDistribution: non-finite value");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("EmpiricalDistribution: weights must be positive");

    // canonical order: ascending by value, weight as tiebreak, so that every
    // permutation of the input produces a bit-identical representation
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return weights[a] < weights[b];
    });
    std::vector<double> v(values.size()), w(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        v[i] = values[order[i]];
        w[i] = weights[order[i]];
    }
    values = std::move(v);
    weights = std::move(w);

    // normalization total accumulated in canonical order
    double total = 0.0;
    for (double wi : weights) total += wi;
    renormalized = std::abs(total - 1.0) > 1e-12;
    if (renormalized)
        for (double& wi : weights) wi /= total;

    cumulative.resize(values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cumulative[i] = acc;
    }
    cumulative.back() = 1.0;  // pin the top of the ladder exactly
}

}  // namespace

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values)
    : values_(std::move(values)),
      weights_(values_.size(), values_.empty() ? 0.0 : 1.0 / static_cast<double>(values_.size())) {
    validate_and_normalize(values_, weights_, cumulative_, renormalized_);
    renormalized_ = false;  // uniform weights are exact by construction
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values,
                                             std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
    validate_and_normalize(values_, weights_, cumulative_, renormalized_);
}

double EmpiricalDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) m += weights_[i] * values_[i];
    return m;
}

double StepFunction::operator()(double t) const {
    if (t < 0.0 || t > 1.0)
        throw std::domain_error("StepFunction: argument outside [0,1]");
    // level k on [b_{k-1}, b_k), last segment closed at 1
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    std::size_t k = static_cast<std::size_t>(it - breakpoints.begin());
    if (k >= levels.size()) k = levels.size() - 1;
    return levels[k];
}

double StepFunction::integral(double t) const {
    if (t < 0.0 || t > 1.0)
        throw std::domain_error("StepFunction: argument outside [0,1]");
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double hi = std::min(breakpoints[k], t);
        if (hi <= prev) break;
        acc += levels[k] * (hi - prev);
        prev = breakpoints[k];
    }
    return acc;
}

StepFunction decreasing_rearrangement(const EmpiricalDistribution& d) {
    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // stable over the canonical base order: permutation-invariant output
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(d.value(a)) > std::abs(d.value(b));
    });

    StepFunction r;
    r.breakpoints.resize(n);
    r.levels.resize(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += d.weight(order[i]);
        r.breakpoints[i] = acc;
        r.levels[i] = std::abs(d.value(order[i]));
    }
    r.breakpoints.back() = 1.0;
    return r;
}

double maximal_function(const StepFunction& rearrangement, double t) {
    if (!(t > 0.0) || t > 1.0)
        throw std::domain_error("maximal_function: t must lie in (0,1]");
    return rearrangement.integral(t) / t;
}

double cvar(const EmpiricalDistribution& d, double alpha) {
    if (!(alpha >= 0.0) || alpha >= 1.0)
        throw std::domain_error("cvar: alpha must lie in [0,1)");
    // exact integral of the quantile function over (alpha, 1]
    const auto& cum = d.cumulative();
    double acc = 0.0;
    double lo = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double hi = cum[k];
        const double a = std::max(lo, alpha);
        if (hi > a) acc += d.value(k) * (hi - a);
        lo = hi;
    }
    return acc / (1.0 - alpha);
}

double quantile(const EmpiricalDistribution& d, double q) {
    if (!(q > 0.0) || q > 1.0)
        throw std::domain_error("quantile: q must lie in (0,1]");
    const auto& cum = d.cumulative();
    auto it = std::lower_bound(cum.begin(), cum.end(), q);
    std::size_t k = static_cast<std::size_t>(it - cum.begin());
    if (k >= d.size()) k = d.size() - 1;
    return d.value(k);
}

}  // namespace tailrisk
