// SPDX-License-Identifier: Apache-2.0

#include "tailrisk/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tailrisk/empirical.hpp"
#include "tailrisk/extremal.hpp"
#include "tailrisk/orlicz.hpp"

namespace tailrisk {

namespace {

double predict(std::span<const double> params, const Dataset& d, std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d.dim; ++j) acc += params[j] * d.feature(i, j);
    return acc;
}

double loss_value(LossKind kind, double pred, double target) {
    switch (kind) {
        case LossKind::squared: {
            const double r = pred - target;
            return r * r;
        }
        case LossKind::absolute:
            return std::abs(pred - target);
        case LossKind::logistic: {
            // softplus(-y * pred), stable for large arguments
            const double z = -target * pred;
            return z > 30.0 ? z : std::log1p(std::exp(z));
        }
    }
    return 0.0;
}

double loss_dpred(LossKind kind, double pred, double target) {
    switch (kind) {
        case LossKind::squared:
            return 2.0 * (pred - target);
        case LossKind::absolute: {
            const double r = pred - target;
            return r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
        }
        case LossKind::logistic: {
            const double z = -target * pred;
            const double s = z > 30.0 ? 1.0 : std::exp(z) / (1.0 + std::exp(z));
            return -target * s;
        }
    }
    return 0.0;
}

// probability masses: uniform when absent, rescaled to sum 1 otherwise
std::vector<double> normalized_weights(const std::vector<double>& w, std::size_t n) {
    if (w.empty()) return std::vector<double>(n, 1.0 / static_cast<double>(n));
    double total = 0.0;
    for (double v : w) total += v;
    std::vector<double> out(w);
    for (double& v : out) v /= total;
    return out;
}

}  // namespace

void Dataset::validate() const {
    if (n < 1) throw std::invalid_argument("Dataset: n must be at least 1");
    if (features.size() != n * dim || targets.size() != n)
        throw std::invalid_argument("Dataset: shape mismatch");
    for (double v : features)
        if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite feature");
    for (double v : targets)
        if (!std::isfinite(v)) throw std::invalid_argument("Dataset: non-finite target");
    if (!weights.empty() && weights.size() != n)
        throw std::invalid_argument("Dataset: weights length mismatch");
}

std::vector<double> spectral_weights(const std::vector<double>& losses,
                                     const std::vector<double>& weights,
                                     const FundamentalFunction& phi) {
    const std::size_t n = losses.size();
    const std::vector<double> w = normalized_weights(weights, n);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return losses[a] > losses[b]; });

    std::vector<double> z(n, 0.0);
    double cum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        // maximal tied block
        std::size_t j = i;
        double block_mass = 0.0;
        while (j < n && losses[order[j]] == losses[order[i]]) {
            block_mass += w[order[j]];
            ++j;
        }
        const double lo = cum;
        const double hi = std::min(1.0, cum + block_mass);
        const double density = (phi(hi) - phi(lo)) / block_mass;
        for (std::size_t k = i; k < j; ++k) z[order[k]] = density;
        cum = hi;
        i = j;
    }
    return z;
}

namespace {

RiskObjective risk_of_losses(const std::vector<double>& losses,
                             const std::vector<double>& base_weights,
                             const RiskSpec& risk) {
    const std::size_t n = losses.size();
    EmpiricalDistribution dist(losses, base_weights);
    RiskObjective out;

    if (risk.measure == "spectral") {
        FundamentalFunction phi = risk_fundamental(risk.resolve());
        out.value = spectral_risk(dist, phi);
        out.weights = spectral_weights(losses, base_weights, phi);
        return out;
    }
    if (risk.measure == "tm") {
        FundamentalFunction phi = risk_fundamental(risk.resolve());
        TmResult r = tm_risk_detail(dist, phi);
        out.value = r.value;
        const double t = r.t_star;
        if (t <= 0.0 || t >= 1.0) {
            out.weights.assign(n, 1.0);  // the E[X] closure
        } else {
            const double w = (1.0 - phi(1.0 - t)) / t;
            FundamentalFunction cvar_phi = FundamentalFunction::from_function(
                [t](double s) { return std::min(1.0, s / (1.0 - t)); }, true, "cvar-mix");
            std::vector<double> zc = spectral_weights(losses, base_weights, cvar_phi);
            out.weights.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                out.weights[i] = w + (1.0 - w) * zc[i];
        }
        return out;
    }

    // divergence measure
    if (risk.family == "expectation") {
        out.value = dist.mean();
        out.weights.assign(n, 1.0);
        return out;
    }
    DivergenceSpec spec = risk.resolve();
    RiskResult r = divergence_risk(dist, spec);
    out.value = r.value;
    if (r.mu_star && (r.t_star || spec.homogeneous_conjugate())) {
        const double mu = *r.mu_star;
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double y = r.t_star ? (losses[i] - mu) / *r.t_star : losses[i] - mu;
            z[i] = spec.g_prime(y);
        }
        double mean_z = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean_z += base_weights[i] * z[i];
        if (std::abs(mean_z - 1.0) <= 1e-4) {
            for (double& v : z) v /= mean_z;
            out.weights = std::move(z);
            return out;
        }
    }
    // boundary or failed stationarity: spectral weights of the equivalent
    // fundamental function, flagged
    FundamentalFunction phi = risk_fundamental(spec);
    out.weights = spectral_weights(losses, base_weights, phi);
    out.spectral_fallback = true;
    return out;
}

}  // namespace

RiskObjective risk_objective(std::span<const double> params, const Dataset& data,
                             const RiskSpec& risk, LossKind loss) {
    data.validate();
    const std::size_t n = data.n;
    std::vector<double> losses(n);
    for (std::size_t i = 0; i < n; ++i)
        losses[i] = loss_value(loss, predict(params, data, i), data.targets[i]);
    return risk_of_losses(losses, normalized_weights(data.weights, n), risk);
}

TrainResult train(const Dataset& data, const TrainConfig& cfg) {
    data.validate();
    if (!(cfg.step_size > 0.0)) throw std::invalid_argument("train: step_size must be positive");
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("train: tolerance must be positive");

    const std::size_t n = data.n, dim = data.dim;
    const std::vector<double> w = normalized_weights(data.weights, n);

    std::vector<double> params(dim, 0.0);
    std::vector<double> losses(n), preds(n);

    auto evaluate = [&](const std::vector<double>& theta) -> RiskObjective {
        for (std::size_t i = 0; i < n; ++i) {
            preds[i] = 0.0;
            for (std::size_t j = 0; j < dim; ++j) preds[i] += theta[j] * data.feature(i, j);
            losses[i] = loss_value(cfg.loss, preds[i], data.targets[i]);
            if (!std::isfinite(losses[i]))
                throw std::runtime_error("train: objective became non-finite");
        }
        return risk_of_losses(losses, w, cfg.risk);
    };

    TrainResult res;
    RiskObjective cur = evaluate(params);
    res.history.push_back(cur.value);

    double eta = cfg.step_size;
    std::vector<double> grad(dim), cand(dim);
    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        // gradient = sum_i w_i Z_i dloss_i x_i (preds/losses match params)
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double gi = w[i] * cur.weights[i] * loss_dpred(cfg.loss, preds[i], data.targets[i]);
            if (gi == 0.0) continue;
            for (std::size_t j = 0; j < dim; ++j) grad[j] += gi * data.feature(i, j);
        }
        double gnorm = 0.0;
        for (double gj : grad) gnorm += gj * gj;
        if (gnorm == 0.0) break;

        // backtracking halving; a candidate that overflows the losses is
        // treated the same as an objective increase
        RiskObjective next;
        bool accepted = false;
        while (eta >= 1e-12) {
            for (std::size_t j = 0; j < dim; ++j) cand[j] = params[j] - eta * grad[j];
            bool finite = true;
            try {
                next = evaluate(cand);
            } catch (const std::runtime_error&) {
                finite = false;
            }
            if (finite && next.value <= cur.value) { accepted = true; break; }
            eta *= 0.5;
        }
        if (!accepted) {
            evaluate(params);  // restore preds/losses for the final state
            break;
        }
        const double prev = cur.value;
        params = cand;
        cur = std::move(next);
        res.history.push_back(cur.value);
        res.epochs = epoch + 1;
        if (std::abs(prev - cur.value) < cfg.tolerance) break;
    }
    res.params = std::move(params);
    return res;
}

}  // namespace tailrisk
