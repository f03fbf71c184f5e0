// SPDX-License-Identifier: Apache-2.0

#ifndef TAILRISK_LEARN_HPP
#define TAILRISK_LEARN_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "tailrisk/fundamental.hpp"
#include "tailrisk/risk_spec.hpp"

namespace tailrisk {

/// Supervised dataset for linear models; features are row-major n x dim.
struct Dataset {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> features;
    std::vector<double> targets;
    std::vector<double> weights;  // empty = uniform probability masses

    double feature(std::size_t i, std::size_t j) const { return features[i * dim + j]; }
    void validate() const;
};

enum class LossKind { squared, absolute, logistic };

struct TrainConfig {
    RiskSpec risk;
    LossKind loss = LossKind::squared;
    double step_size = 0.5;
    int max_epochs = 2000;
    double tolerance = 1e-12;
    std::uint64_t seed = 0;  // recorded for reproducibility of callers
};

struct RiskObjective {
    double value = 0.0;
    std::vector<double> weights;   // per-sample dual weights Z, weighted mean 1
    bool spectral_fallback = false;
};

/// Evaluates the configured risk measure on the per-sample losses of a
/// linear model and returns the dual weights that drive the gradient:
/// divergence families use the envelope certificate g'((loss - mu*)/t*),
/// spectral measures the phi-increments at the loss ranks (ties averaged),
/// tm the weights of the attaining mean/CVaR mixture. Boundary optimizers
/// without a certificate fall back to the spectral weights of the family's
/// fundamental function (flagged).
RiskObjective risk_objective(std::span<const double> params, const Dataset& data,
                             const RiskSpec& risk, LossKind loss = LossKind::squared);

/// Spectral gradient weights: per-sample phi-increment densities at the loss
/// ranks, averaged across tied blocks (keeps rearrangement invariance).
std::vector<double> spectral_weights(const std::vector<double>& losses,
                                     const std::vector<double>& weights,
                                     const FundamentalFunction& phi);

struct TrainResult {
    std::vector<double> params;
    std::vector<double> history;  // objective per epoch (including start)
    int epochs = 0;
};

/// Full-batch subgradient descent with backtracking halving (floor 1e-12);
/// stops on |delta objective| < tolerance or max_epochs. Deterministic.
TrainResult train(const Dataset& data, const TrainConfig& cfg);

}  // namespace tailrisk

#endif
