// SPDX-License-Identifier: Apache-2.0

#ifndef TAILRISK_DEVIATION_HPP
#define TAILRISK_DEVIATION_HPP

#include <span>
#include <vector>

#include "tailrisk/divergence.hpp"
#include "tailrisk/empirical.hpp"
#include "tailrisk/fundamental.hpp"

namespace tailrisk {

/// Orlicz deviation bound P(X >= x) <= 1/Psi(x / ||X||_Psi^L), clamped at 1.
/// Psi must be finite and lux_norm > 0; x <= 0 is a domain error.
double deviation_bound(const YoungFunction& Psi, double lux_norm, double x);

/// Reference-distribution bound: synthesizes Psi from the envelope
/// Psi^{-1}(1/t) = Y*(t) (primal side), computes the Luxemburg norm of d and
/// returns mu_{Y*}(x / norm) -- the distribution function of the reference
/// evaluated at the normalized threshold.
double reference_bound(const ReferenceDistribution& Y,
                       const EmpiricalDistribution& d, double x);

struct DeviationRow {
    double x = 0.0;
    double survival = 0.0;  // weighted mass of {X >= x}, ties counted in
    double bound = 0.0;
    bool pass = false;
};

/// Empirical check of the deviation inequality on a grid of thresholds. The
/// bound is a theorem for the empirical law itself, so a failing row beyond
/// 1e-12 slack falsifies the implementation, not the data.
std::vector<DeviationRow> verify_deviation(const EmpiricalDistribution& d,
                                           const YoungFunction& Psi,
                                           std::span<const double> grid);

}  // namespace tailrisk

#endif
