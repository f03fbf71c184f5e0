// SPDX-License-Identifier: Apache-2.0

#ifndef TAILRISK_ORLICZ_HPP
#define TAILRISK_ORLICZ_HPP

#include <optional>
#include <vector>

#include "tailrisk/divergence.hpp"
#include "tailrisk/empirical.hpp"

namespace tailrisk {

/** \brief Risk value plus optimizer certificate.
 *
 *  `t_star` is the scale of the perspective objective t (eps + E g((X-mu)/t))
 *  and `mu_star` the shift of the infimal convolution inf_mu mu + V(X - mu);
 *  both are absent when the infimum is only approached at the boundary of
 *  the search range (`boundary` set). Dual weights, when present, satisfy
 *  Z >= 0, weighted mean 1 and E[XZ] <= value (up to tolerance).
 */
struct RiskResult {
    double value = 0.0;
    std::optional<double> t_star;
    std::optional<double> mu_star;
    std::optional<std::vector<double>> dual_weights;
    int iterations = 0;
    double tolerance_achieved = 0.0;
    bool boundary = false;
};

/// Luxemburg norm inf{lambda > 0 : E Phi(|X|/lambda) <= 1}; 0 iff X = 0.
double luxemburg_norm(const EmpiricalDistribution& d, const YoungFunction& Phi);

/// Orlicz norm in Amemiya form inf_{t>0} t (1 + E gbar(|X|/t)).
double orlicz_norm(const EmpiricalDistribution& d, const YoungFunction& gbar);

/// Orlicz regret V_{g_eps}(X) = inf_{t>0} t (eps + E g(X/t)); signed X, no
/// absolute value. Positively homogeneous g (cvar/expectation families)
/// attains the infimum only as t -> 0 and returns the analytic limit
/// E[g(X)] with the boundary flag set.
RiskResult orlicz_regret(const EmpiricalDistribution& d, const DivergenceSpec& spec);

/// f-divergence risk measure R_{g,eps}(X) = inf_mu mu + V_{g_eps}(X - mu):
/// outer minimization over mu in [min X - 1, max X + 1], inner orlicz_regret.
RiskResult divergence_risk(const EmpiricalDistribution& d, const DivergenceSpec& spec);

/// Envelope certificate Z_i = g'((X_i - mu*)/t*), renormalized to weighted
/// mean 1 when the stationarity residual is below 1e-4. Boundary optimizers
/// without a homogeneous-conjugate family have no weights and throw.
std::vector<double> dual_weights(const EmpiricalDistribution& d,
                                 const DivergenceSpec& spec,
                                 const RiskResult& result);

/// Coherent entropic risk inf_{t>0} t*eps + t*log E[exp(X/t)], evaluated
/// through log-sum-exp; the closed-form oracle for the KL family.
double entropic_risk(const EmpiricalDistribution& d, double epsilon);

}  // namespace tailrisk

#endif
