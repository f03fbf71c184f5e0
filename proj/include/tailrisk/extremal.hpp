// SPDX-License-Identifier: Apache-2.0

#ifndef TAILRISK_EXTREMAL_HPP
#define TAILRISK_EXTREMAL_HPP

#include <string>

#include "tailrisk/empirical.hpp"
#include "tailrisk/fundamental.hpp"

namespace tailrisk {

/// Marcinkiewicz quasi-norm sup_{0<t<=1} phi(t) X*(t), computed exactly over
/// the rearrangement breakpoints (X* constant per segment, phi increasing).
double marcinkiewicz_quasi(const EmpiricalDistribution& d, const FundamentalFunction& phi);

/// Marcinkiewicz norm sup_{0<t<=1} phi(t) X**(t): per rearrangement segment
/// the objective is phi(t)(A/t + B); segment endpoints plus a pre-scan with
/// golden refinement locate the supremum (>= the quasi-norm always).
double marcinkiewicz_norm(const EmpiricalDistribution& d, const FundamentalFunction& phi);

/// Lorentz norm int_0^1 X* dphi, exact Stieltjes sum over the rearrangement
/// of |X| (the phi(0+) atom weights the essential supremum). phi must be
/// concave; apply least_concave_majorant first otherwise.
double lorentz_norm(const EmpiricalDistribution& d, const FundamentalFunction& phi);

/// Spectral risk R_phi(X) = int_0^1 F^{-1}(1-w) dphi(w): the signed-quantile
/// Stieltjes sum with the same concavity requirement.
double spectral_risk(const EmpiricalDistribution& d, const FundamentalFunction& phi);

/// TM risk: sup over t in (0,1) of w(t) E[X] + (1-w(t)) CVaR_t(X) with
/// w(t) = (1 - phi(1-t))/t. Requires concave phi with phi(0+) = 0 and
/// phi(1) = 1 (otherwise the mixture coefficients leave [0,1]).
double tm_risk(const EmpiricalDistribution& d, const FundamentalFunction& phi);

struct TmResult {
    double value = 0.0;
    double t_star = 0.0;  // attaining mixture level; 0 encodes the E[X] closure
};

/// tm_risk plus the attaining level (used for gradient weights).
TmResult tm_risk_detail(const EmpiricalDistribution& d, const FundamentalFunction& phi);

/// Numeric check of the quasi-norm/norm equivalence condition: for
/// s in {2, 4, 16}, sup_t psi(t/s)/psi(t) < 1 where psi(t) = t/phi(t).
/// Closed-form phi are additionally probed far below the grid (down to
/// 1e-290) where the ratio of slowly-varying functions creeps toward 1;
/// tabulated phi are checked on their grid only.
bool krein_condition(const FundamentalFunction& phi);

/// Amemiya Orlicz norm whose fundamental function is phi: the dual envelope
/// phi(t)/t is turned into a Young function Phi (Phi^{-1}(x) = x phi(1/x)),
/// and the norm is inf_t t (1 + E Psi(|X|/t)) with Psi the conjugate of Phi.
/// Bounded dual envelopes (phi equivalent to c t, the expectation/cvar
/// degenerate case) return the L1-type value E|X| * lim phi(t)/t.
double orlicz_norm_for_fundamental(const EmpiricalDistribution& d,
                                   const FundamentalFunction& phi);

struct EmbeddingReport {
    double marcinkiewicz = 0.0;
    double orlicz = 0.0;
    double lorentz = 0.0;
    bool ok = false;
    std::string witness;  // set when the sandwich fails
};

/// Checks the sandwich marcinkiewicz <= orlicz_value <= lorentz within 1e-9
/// slack; all three measures must share phi.
EmbeddingReport embedding_check(const EmpiricalDistribution& d,
                                const FundamentalFunction& phi,
                                double orlicz_value);

}  // namespace tailrisk

#endif
