// SPDX-License-Identifier: Apache-2.0

#ifndef TAILRISK_UBSR_HPP
#define TAILRISK_UBSR_HPP

#include <functional>
#include <string>

#include "tailrisk/empirical.hpp"

namespace tailrisk {

/** \brief Loss function for utility-based shortfall risk.
 *
 *  ell vanishes on the nonpositive axis and is a Young function on the
 *  nonnegative one; its conjugate ell* is supercoercive (the Orlicz-norm
 *  penalty of the envelope representation). x0 is the acceptance threshold,
 *  1 by default; real applications may rescale it.
 */
struct LossFunction {
    std::function<double(double)> ell;
    std::function<double(double)> ell_conjugate;
    double x0 = 1.0;
    std::string name;
};

/// ell(x) = (e^x - 1) for x >= 0: the entropic-type shortfall loss.
LossFunction exp_loss();
/// ell(x) = x^p / p for x >= 0, p > 1; conjugate y^q / q.
LossFunction power_loss(double p);
/// ell(x) = x^+: conjugate is the indicator of [0, 1].
LossFunction linear_loss();

/// UBSR_ell(X) = inf{m : E[ell(X - m)] <= x0}, by bisection on the
/// nonincreasing acceptance map; the inf convention picks the left endpoint
/// of the solution set for discontinuous ell.
double ubsr(const EmpiricalDistribution& d, const LossFunction& L);

/// Penalty alpha(Z) = ||Z||_{ell*}^O (Amemiya form). Z is a density with
/// respect to the base measure: nonnegative with weighted mean 1 (+-1e-9).
double ubsr_penalty(const EmpiricalDistribution& Z, const LossFunction& L);

}  // namespace tailrisk

#endif
