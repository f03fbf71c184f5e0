// SPDX-License-Identifier: Apache-2.0

#ifndef TAILRISK_EMPIRICAL_HPP
#define TAILRISK_EMPIRICAL_HPP

#include <cstddef>
#include <vector>

namespace tailrisk {

/** \brief A weighted, sorted sample set: the empirical law of a loss variable.
 *
 *  Values are stored sorted ascending (ties allowed); weights are strictly
 *  positive and normalized to sum to 1 on construction. If the input weights
 *  did not sum to 1 they are rescaled and `was_renormalized()` reports it.
 *
 *  All operations on this type are exact for the empirical law: they are not
 *  estimates of a population quantity.
 *
 *  Conventions (both inverses of the distribution function are in play):
 *   - quantile() is the left-continuous inverse F^{-1}(q) = sup{l : F(l) < q}.
 *   - decreasing_rearrangement() uses the right-continuous inverse of the
 *     survival-type distribution function of |X|.
 */
class EmpiricalDistribution {
public:
    /// Uniform weights.
    explicit EmpiricalDistribution(std::vector<double> values);
    EmpiricalDistribution(std::vector<double> values, std::vector<double> weights);

    std::size_t size() const { return values_.size(); }
    double value(std::size_t i) const { return values_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& weights() const { return weights_; }
    /// Cumulative weights; the last entry is exactly 1.
    const std::vector<double>& cumulative() const { return cumulative_; }

    bool was_renormalized() const { return renormalized_; }

    double mean() const;
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

    /// Pointwise map (preserves weights, re-sorts).
    template <typename F>
    EmpiricalDistribution transformed(F&& fn) const {
        std::vector<double> v(values_);
        for (double& x : v) x = fn(x);
        return EmpiricalDistribution(std::move(v), weights_);
    }

private:
    std::vector<double> values_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
    bool renormalized_ = false;
};

/** \brief Right-continuous non-increasing step function on [0, 1].
 *
 *  Used for decreasing rearrangements: level k applies on
 *  [breakpoints[k-1], breakpoints[k]), with the last segment closed at 1.
 */
struct StepFunction {
    std::vector<double> breakpoints;  // strictly increasing, last == 1
    std::vector<double> levels;

    double operator()(double t) const;
    /// Exact integral over [0, t].
    double integral(double t) const;
};

/// Decreasing rearrangement X* of |X|: the backwards quantile function
/// F_{|X|}^{-1}(1-t), with segment lengths equal to the weights.
StepFunction decreasing_rearrangement(const EmpiricalDistribution& d);

/// Maximal function X**(t) = (1/t) * integral of X* over [0, t], t in (0, 1].
/// X**(1) is the mean of |X|.
double maximal_function(const StepFunction& rearrangement, double t);

/// Conditional value at risk at level alpha in [0, 1): the exact tail
/// integral (1/(1-alpha)) * int_alpha^1 F^{-1}(q) dq. alpha = 0 is the mean.
double cvar(const EmpiricalDistribution& d, double alpha);

/// Left-continuous quantile F^{-1}(q) = sup{l : F(l) < q}, q in (0, 1].
double quantile(const EmpiricalDistribution& d, double q);

}  // namespace tailrisk

#endif
