// SPDX-License-Identifier: Apache-2.0

#ifndef TAILRISK_FUNDAMENTAL_HPP
#define TAILRISK_FUNDAMENTAL_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tailrisk/divergence.hpp"

namespace tailrisk {

/// Grid size for tabulated functions and grid scans; 4096 unless overridden
/// by the TAILRISK_GRID environment variable (read once per process).
std::size_t grid_size();

/// Logarithmically spaced grid on [1e-12, 1], grid_size() points, t = 1
/// included exactly. Tail information lives at t -> 0, hence log spacing.
const std::vector<double>& log_grid();

/** \brief Quasiconcave fundamental function phi : [0,1] -> R+, phi(0) = 0.
 *
 *  Either closed-form (an arbitrary callable, evaluable on all of (0,1]) or
 *  tabulated on a strictly increasing grid in (0,1] ending at t = 1
 *  (evaluated by linear interpolation, with the segment (0, t_1] interpolated
 *  from the origin). Construction verifies that phi is positive and
 *  increasing with phi(t)/t decreasing on the log grid, and rejects
 *  functions vanishing at interior points.
 */
class FundamentalFunction {
public:
    static FundamentalFunction from_function(std::function<double(double)> eval,
                                             bool concave, std::string name = {});
    static FundamentalFunction from_table(std::vector<double> ts,
                                          std::vector<double> values,
                                          std::string name = {});

    /// phi(t); phi(0) = 0 exactly. Throws for t outside [0, 1].
    double operator()(double t) const;

    bool concave() const { return concave_; }
    bool quasiconcave() const { return quasiconcave_; }
    bool tabulated() const { return tabulated_; }
    const std::string& name() const { return name_; }
    const std::vector<double>& grid_t() const { return ts_; }
    const std::vector<double>& grid_v() const { return vs_; }

private:
    FundamentalFunction() = default;
    void verify();

    std::function<double(double)> eval_;
    bool concave_ = false;
    bool quasiconcave_ = false;
    bool tabulated_ = false;
    std::vector<double> ts_, vs_;
    std::string name_;
};

/** \brief Decreasing rearrangement Y* of a reference distribution on (0,1].
 *
 *  Catalog tags keep closed forms exact: the shifted exponential
 *  Y*(t) = 1 - log t, the Pareto Y*(t) = t^{-1/p} and constants. Custom
 *  references are arbitrary callables or decreasing tables.
 */
class ReferenceDistribution {
public:
    enum class Tag { exponential_shifted, pareto, constant, custom_fn, tabulated };

    static ReferenceDistribution exponential_shifted();
    static ReferenceDistribution pareto(double p);
    static ReferenceDistribution constant(double c);
    static ReferenceDistribution from_function(std::function<double(double)> fn,
                                               std::string name = {});
    static ReferenceDistribution from_table(std::vector<double> ts,
                                            std::vector<double> values,
                                            std::string name = {});

    /// Y*(t) for t in (0, 1].
    double operator()(double t) const;

    /// Distribution function mu_{Y*}(lambda): the measure of {Y* > lambda},
    /// i.e. the right-continuous inverse of Y*. Closed forms for the catalog
    /// tags, bisection otherwise.
    double distribution_function(double lambda) const;

    Tag tag() const { return tag_; }
    double param() const { return param_; }
    const std::string& name() const { return name_; }

private:
    ReferenceDistribution() = default;

    Tag tag_ = Tag::custom_fn;
    double param_ = 0.0;
    std::function<double(double)> fn_;
    std::vector<double> ts_, vs_;
    std::string name_;
};

/// Fundamental function of the Orlicz regret measure,
/// phi(t) = t f^{-1}(eps/t); concave.
FundamentalFunction regret_fundamental(const DivergenceSpec& spec);

/// Fundamental function of the divergence risk measure,
/// phi(t) = min{1, t f^{-1}(eps/t)}: the capped regret fundamental function.
/// (The cap formula is exact for Young divergence functions; the sup-based
/// generalized inverse makes it agree for the whole catalog.)
FundamentalFunction risk_fundamental(const DivergenceSpec& spec);

/// Envelope function E = 1/phi, packaged as a reference rearrangement.
ReferenceDistribution envelope_function(const FundamentalFunction& phi);

/// Associate fundamental function phi'(t) = t/phi(t); quasiconcavity is
/// re-checked and concavity detected numerically.
FundamentalFunction associate(const FundamentalFunction& phi);

enum class ReferenceCheck { ok, needs_majorant, invalid };

/// Grid check of t -> Y*(t) * t: increasing => ok; necessity bound
/// Y*(t) <= Y*(1)/t violated => invalid; needs_majorant otherwise.
ReferenceCheck check_reference(const ReferenceDistribution& Y);

/// Least concave majorant: upper concave hull over the grid points plus the
/// origin. Requires quasiconcave input; then (1/2) phi~ <= phi <= phi~.
FundamentalFunction least_concave_majorant(const FundamentalFunction& phi);

enum class EnvelopeSide { dual, primal };

/** \brief Tail-specific Young function from an envelope: Phi^{-1}(x) = E(1/x)
 *  for x >= 1, extended below by the chord through the origin.
 *
 *  Requires E(0+) = infinity and t -> E(t) * t increasing (the least concave
 *  majorant of the product is substituted when it is not concave). The
 *  resulting Phi is finite and supercoercive. `side` names the role of the
 *  output: `dual` constrains dual-variable rearrangements (the Luxemburg
 *  envelope of L^Phi), `primal` constrains the primal space; the map from E
 *  to the Young function is the same on both sides.
 */
YoungFunction young_from_envelope(const ReferenceDistribution& E, EnvelopeSide side);

// The inverse construction (a divergence function from a Young function)
// is divergence_from_young, declared with the divergence catalog.

/// Numerically decides whether the Luxemburg norm of t -> Phi^{-1}(1/t) is
/// finite, i.e. whether the Orlicz space coincides with its Marcinkiewicz
/// space. A ladder of levels lambda = 2^k is scanned; the truncated integral
/// int_delta^1 Phi(Phi^{-1}(1/t)/lambda) dt must stabilize as delta drops
/// through {1e-3, 1e-6, 1e-9}. Returns nullopt when the quadrature does not
/// produce a usable answer (indeterminate).
std::optional<bool> marcinkiewicz_coincidence(const YoungFunction& Phi);

}  // namespace tailrisk

#endif
