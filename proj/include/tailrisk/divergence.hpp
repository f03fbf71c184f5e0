// SPDX-License-Identifier: Apache-2.0

#ifndef TAILRISK_DIVERGENCE_HPP
#define TAILRISK_DIVERGENCE_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace tailrisk {

enum class DivergenceFamily {
    kl,           // f(x) = x log x - (x - 1)
    chi2,         // f(x) = (x - 1)^2
    cvar,         // f = convex indicator of [0, 1/(1-alpha)]
    power,        // f(x) = (x^p - 1) for x >= 1, 0 below (Young divergence)
    expectation,  // f = convex indicator of [0, 1]
    custom,       // piecewise-linear table
    young_derived // f(x) = (Phi(x) - Phi(1)) for x >= 1, from a Young function
};

/** \brief Young function: left-continuous, increasing, convex, Phi(0) = 0.
 *
 *  `phi` may return +infinity. `phi_inv` is the generalized left-continuous
 *  inverse sup{x : phi(x) < y}, with the convention that an empty set inside
 *  the domain maps to 0.
 */
struct YoungFunction {
    std::function<double(double)> phi;
    std::function<double(double)> phi_inv;
    bool finite = true;
    std::string name;

    double operator()(double x) const { return phi(x); }
};

/** \brief A divergence function f with its conjugate calculus.
 *
 *  f is proper, convex, nonnegative, lower semi-continuous with f(1) = 0,
 *  f(0) < infinity and superlinear growth; g is its finite convex increasing
 *  conjugate. Construction validates these conditions. Instances are
 *  immutable and cheap to copy.
 *
 *  Infinite f values are encoded as +infinity with extended-real arithmetic;
 *  0 * infinity is treated as 0 in expectation sums.
 */
class DivergenceSpec {
public:
    double f(double x) const;
    double g(double y) const;
    /// Right-derivative selection from the subdifferential of g.
    double g_prime(double y) const;
    /// Generalized left-continuous inverse sup{x : f(x) < y}; returns 0 for
    /// y <= 0 (empty set within the domain).
    double f_inv(double y) const;

    double epsilon() const { return epsilon_; }
    bool finite_f() const { return finite_f_; }
    DivergenceFamily family() const { return family_; }
    double alpha() const { return alpha_; }
    double p() const { return p_; }
    std::string family_name() const;

    /// epsilon-scaled forms: f_eps = f/eps, g_eps(y) = g(eps y)/eps.
    double f_eps(double x) const;
    double g_eps(double y) const;
    double g_eps_prime(double y) const;

    /// Same divergence at a different risk-aversion level.
    DivergenceSpec scaled(double new_epsilon) const;

    /// g is positively homogeneous (indicator-type f); the Orlicz regret then
    /// attains its infimum only in the limit t -> 0.
    bool homogeneous_conjugate() const {
        return family_ == DivergenceFamily::cvar || family_ == DivergenceFamily::expectation;
    }

    const std::vector<double>& table_x() const { return table_x_; }
    const std::vector<double>& table_f() const { return table_f_; }

    friend DivergenceSpec make_kl(double epsilon);
    friend DivergenceSpec make_chi2(double epsilon);
    friend DivergenceSpec make_cvar(double alpha, double epsilon);
    friend DivergenceSpec make_power(double p, double epsilon);
    friend DivergenceSpec make_expectation(double epsilon);
    friend DivergenceSpec make_custom(const std::vector<std::pair<double, double>>& table,
                                      double epsilon);
    friend DivergenceSpec divergence_from_young(const YoungFunction& Phi, double epsilon);

private:
    DivergenceSpec() = default;
    void validate() const;

    DivergenceFamily family_ = DivergenceFamily::expectation;
    double epsilon_ = 1.0;
    double alpha_ = 0.0;  // cvar
    double p_ = 2.0;      // power
    bool finite_f_ = true;
    std::vector<double> table_x_, table_f_;  // custom: piecewise-linear vertices
    YoungFunction young_;                    // young_derived backing
};

DivergenceSpec make_kl(double epsilon = 1.0);
DivergenceSpec make_chi2(double epsilon = 1.0);
DivergenceSpec make_cvar(double alpha, double epsilon = 1.0);
DivergenceSpec make_power(double p, double epsilon = 1.0);
DivergenceSpec make_expectation(double epsilon = 1.0);
/// Table of [x, f(x)] vertices, x >= 0 strictly increasing, containing x = 1
/// with f = 0; piecewise-linear between vertices, +infinity beyond the last.
DivergenceSpec make_custom(const std::vector<std::pair<double, double>>& table,
                           double epsilon = 1.0);

/// Young divergence function f(x) = (Phi(x) - Phi(1)) for x >= 1, zero
/// below: a divergence equivalent to the Young function it came from.
DivergenceSpec divergence_from_young(const YoungFunction& Phi, double epsilon = 1.0);

/// Young-ification: f-bar vanishes on [0,1] and equals f above; g-bar
/// vanishes on the nonpositive axis and equals g above, a Young function on
/// the nonnegative domain.
std::pair<YoungFunction, YoungFunction> youngify(const DivergenceSpec& spec);

/// Alias for DivergenceSpec::scaled, the Prop-style free function.
DivergenceSpec scale_epsilon(const DivergenceSpec& spec, double epsilon);

/// Generalized left-continuous inverse sup{x : h(x) < y} of a nondecreasing
/// h on [0, infinity), by bisection with geometric bracket expansion.
double generalized_inverse(const std::function<double(double)>& h, double y,
                           double x_hint = 1.0);

/// Numeric convex conjugate sup_{x >= 0} (x y - h(x)) by golden-section over
/// the concave objective, bracket [0, B] with B doubled until the objective
/// decreases at B (capped at 1e12). Used for validation and custom tables.
double numeric_conjugate(const std::function<double(double)>& h, double y);

/// Conjugate Young function of a finite, strictly increasing Phi, evaluated
/// through the analytic inverse: Psi(y) = sup_{u>=0} (y Phi^{-1}(u) - u).
YoungFunction conjugate_young(const YoungFunction& Phi);

}  // namespace tailrisk

#endif
