// SPDX-License-Identifier: Apache-2.0

#ifndef TAILRISK_SCALAR_OPT_HPP
#define TAILRISK_SCALAR_OPT_HPP

#include <functional>

namespace tailrisk {

/// Outcome of a 1-D minimization. `boundary_low`/`boundary_high` indicate
/// that the objective kept decreasing toward the search limit, so `x` is the
/// limit probe and `fx` the value there (the infimum is approached, not
/// attained).
struct ScalarMinResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool boundary_low = false;
    bool boundary_high = false;
};

struct GoldenOptions {
    double arg_rel_tol = 1e-10;  // relative tolerance on the argument
    double arg_abs_tol = 1e-12;  // absolute floor for the argument tolerance
    double val_abs_tol = 1e-12;  // early stop when the bracket is this flat
    int max_iterations = 500;
};

/// Golden-section minimization of a unimodal function on [a, b].
/// Non-finite values are treated as +infinity.
ScalarMinResult golden_section(const std::function<double(double)>& f,
                               double a, double b,
                               const GoldenOptions& opts = {});

/// Minimizes a unimodal function over t > 0. A bracket is found by geometric
/// expansion from `t0` in both directions until the objective increases; if
/// the objective is still decreasing at `t_min` (`t_max`), the limit probe is
/// returned with the matching boundary flag set.
ScalarMinResult minimize_positive(const std::function<double(double)>& f,
                                  double t0 = 1.0,
                                  double t_min = 1e-13,
                                  double t_max = 1e13,
                                  const GoldenOptions& opts = {});

/// Minimizes a unimodal function on the real line, bracketing by expansion
/// from [lo, hi].
ScalarMinResult minimize_real(const std::function<double(double)>& f,
                              double lo, double hi,
                              const GoldenOptions& opts = {});

/// Smallest x in [lo, hi] with pred(x) true, assuming pred is monotone
/// (false below the threshold, true above). Bisects to relative width
/// `rel_tol`. Both endpoints are trusted as given: pred(hi) must be true.
double bisect_threshold(const std::function<bool(double)>& pred,
                        double lo, double hi, double rel_tol = 1e-15);

/// Root of a continuous monotone function with f(lo), f(hi) of opposite sign.
double bisect_root(const std::function<double(double)>& f,
                   double lo, double hi, double abs_tol = 1e-12);

/// Adaptive Simpson quadrature on [a, b].
double adaptive_simpson(const std::function<double(double)>& f,
                        double a, double b,
                        double abs_tol = 1e-10, int max_depth = 40);

}  // namespace tailrisk

#endif
