// SPDX-License-Identifier: Apache-2.0

#include "tailrisk/scalar_opt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tailrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
}

}  // namespace

ScalarMinResult golden_section(const std::function<double(double)>& f,
                               double a, double b,
                               const GoldenOptions& opts) {
    if (!(a <= b)) throw std::invalid_argument("golden_section: empty interval");
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;   // 0.618...
    static const double invphi2 = (3.0 - std::sqrt(5.0)) / 2.0;  // 0.382...

    double x1 = a + invphi2 * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = safe_eval(f, x1);
    double f2 = safe_eval(f, x2);
    const double fa = safe_eval(f, a);
    const double fb = safe_eval(f, b);

    ScalarMinResult res;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        const double scale = std::max(std::abs(a), std::abs(b));
        const double tol = std::max(opts.arg_abs_tol, opts.arg_rel_tol * scale);
        if (b - a <= tol) break;
        if (f1 <= f2) {
            b = x2;
            x2 = x1; f2 = f1;
            x1 = a + invphi2 * (b - a);
            f1 = safe_eval(f, x1);
        } else {
            a = x1;
            x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = safe_eval(f, x2);
        }
    }
    res.iterations = it;
    res.x = x1; res.fx = f1;
    if (f2 < res.fx) { res.x = x2; res.fx = f2; }
    if (fa < res.fx) { res.x = a; res.fx = fa; }
    if (fb < res.fx) { res.x = b; res.fx = fb; }
    return res;
}

ScalarMinResult minimize_positive(const std::function<double(double)>& f,
                                  double t0, double t_min, double t_max,
                                  const GoldenOptions& opts) {
    const double u_min = std::log(t_min);
    const double u_max = std::log(t_max);
    const double step = std::log(4.0);
    int evals = 0;
    auto g = [&](double u) { ++evals; return safe_eval(f, std::exp(u)); };

    double um = std::min(u_max, std::max(u_min, std::log(t0)));
    double fm = g(um);
    if (!std::isfinite(fm)) {
        // objective overflows at the start point; scan the ladder for any
        // finite probe
        for (double u = u_min; u <= u_max; u += step) {
            const double fu = g(u);
            if (std::isfinite(fu)) { um = u; fm = fu; break; }
        }
        if (!std::isfinite(fm))
            throw std::runtime_error("minimize_positive: objective not finite anywhere");
    }

    double ul = std::max(u_min, um - step);
    double uh = std::min(u_max, um + step);
    double fl = (ul < um) ? g(ul) : fm;
    double fh = (uh > um) ? g(uh) : fm;

    if (fl < fm && fl <= fh) {
        // downhill to the left: slide the window
        while (fl < fm) {
            if (ul <= u_min) {
                ScalarMinResult r;
                r.x = std::exp(ul); r.fx = fl; r.iterations = evals;
                r.boundary_low = true;
                return r;
            }
            uh = um; um = ul; fm = fl;
            ul = std::max(u_min, ul - step);
            fl = g(ul);
        }
    } else if (fh < fm) {
        while (fh < fm) {
            if (uh >= u_max) {
                ScalarMinResult r;
                r.x = std::exp(uh); r.fx = fh; r.iterations = evals;
                r.boundary_high = true;
                return r;
            }
            ul = um; um = uh; fm = fh;
            uh = std::min(u_max, uh + step);
            fh = g(uh);
        }
    }

    // bracket [ul, uh] contains the minimum; golden in log-space, where an
    // absolute tolerance in u is a relative tolerance in t
    GoldenOptions gopts = opts;
    gopts.arg_abs_tol = std::max(opts.arg_rel_tol, 1e-14);
    gopts.arg_rel_tol = 0.0;
    ScalarMinResult r = golden_section([&](double u) { return safe_eval(f, std::exp(u)); },
                                       ul, uh, gopts);
    r.iterations += evals;
    r.x = std::exp(r.x);
    return r;
}

ScalarMinResult minimize_real(const std::function<double(double)>& f,
                              double lo, double hi,
                              const GoldenOptions& opts) {
    return golden_section(f, lo, hi, opts);
}

double bisect_threshold(const std::function<bool(double)>& pred,
                        double lo, double hi, double rel_tol) {
    if (!(lo < hi)) throw std::invalid_argument("bisect_threshold: bad bracket");
    for (int it = 0; it < 200 && (hi - lo) > rel_tol * std::max(1e-300, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (pred(mid)) hi = mid; else lo = mid;
    }
    return hi;
}

double bisect_root(const std::function<double(double)>& f,
                   double lo, double hi, double abs_tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw std::invalid_argument("bisect_root: no sign change in bracket");
    for (int it = 0; it < 200 && (hi - lo) > abs_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f,
                     double a, double fa, double b, double fb,
                     double m, double fm, double whole,
                     double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f,
                        double a, double b, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

}  // namespace tailrisk
