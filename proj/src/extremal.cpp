// SPDX-License-Identifier: Apache-2.0

#include "tailrisk/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tailrisk/orlicz.hpp"
#include "tailrisk/scalar_opt.hpp"

namespace tailrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// values sorted descending with cumulative masses; signed or absolute
struct DescendingSteps {
    std::vector<double> levels;
    std::vector<double> cum;       // cumulative mass, last = 1
    std::vector<double> integral;  // running integral of levels over mass
};

DescendingSteps descending(const EmpiricalDistribution& d, bool absolute) {
    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = absolute ? std::abs(d.value(a)) : d.value(a);
        const double vb = absolute ? std::abs(d.value(b)) : d.value(b);
        return va > vb;
    });
    DescendingSteps s;
    s.levels.resize(n);
    s.cum.resize(n);
    s.integral.resize(n);
    double mass = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = absolute ? std::abs(d.value(order[i])) : d.value(order[i]);
        const double w = d.weight(order[i]);
        mass += w;
        acc += v * w;
        s.levels[i] = v;
        s.cum[i] = mass;
        s.integral[i] = acc;
    }
    s.cum.back() = 1.0;
    return s;
}

// Stieltjes sum sum_k level_k (phi(B_k) - phi(B_{k-1})) with phi(B_0) = 0,
// which carries the phi(0+) atom on the top level exactly.
double stieltjes_against(const DescendingSteps& s, const FundamentalFunction& phi) {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
        const double cur = phi(s.cum[k]);
        acc += s.levels[k] * (cur - prev);
        prev = cur;
    }
    return acc;
}

}  // namespace

double marcinkiewicz_quasi(const EmpiricalDistribution& d, const FundamentalFunction& phi) {
    if (!phi.quasiconcave())
        throw std::invalid_argument("marcinkiewicz_quasi: phi must be quasiconcave");
    DescendingSteps s = descending(d, true);
    double best = 0.0;
    for (std::size_t k = 0; k < s.levels.size(); ++k)
        best = std::max(best, phi(s.cum[k]) * s.levels[k]);
    return best;
}

double marcinkiewicz_norm(const EmpiricalDistribution& d, const FundamentalFunction& phi) {
    if (!phi.quasiconcave())
        throw std::invalid_argument("marcinkiewicz_norm: phi must be quasiconcave");
    DescendingSteps s = descending(d, true);

    // X**(t) = (A_{k-1} + (t - B_{k-1}) v_k)/t on segment k
    double best = 0.0;
    double b_prev = 0.0, a_prev = 0.0;
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
        const double b_cur = s.cum[k];
        const double v = s.levels[k];
        const double c = a_prev - b_prev * v;  // X**(t) = c/t + v, c >= 0
        auto objective = [&](double t) { return phi(t) * (c / t + v); };
        best = std::max(best, objective(b_cur));
        if (b_cur > b_prev && c > 0.0) {
            // 64-point pre-scan guards the per-segment golden refinement
            double scan_best_t = b_cur;
            double scan_best = -kInf;
            const int scan = 64;
            for (int j = 0; j <= scan; ++j) {
                const double t = b_prev + (b_cur - b_prev) * j / scan;
                if (t <= 0.0) continue;
                const double val = objective(t);
                if (val > scan_best) { scan_best = val; scan_best_t = t; }
            }
            const double h = (b_cur - b_prev) / scan;
            const double lo = std::max(b_prev + (b_prev > 0.0 ? 0.0 : 1e-300), scan_best_t - h);
            const double hi = std::min(b_cur, scan_best_t + h);
            if (hi > lo && lo > 0.0) {
                GoldenOptions opts;
                opts.arg_abs_tol = 1e-14;
                opts.arg_rel_tol = 1e-12;
                ScalarMinResult r =
                    golden_section([&](double t) { return -objective(t); }, lo, hi, opts);
                best = std::max(best, -r.fx);
            }
        }
        b_prev = b_cur;
        a_prev = s.integral[k];
    }
    return best;
}

namespace {

double stieltjes_risk(const EmpiricalDistribution& d, const FundamentalFunction& phi,
                      bool absolute, const char* who) {
    if (!phi.concave())
        throw std::invalid_argument(std::string(who) +
                                    ": phi must be concave; apply least_concave_majorant first");
    return stieltjes_against(descending(d, absolute), phi);
}

}  // namespace

double lorentz_norm(const EmpiricalDistribution& d, const FundamentalFunction& phi) {
    return stieltjes_risk(d, phi, true, "lorentz_norm");
}

double spectral_risk(const EmpiricalDistribution& d, const FundamentalFunction& phi) {
    return stieltjes_risk(d, phi, false, "spectral_risk");
}

double tm_risk(const EmpiricalDistribution& d, const FundamentalFunction& phi) {
    return tm_risk_detail(d, phi).value;
}

TmResult tm_risk_detail(const EmpiricalDistribution& d, const FundamentalFunction& phi) {
    if (!phi.concave())
        throw std::invalid_argument("tm_risk: phi must be concave");
    // reject an atom at 0 (phi flat and non-vanishing near the origin);
    // slowly vanishing functions like 1/(1 - log t) still decay visibly
    // between 1e-6 and 1e-12
    const double phi_small = phi(1e-12);
    if (phi_small > 1e-6 && phi_small >= 0.9 * phi(1e-6))
        throw std::invalid_argument("tm_risk: phi must be continuous at 0 (phi(0+) = 0)");
    if (std::abs(phi(1.0) - 1.0) > 1e-9)
        throw std::invalid_argument("tm_risk: phi(1) must equal 1");

    const double mean = d.mean();
    DescendingSteps s = descending(d, false);

    // tail(t) = int_t^1 F^{-1}(q) dq: the top (1-t) mass, i.e. the integral
    // of the descending rearrangement over [0, 1-t]
    const std::size_t n = s.levels.size();
    auto desc_integral = [&](double u) {
        if (u <= 0.0) return 0.0;
        auto it = std::lower_bound(s.cum.begin(), s.cum.end(), u);
        std::size_t k = static_cast<std::size_t>(it - s.cum.begin());
        if (k >= n) k = n - 1;
        const double prev_cum = k == 0 ? 0.0 : s.cum[k - 1];
        const double prev_int = k == 0 ? 0.0 : s.integral[k - 1];
        return prev_int + (u - prev_cum) * s.levels[k];
    };
    auto tail = [&](double t) { return desc_integral(1.0 - t); };
    auto objective = [&](double t) {
        const double w = (1.0 - phi(1.0 - t)) / t;
        const double cvar_t = tail(t) / (1.0 - t);
        return w * mean + (1.0 - w) * cvar_t;
    };

    // closure values: J -> E[X] at both ends
    double best = mean;
    double best_t = 0.0;

    // breakpoints and a uniform grid, then golden refinement of the leading cells
    std::vector<double> probes;
    probes.reserve(grid_size() + n + 2);
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (s.cum[k] > 0.0 && s.cum[k] < 1.0) probes.push_back(s.cum[k]);
    const std::size_t g = grid_size();
    for (std::size_t j = 1; j < g; ++j)
        probes.push_back(static_cast<double>(j) / static_cast<double>(g));
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());

    std::vector<std::pair<double, double>> scored;  // (value, t)
    scored.reserve(probes.size());
    for (double t : probes) {
        const double v = objective(t);
        if (v > best) { best = v; best_t = t; }
        scored.emplace_back(v, t);
    }
    // refine around the highest-scoring probes
    std::partial_sort(scored.begin(), scored.begin() + std::min<std::size_t>(64, scored.size()),
                      scored.end(), [](auto a, auto b) { return a.first > b.first; });
    const double cell = 1.0 / static_cast<double>(g);
    for (std::size_t i = 0; i < std::min<std::size_t>(64, scored.size()); ++i) {
        const double t0 = scored[i].second;
        const double lo = std::max(1e-12, t0 - cell);
        const double hi = std::min(1.0 - 1e-12, t0 + cell);
        GoldenOptions opts;
        opts.arg_abs_tol = 1e-13;
        opts.arg_rel_tol = 0.0;
        ScalarMinResult r =
            golden_section([&](double t) { return -objective(t); }, lo, hi, opts);
        if (-r.fx > best) { best = -r.fx; best_t = r.x; }
    }
    return {best, best_t};
}

bool krein_condition(const FundamentalFunction& phi) {
    auto psi = [&](double t) { return t / phi(t); };
    const double s_values[3] = {2.0, 4.0, 16.0};
    for (double s : s_values) {
        double sup = 0.0;
        for (double t : log_grid()) sup = std::max(sup, psi(t / s) / psi(t));
        if (!phi.tabulated()) {
            // slowly varying phi only reveal the limit far below the grid
            for (double t = 1e-14; t >= 1e-290; t *= 1e-2)
                sup = std::max(sup, psi(t / s) / psi(t));
        }
        if (!(sup <= 0.99)) return false;
    }
    return true;
}

double orlicz_norm_for_fundamental(const EmpiricalDistribution& d,
                                   const FundamentalFunction& phi) {
    FundamentalFunction p = phi;
    ReferenceDistribution dual_envelope = ReferenceDistribution::from_function(
        [p](double t) { return p(t) / t; }, "dualenv(" + phi.name() + ")");
    YoungFunction Phi;
    try {
        Phi = young_from_envelope(dual_envelope, EnvelopeSide::dual);
    } catch (const std::invalid_argument&) {
        // bounded dual envelope: the norm is the scaled L1 norm
        double mean_abs = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            mean_abs += d.weight(i) * std::abs(d.value(i));
        return dual_envelope(1e-12) * mean_abs;
    }
    YoungFunction Psi = conjugate_young(Phi);
    return orlicz_norm(d, Psi);
}

EmbeddingReport embedding_check(const EmpiricalDistribution& d,
                                const FundamentalFunction& phi,
                                double orlicz_value) {
    EmbeddingReport rep;
    rep.marcinkiewicz = marcinkiewicz_norm(d, phi);
    rep.orlicz = orlicz_value;
    rep.lorentz = lorentz_norm(d, phi);
    const double slack = 1e-9;
    rep.ok = rep.marcinkiewicz <= rep.orlicz + slack && rep.orlicz <= rep.lorentz + slack;
    if (!rep.ok) {
        rep.witness = "sandwich violated: M=" + std::to_string(rep.marcinkiewicz) +
                      " O=" + std::to_string(rep.orlicz) +
                      " L=" + std::to_string(rep.lorentz);
    }
    return rep;
}

}  // namespace tailrisk
