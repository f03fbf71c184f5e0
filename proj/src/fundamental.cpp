// SPDX-License-Identifier: Apache-2.0

#include "tailrisk/fundamental.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "tailrisk/scalar_opt.hpp"

namespace tailrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGridMin = 1e-12;

std::size_t read_grid_size() {
    if (const char* env = std::getenv("TAILRISK_GRID")) {
        const long v = std::atol(env);
        if (v >= 16) return static_cast<std::size_t>(v);
    }
    return 4096;
}

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    // linear interpolation; [0, xs.front()] interpolated from the origin
    if (x <= xs.front()) return ys.front() * (x / xs.front());
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    std::size_t k = static_cast<std::size_t>(it - xs.begin());
    if (k >= xs.size()) return ys.back();
    if (xs[k] == x) return ys[k];
    const double x0 = xs[k - 1], x1 = xs[k];
    return ys[k - 1] + (ys[k] - ys[k - 1]) * (x - x0) / (x1 - x0);
}

// Nonincreasing chord slopes including the initial chord from the origin,
// with a noise floor: 1-ulp jitter in the values must not read as convexity
// (flat segments of capped functions produce slopes oscillating around 0).
bool slopes_concave(const std::vector<double>& ts, const std::vector<double>& vs) {
    double prev_slope = kInf;
    double t0 = 0.0, v0 = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double dt = ts[i] - t0;
        const double slope = (vs[i] - v0) / dt;
        const double noise = 1e-11 * (std::abs(vs[i]) + std::abs(v0) + 1e-300) / dt;
        if (slope > prev_slope * (1.0 + 1e-9) + noise + 1e-15) return false;
        prev_slope = slope;
        t0 = ts[i];
        v0 = vs[i];
    }
    return true;
}

}  // namespace

std::size_t grid_size() {
    static const std::size_t n = read_grid_size();
    return n;
}

const std::vector<double>& log_grid() {
    static const std::vector<double> grid = [] {
        const std::size_t n = grid_size();
        std::vector<double> g(n);
        const double lo = std::log(kGridMin);
        for (std::size_t i = 0; i < n; ++i)
            g[i] = std::exp(lo * (1.0 - static_cast<double>(i) / static_cast<double>(n - 1)));
        g.back() = 1.0;
        return g;
    }();
    return grid;
}

void FundamentalFunction::verify() {
    // Positivity is checked on the whole log grid; the monotonicity checks
    // run against running extrema with slack for cancellation noise, and
    // only for t >= 1e-8 where a double evaluation of phi can still resolve
    // relative changes (below that, 1-ulp noise in phi swamps the ratio).
    const auto& grid = log_grid();
    double max_phi = 0.0;
    double min_ratio = kInf;
    bool quasi = true;
    for (double t : grid) {
        const double v = eval_(t);
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(
                "FundamentalFunction: must be positive and finite on (0,1]");
        if (t < 1e-8) continue;
        if (v < max_phi * (1.0 - 1e-6)) quasi = false;
        const double ratio = v / t;
        if (ratio > min_ratio * (1.0 + 1e-3)) quasi = false;
        max_phi = std::max(max_phi, v);
        min_ratio = std::min(min_ratio, ratio);
    }
    quasiconcave_ = quasi;
    if (!quasi) concave_ = false;
}

FundamentalFunction FundamentalFunction::from_function(
    std::function<double(double)> eval, bool concave, std::string name) {
    FundamentalFunction f;
    f.eval_ = std::move(eval);
    f.concave_ = concave;
    f.name_ = std::move(name);
    f.verify();
    return f;
}

FundamentalFunction FundamentalFunction::from_table(std::vector<double> ts,
                                                    std::vector<double> values,
                                                    std::string name) {
    if (ts.size() != values.size() || ts.size() < 2)
        throw std::invalid_argument("FundamentalFunction: bad table");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(ts[i] > 0.0) || ts[i] > 1.0)
            throw std::invalid_argument("FundamentalFunction: grid must lie in (0,1]");
        if (i > 0 && !(ts[i] > ts[i - 1]))
            throw std::invalid_argument("FundamentalFunction: grid must be strictly increasing");
    }
    if (ts.back() != 1.0)
        throw std::invalid_argument("FundamentalFunction: last grid point must be t = 1");

    FundamentalFunction f;
    f.tabulated_ = true;
    f.ts_ = std::move(ts);
    f.vs_ = std::move(values);
    f.name_ = std::move(name);
    auto tsr = f.ts_;
    auto vsr = f.vs_;
    f.eval_ = [tsr, vsr](double t) { return interp(tsr, vsr, t); };
    f.concave_ = slopes_concave(f.ts_, f.vs_);
    f.verify();
    return f;
}

double FundamentalFunction::operator()(double t) const {
    if (t < 0.0 || t > 1.0)
        throw std::domain_error("FundamentalFunction: argument outside [0,1]");
    if (t == 0.0) return 0.0;
    return eval_(t);
}

ReferenceDistribution ReferenceDistribution::exponential_shifted() {
    ReferenceDistribution r;
    r.tag_ = Tag::exponential_shifted;
    r.fn_ = [](double t) { return 1.0 - std::log(t); };
    r.name_ = "exponential";
    return r;
}

ReferenceDistribution ReferenceDistribution::pareto(double p) {
    if (!(p > 1.0))
        throw std::invalid_argument("ReferenceDistribution::pareto: p must exceed 1");
    ReferenceDistribution r;
    r.tag_ = Tag::pareto;
    r.param_ = p;
    r.fn_ = [p](double t) { return std::pow(t, -1.0 / p); };
    r.name_ = "pareto";
    return r;
}

ReferenceDistribution ReferenceDistribution::constant(double c) {
    if (!(c > 0.0))
        throw std::invalid_argument("ReferenceDistribution::constant: c must be positive");
    ReferenceDistribution r;
    r.tag_ = Tag::constant;
    r.param_ = c;
    r.fn_ = [c](double) { return c; };
    r.name_ = "constant";
    return r;
}

ReferenceDistribution ReferenceDistribution::from_function(
    std::function<double(double)> fn, std::string name) {
    ReferenceDistribution r;
    r.tag_ = Tag::custom_fn;
    r.fn_ = std::move(fn);
    r.name_ = name.empty() ? "custom" : std::move(name);
    return r;
}

ReferenceDistribution ReferenceDistribution::from_table(std::vector<double> ts,
                                                        std::vector<double> values,
                                                        std::string name) {
    if (ts.size() != values.size() || ts.size() < 2)
        throw std::invalid_argument("ReferenceDistribution: bad table");
    if (!(ts.front() > 0.0) || ts.back() > 1.0)
        throw std::invalid_argument("ReferenceDistribution: grid must lie in (0,1]");
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (!(ts[i] > ts[i - 1]))
            throw std::invalid_argument("ReferenceDistribution: grid must be strictly increasing");
        if (values[i] > values[i - 1] * (1.0 + 1e-12))
            throw std::invalid_argument("ReferenceDistribution: rearrangement must be nonincreasing");
    }
    ReferenceDistribution r;
    r.tag_ = Tag::tabulated;
    r.ts_ = std::move(ts);
    r.vs_ = std::move(values);
    // extend below the grid by the power law fitted to the two leftmost
    // points (log-log extrapolation keeps the tail unbounded), and hold the
    // last value beyond t = 1
    auto ts_ = r.ts_;
    auto vs_ = r.vs_;
    r.fn_ = [ts_, vs_](double t) {
        if (t >= ts_.back()) return vs_.back();
        if (t <= ts_.front()) {
            const double a = std::log(vs_[0] / std::max(vs_[1], 1e-300)) /
                             std::log(ts_[1] / ts_[0]);
            return vs_[0] * std::pow(ts_[0] / t, a);
        }
        auto it = std::lower_bound(ts_.begin(), ts_.end(), t);
        std::size_t k = static_cast<std::size_t>(it - ts_.begin());
        if (ts_[k] == t) return vs_[k];
        const double x0 = ts_[k - 1], x1 = ts_[k];
        return vs_[k - 1] + (vs_[k] - vs_[k - 1]) * (t - x0) / (x1 - x0);
    };
    r.name_ = name.empty() ? "tabulated" : std::move(name);
    return r;
}

double ReferenceDistribution::operator()(double t) const {
    if (!(t > 0.0) || t > 1.0)
        throw std::domain_error("ReferenceDistribution: argument outside (0,1]");
    return fn_(t);
}

double ReferenceDistribution::distribution_function(double lambda) const {
    switch (tag_) {
        case Tag::exponential_shifted:
            return std::min(1.0, std::exp(1.0 - lambda));
        case Tag::pareto:
            return lambda <= 0.0 ? 1.0 : std::min(1.0, std::pow(lambda, -param_));
        case Tag::constant:
            return lambda < param_ ? 1.0 : 0.0;
        default: {
            if (fn_(1.0) > lambda) return 1.0;
            const double tiny = 1e-15;
            if (!(fn_(tiny) > lambda)) return 0.0;
            // Y* is nonincreasing: measure of {Y* > lambda} is the first t
            // where Y* drops to lambda or below
            return bisect_threshold([&](double t) { return fn_(t) <= lambda; },
                                    tiny, 1.0, 1e-14);
        }
    }
}

FundamentalFunction regret_fundamental(const DivergenceSpec& spec) {
    DivergenceSpec s = spec;
    const double eps = spec.epsilon();
    return FundamentalFunction::from_function(
        [s, eps](double t) { return t * s.f_inv(eps / t); }, true,
        "phi_V[" + spec.family_name() + "]");
}

FundamentalFunction risk_fundamental(const DivergenceSpec& spec) {
    DivergenceSpec s = spec;
    const double eps = spec.epsilon();
    return FundamentalFunction::from_function(
        [s, eps](double t) { return std::min(1.0, t * s.f_inv(eps / t)); }, true,
        "phi_R[" + spec.family_name() + "]");
}

ReferenceDistribution envelope_function(const FundamentalFunction& phi) {
    FundamentalFunction p = phi;
    return ReferenceDistribution::from_function([p](double t) { return 1.0 / p(t); },
                                                "1/" + phi.name());
}

FundamentalFunction associate(const FundamentalFunction& phi) {
    FundamentalFunction p = phi;
    auto eval = [p](double t) { return t / p(t); };
    // concavity detected numerically on the log grid
    const auto& grid = log_grid();
    std::vector<double> vs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vs[i] = eval(grid[i]);
    FundamentalFunction a = FundamentalFunction::from_function(
        eval, slopes_concave(grid, vs), phi.name() + "'");
    if (!a.quasiconcave())
        throw std::invalid_argument("associate: result is not quasiconcave");
    return a;
}

ReferenceCheck check_reference(const ReferenceDistribution& Y) {
    const auto& grid = log_grid();
    bool increasing = true;
    bool bound_ok = true;
    const double y1 = Y(1.0);
    double prev = 0.0;
    for (double t : grid) {
        const double yt = Y(t);
        const double product = yt * t;
        if (product < prev * (1.0 - 1e-12)) increasing = false;
        if (yt > (y1 / t) * (1.0 + 1e-9)) bound_ok = false;
        prev = std::max(prev, product);
    }
    if (increasing) return ReferenceCheck::ok;
    if (!bound_ok) return ReferenceCheck::invalid;
    return ReferenceCheck::needs_majorant;
}

FundamentalFunction least_concave_majorant(const FundamentalFunction& phi) {
    if (!phi.quasiconcave())
        throw std::invalid_argument("least_concave_majorant: input must be quasiconcave");

    std::vector<double> ts, vs;
    if (phi.tabulated()) {
        ts = phi.grid_t();
        vs = phi.grid_v();
    } else {
        ts = log_grid();
        vs.reserve(ts.size());
        for (double t : ts) vs.push_back(phi(t));
    }

    // upper concave hull over (0,0) plus the grid points
    std::vector<double> hx = {0.0}, hy = {0.0};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        while (hx.size() >= 2) {
            const std::size_t m = hx.size();
            const double cross = (hx[m - 1] - hx[m - 2]) * (vs[i] - hy[m - 2]) -
                                 (hy[m - 1] - hy[m - 2]) * (ts[i] - hx[m - 2]);
            if (cross >= 0.0) { hx.pop_back(); hy.pop_back(); }
            else break;
        }
        hx.push_back(ts[i]);
        hy.push_back(vs[i]);
    }
    hx.erase(hx.begin());
    hy.erase(hy.begin());
    if (hx.back() != 1.0) { hx.push_back(1.0); hy.push_back(phi(1.0)); }
    return FundamentalFunction::from_table(hx, hy, "lcm(" + phi.name() + ")");
}

namespace {

// Verifies that E is unbounded toward 0 (there are tails to encode).
void require_unbounded_envelope(const ReferenceDistribution& E) {
    switch (E.tag()) {
        case ReferenceDistribution::Tag::exponential_shifted:
        case ReferenceDistribution::Tag::pareto:
            return;
        case ReferenceDistribution::Tag::constant:
            throw std::invalid_argument(
                "young_from_envelope: envelope bounded at 0+ (no tails); bounded "
                "reweightings are the expectation/cvar divergence families");
        default: {
            const double e1 = std::max(E(1.0), 1e-300);
            const double lo = E(kGridMin);
            const double mid = E(std::sqrt(kGridMin));
            if (!(lo > mid * (1.0 + 1e-9)) || !(lo > 2.0 * e1))
                throw std::invalid_argument(
                    "young_from_envelope: envelope bounded at 0+ (no tails); bounded "
                    "reweightings are the expectation/cvar divergence families");
        }
    }
}

bool product_concave_on_grid(const ReferenceDistribution& E) {
    const auto& grid = log_grid();
    std::vector<double> prod(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) prod[i] = E(grid[i]) * grid[i];
    return slopes_concave(grid, prod);
}

}  // namespace

YoungFunction young_from_envelope(const ReferenceDistribution& E, EnvelopeSide side) {
    const ReferenceCheck check = check_reference(E);
    if (check == ReferenceCheck::invalid)
        throw std::invalid_argument(
            "young_from_envelope: t -> E(t)*t violates the quasiconcavity necessity bound");
    require_unbounded_envelope(E);

    YoungFunction Y;
    Y.finite = true;
    const char* role = side == EnvelopeSide::dual ? "Phi" : "Psi";

    if (check == ReferenceCheck::ok &&
        E.tag() == ReferenceDistribution::Tag::exponential_shifted) {
        Y.name = std::string(role) + "[exponential]";
        Y.phi = [](double y) {
            if (y < 0.0) return kInf;
            return y <= 1.0 ? y : std::exp(y - 1.0);
        };
        Y.phi_inv = [](double x) {
            if (x <= 0.0) return 0.0;
            return x <= 1.0 ? x : 1.0 + std::log(x);
        };
        return Y;
    }
    if (check == ReferenceCheck::ok && E.tag() == ReferenceDistribution::Tag::pareto) {
        const double p = E.param();
        Y.name = std::string(role) + "[pareto:" + std::to_string(p) + "]";
        Y.phi = [p](double y) {
            if (y < 0.0) return kInf;
            return y <= 1.0 ? y : std::pow(y, p);
        };
        Y.phi_inv = [p](double x) {
            if (x <= 0.0) return 0.0;
            return x <= 1.0 ? x : std::pow(x, 1.0 / p);
        };
        return Y;
    }

    // general path: use E directly when the product is concave, otherwise
    // substitute the least concave majorant of the product. The envelope
    // table is re-sampled densely from the majorant so that interpolation
    // happens in phi-space, not across sparse hull segments.
    ReferenceDistribution Eff = E;
    if (check == ReferenceCheck::needs_majorant || !product_concave_on_grid(E)) {
        const auto& grid = log_grid();
        std::vector<double> prod(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) prod[i] = E(grid[i]) * grid[i];
        FundamentalFunction phi_tab =
            FundamentalFunction::from_table(log_grid(), prod, "E*t");
        FundamentalFunction majorant = least_concave_majorant(phi_tab);
        std::vector<double> ev(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) ev[i] = majorant(grid[i]) / grid[i];
        Eff = ReferenceDistribution::from_table(grid, ev,
                                                "lcm-envelope(" + E.name() + ")");
    }

    const double e1 = Eff(1.0);
    ReferenceDistribution Ecap = Eff;
    Y.name = std::string(role) + "[" + E.name() + "]";
    Y.phi_inv = [Ecap, e1](double x) {
        if (x <= 0.0) return 0.0;
        return x <= 1.0 ? x * e1 : Ecap(1.0 / x);
    };
    auto inv = Y.phi_inv;
    Y.phi = [inv, e1](double y) {
        if (y < 0.0) return kInf;
        if (y <= e1) return y / e1;
        // invert the strictly increasing phi_inv
        double hi = 2.0;
        int guard = 0;
        while (inv(hi) < y && ++guard < 1020) hi *= 2.0;
        return bisect_threshold([&](double x) { return inv(x) >= y; }, 1.0, hi, 1e-14);
    };
    return Y;
}

std::optional<bool> marcinkiewicz_coincidence(const YoungFunction& Phi) {
    if (!Phi.finite)
        throw std::invalid_argument("marcinkiewicz_coincidence: Young function must be finite");

    // I(delta) = int_delta^1 Phi(Phi^{-1}(1/t)/lambda) dt, via t = exp(-u)
    auto truncated = [&](double lambda, double delta) {
        auto integrand = [&](double u) {
            const double t = std::exp(-u);
            const double h = Phi.phi_inv(1.0 / t);
            const double v = Phi.phi(h / lambda);
            return v * t;
        };
        return adaptive_simpson(integrand, 0.0, std::log(1.0 / delta), 1e-10, 48);
    };

    // locate the first level whose truncated integral dips below 1; only a
    // few ladder steps beyond it are meaningful (further up, a logarithmic
    // divergence shrinks below quadrature noise and would look stable)
    int k_star = -1;
    for (int k = 0; k <= 60; ++k) {
        const double i9 = truncated(std::pow(2.0, k), 1e-9);
        if (!std::isfinite(i9)) return std::nullopt;
        if (i9 <= 1.0 + 1e-9) { k_star = k; break; }
    }
    if (k_star < 0) return false;

    for (int k = k_star; k <= k_star + 5 && k <= 60; ++k) {
        const double lambda = std::pow(2.0, k);
        const double i9 = truncated(lambda, 1e-9);
        // guard decades below the stated ladder: a slowly decaying
        // convergent component can mask a logarithmic divergence in the
        // shallow increments, so the decision compares the deepest two
        const double i12 = truncated(lambda, 1e-12);
        const double i15 = truncated(lambda, 1e-15);
        if (!std::isfinite(i9) || !std::isfinite(i12) || !std::isfinite(i15))
            return std::nullopt;
        const double d3 = i12 - i9;
        const double d4 = i15 - i12;
        const bool stable = d4 <= 0.5 * d3 + 1e-9 * (1.0 + std::abs(i9));
        if (stable && i15 + std::max(0.0, d4) <= 1.0 + 1e-9) return true;
    }
    return false;
}

}  // namespace tailrisk
