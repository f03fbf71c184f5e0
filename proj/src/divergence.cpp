// SPDX-License-Identifier: Apache-2.0

#include "tailrisk/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailrisk/lambert.hpp"
#include "tailrisk/scalar_opt.hpp"

namespace tailrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double DivergenceSpec::f(double x) const {
    if (x < 0.0) return kInf;
    switch (family_) {
        case DivergenceFamily::kl:
            return x == 0.0 ? 1.0 : x * std::log(x) - (x - 1.0);
        case DivergenceFamily::chi2:
            return (x - 1.0) * (x - 1.0);
        case DivergenceFamily::cvar:
            return x <= 1.0 / (1.0 - alpha_) ? 0.0 : kInf;
        case DivergenceFamily::expectation:
            return x <= 1.0 ? 0.0 : kInf;
        case DivergenceFamily::power:
            return x <= 1.0 ? 0.0 : std::pow(x, p_) - 1.0;
        case DivergenceFamily::young_derived:
            return x <= 1.0 ? 0.0 : young_.phi(x) - young_.phi(1.0);
        case DivergenceFamily::custom: {
            if (x > table_x_.back()) return kInf;
            auto it = std::upper_bound(table_x_.begin(), table_x_.end(), x);
            std::size_t k = static_cast<std::size_t>(it - table_x_.begin());
            if (k == 0) return table_f_.front();
            if (k >= table_x_.size()) k = table_x_.size() - 1;
            const double x0 = table_x_[k - 1], x1 = table_x_[k];
            const double f0 = table_f_[k - 1], f1 = table_f_[k];
            return f0 + (f1 - f0) * (x - x0) / (x1 - x0);
        }
    }
    return kInf;
}

double DivergenceSpec::g(double y) const {
    switch (family_) {
        case DivergenceFamily::kl:
            return std::exp(y) - 1.0;
        case DivergenceFamily::chi2: {
            const double m = std::max(-2.0, y);
            return m + m * m / 4.0;
        }
        case DivergenceFamily::cvar:
            return std::max(0.0, y) / (1.0 - alpha_);
        case DivergenceFamily::expectation:
            return std::max(0.0, y);
        case DivergenceFamily::power: {
            if (y <= 0.0) return 0.0;
            if (y <= p_) return y;
            const double xs = std::pow(y / p_, 1.0 / (p_ - 1.0));
            return xs * y - std::pow(xs, p_) + 1.0;
        }
        case DivergenceFamily::young_derived: {
            if (y <= 0.0) return 0.0;
            // sup_{x>=1} xy - Phi(x) + Phi(1), parametrized through u = Phi(x)
            // so that only the analytic inverse is evaluated
            const double phi1 = young_.phi(1.0);
            const double u_lo = std::max(phi1, 1e-12);
            auto neg = [&](double u) { return -(y * young_.phi_inv(u) - u + phi1); };
            ScalarMinResult r =
                minimize_positive(neg, std::max(1.0, 2.0 * phi1 + 1e-9), u_lo, 1e15);
            return std::max(y, -r.fx);
        }
        case DivergenceFamily::custom: {
            double best = -kInf;
            for (std::size_t k = 0; k < table_x_.size(); ++k)
                best = std::max(best, table_x_[k] * y - table_f_[k]);
            return best;
        }
    }
    return kInf;
}

double DivergenceSpec::g_prime(double y) const {
    switch (family_) {
        case DivergenceFamily::kl:
            return std::exp(y);
        case DivergenceFamily::chi2:
            return std::max(0.0, 1.0 + y / 2.0);
        case DivergenceFamily::cvar:
            return y < 0.0 ? 0.0 : 1.0 / (1.0 - alpha_);
        case DivergenceFamily::expectation:
            return y < 0.0 ? 0.0 : 1.0;
        case DivergenceFamily::power: {
            if (y < 0.0) return 0.0;
            if (y <= p_) return 1.0;
            return std::pow(y / p_, 1.0 / (p_ - 1.0));
        }
        case DivergenceFamily::young_derived: {
            if (y < 0.0) return 0.0;
            // Danskin: the maximizer of x y - f(x) is the subgradient
            const double phi1 = young_.phi(1.0);
            const double u_lo = std::max(phi1, 1e-12);
            auto neg = [&](double u) { return -(y * young_.phi_inv(u) - u + phi1); };
            ScalarMinResult r =
                minimize_positive(neg, std::max(1.0, 2.0 * phi1 + 1e-9), u_lo, 1e15);
            if (-r.fx <= y) return 1.0;
            return young_.phi_inv(r.x);
        }
        case DivergenceFamily::custom: {
            // vertices scanned in increasing x; >= keeps the largest argmax
            // (right-derivative selection at kinks)
            double best = -kInf, bestx = 0.0;
            for (std::size_t k = 0; k < table_x_.size(); ++k) {
                const double v = table_x_[k] * y - table_f_[k];
                if (v >= best) { best = v; bestx = table_x_[k]; }
            }
            return bestx;
        }
    }
    return 0.0;
}

double DivergenceSpec::f_inv(double y) const {
    if (y <= 0.0) return 0.0;
    switch (family_) {
        case DivergenceFamily::kl:
            // upper solution of x log x - x + 1 = y
            return std::exp(lambert_w((y - 1.0) / std::exp(1.0)) + 1.0);
        case DivergenceFamily::chi2:
            return 1.0 + std::sqrt(y);
        case DivergenceFamily::cvar:
            return 1.0 / (1.0 - alpha_);
        case DivergenceFamily::expectation:
            return 1.0;
        case DivergenceFamily::power:
            return std::pow(1.0 + y, 1.0 / p_);
        case DivergenceFamily::young_derived:
            return young_.phi_inv(y + young_.phi(1.0));
        case DivergenceFamily::custom: {
            // sup{x : f(x) < y} on the piecewise-linear table
            std::size_t j = table_x_.size();
            while (j > 0 && !(table_f_[j - 1] < y)) --j;
            if (j == 0) return 0.0;
            if (j == table_x_.size()) return table_x_.back();
            const double x0 = table_x_[j - 1], x1 = table_x_[j];
            const double f0 = table_f_[j - 1], f1 = table_f_[j];
            return x0 + (y - f0) * (x1 - x0) / (f1 - f0);
        }
    }
    return 0.0;
}

double DivergenceSpec::f_eps(double x) const { return f(x) / epsilon_; }
double DivergenceSpec::g_eps(double y) const { return g(epsilon_ * y) / epsilon_; }
double DivergenceSpec::g_eps_prime(double y) const { return g_prime(epsilon_ * y); }

DivergenceSpec DivergenceSpec::scaled(double new_epsilon) const {
    if (!(new_epsilon > 0.0))
        throw std::domain_error("scale_epsilon: epsilon must be positive");
    DivergenceSpec s = *this;
    s.epsilon_ = new_epsilon;
    return s;
}

std::string DivergenceSpec::family_name() const {
    switch (family_) {
        case DivergenceFamily::kl: return "kl";
        case DivergenceFamily::chi2: return "chi2";
        case DivergenceFamily::cvar: return "cvar";
        case DivergenceFamily::power: return "power";
        case DivergenceFamily::expectation: return "expectation";
        case DivergenceFamily::custom: return "custom";
        case DivergenceFamily::young_derived: return "young_derived";
    }
    return "?";
}

void DivergenceSpec::validate() const {
    if (!(epsilon_ > 0.0))
        throw std::invalid_argument("divergence: epsilon must be positive");
    if (std::abs(f(1.0)) > 1e-12)
        throw std::invalid_argument("divergence: f(1) must equal 0");
    if (!(f(0.0) < kInf))
        throw std::invalid_argument("divergence: f(0) must be finite");
    // supercoercivity probe: f(x)/x strictly increasing at 1e3, 1e6, 1e9
    // (an infinite probe certifies superlinear growth trivially)
    const double probes[3] = {1e3, 1e6, 1e9};
    double prev = -kInf;
    for (double x : probes) {
        const double fx = f(x);
        if (std::isinf(fx)) { prev = kInf; continue; }
        const double ratio = fx / x;
        if (!(ratio > prev) && !std::isinf(prev))
            throw std::invalid_argument("divergence: supercoercivity check failed (f(x)/x not increasing)");
        prev = std::isinf(prev) ? prev : ratio;
    }
}

DivergenceSpec make_kl(double epsilon) {
    DivergenceSpec s;
    s.family_ = DivergenceFamily::kl;
    s.epsilon_ = epsilon;
    s.finite_f_ = true;
    s.validate();
    return s;
}

DivergenceSpec make_chi2(double epsilon) {
    DivergenceSpec s;
    s.family_ = DivergenceFamily::chi2;
    s.epsilon_ = epsilon;
    s.finite_f_ = true;
    s.validate();
    return s;
}

DivergenceSpec make_cvar(double alpha, double epsilon) {
    if (!(alpha >= 0.0) || alpha >= 1.0)
        throw std::invalid_argument("cvar divergence: alpha must lie in [0,1)");
    DivergenceSpec s;
    s.family_ = alpha == 0.0 ? DivergenceFamily::expectation : DivergenceFamily::cvar;
    s.alpha_ = alpha;
    s.epsilon_ = epsilon;
    s.finite_f_ = false;
    s.validate();
    return s;
}

DivergenceSpec make_power(double p, double epsilon) {
    if (!(p > 1.0))
        throw std::invalid_argument("power divergence: p must exceed 1");
    DivergenceSpec s;
    s.family_ = DivergenceFamily::power;
    s.p_ = p;
    s.epsilon_ = epsilon;
    s.finite_f_ = true;
    s.validate();
    return s;
}

DivergenceSpec make_expectation(double epsilon) {
    DivergenceSpec s;
    s.family_ = DivergenceFamily::expectation;
    s.epsilon_ = epsilon;
    s.finite_f_ = false;
    s.validate();
    return s;
}

DivergenceSpec make_custom(const std::vector<std::pair<double, double>>& table,
                           double epsilon) {
    if (table.size() < 2)
        throw std::invalid_argument("custom divergence: need at least two table rows");
    std::vector<double> xs, fs;
    xs.reserve(table.size() + 2);
    fs.reserve(table.size() + 2);
    for (const auto& [x, fx] : table) {
        if (!std::isfinite(x) || !std::isfinite(fx) || x < 0.0 || fx < 0.0)
            throw std::invalid_argument("custom divergence: rows must be finite with x, f >= 0");
        if (!xs.empty() && !(x > xs.back()))
            throw std::invalid_argument("custom divergence: x must be strictly increasing");
        xs.push_back(x);
        fs.push_back(fx);
    }
    bool has_one = false;
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (xs[k] == 1.0) {
            if (std::abs(fs[k]) > 1e-12)
                throw std::invalid_argument("custom divergence: table must have f(1) = 0");
            fs[k] = 0.0;
            has_one = true;
        }
    if (!has_one)
        throw std::invalid_argument("custom divergence: table must contain x = 1");

    // extend to x = 0 with the first segment's slope, clamped at 0
    if (xs.front() > 0.0) {
        const double s1 = (fs[1] - fs[0]) / (xs[1] - xs[0]);
        const double at0 = fs[0] - s1 * xs[0];
        if (at0 >= 0.0) {
            xs.insert(xs.begin(), 0.0);
            fs.insert(fs.begin(), at0);
        } else {
            const double xz = xs[0] - fs[0] / s1;  // where the extension hits 0
            xs.insert(xs.begin(), xz);
            fs.insert(fs.begin(), 0.0);
            xs.insert(xs.begin(), 0.0);
            fs.insert(fs.begin(), 0.0);
        }
    }

    // convexity: slopes nondecreasing (second differences >= -1e-12)
    double prev_slope = -kInf;
    for (std::size_t k = 1; k < xs.size(); ++k) {
        const double slope = (fs[k] - fs[k - 1]) / (xs[k] - xs[k - 1]);
        if (slope < prev_slope - 1e-12)
            throw std::invalid_argument("custom divergence: table is not convex");
        prev_slope = slope;
    }

    DivergenceSpec s;
    s.family_ = DivergenceFamily::custom;
    s.epsilon_ = epsilon;
    s.finite_f_ = false;  // +infinity beyond the last table point
    s.table_x_ = std::move(xs);
    s.table_f_ = std::move(fs);
    s.validate();
    return s;
}

DivergenceSpec divergence_from_young(const YoungFunction& Phi, double epsilon) {
    if (!Phi.finite)
        throw std::invalid_argument("divergence_from_young: Young function must be finite");
    DivergenceSpec s;
    s.family_ = DivergenceFamily::young_derived;
    s.epsilon_ = epsilon;
    s.finite_f_ = true;
    s.young_ = Phi;
    s.validate();
    return s;
}

std::pair<YoungFunction, YoungFunction> youngify(const DivergenceSpec& spec) {
    DivergenceSpec fspec = spec;
    YoungFunction fbar;
    fbar.name = spec.family_name() + "-fbar";
    fbar.finite = spec.finite_f();
    fbar.phi = [fspec](double x) {
        if (x < 0.0) return kInf;
        return x <= 1.0 ? 0.0 : fspec.f(x);
    };
    fbar.phi_inv = [fspec](double y) {
        if (y <= 0.0) return 0.0;
        return std::max(1.0, fspec.f_inv(y));
    };

    YoungFunction gbar;
    gbar.name = spec.family_name() + "-gbar";
    gbar.finite = true;
    gbar.phi = [fspec](double y) { return y <= 0.0 ? 0.0 : fspec.g(y); };
    gbar.phi_inv = [fspec](double z) {
        if (z <= 0.0) return 0.0;
        return generalized_inverse([fspec](double y) { return y <= 0.0 ? 0.0 : fspec.g(y); }, z);
    };
    return {fbar, gbar};
}

DivergenceSpec scale_epsilon(const DivergenceSpec& spec, double epsilon) {
    return spec.scaled(epsilon);
}

double generalized_inverse(const std::function<double(double)>& h, double y,
                           double x_hint) {
    if (h(0.0) >= y) return 0.0;
    double hi = std::max(x_hint, 1e-8);
    int guard = 0;
    while (h(hi) < y) {
        hi *= 2.0;
        if (++guard > 120 || hi > 1e15) return hi;  // effectively unbounded below y
    }
    const double lo = 0.0;
    return bisect_threshold([&](double x) { return h(x) >= y; }, lo, hi, 1e-15);
}

YoungFunction conjugate_young(const YoungFunction& Phi) {
    if (!Phi.finite)
        throw std::invalid_argument("conjugate_young: Phi must be finite");
    YoungFunction psi;
    psi.name = Phi.name + "*";
    psi.finite = true;  // holds for the supercoercive Phi synthesized here
    auto inv = Phi.phi_inv;
    psi.phi = [inv](double y) {
        if (y < 0.0) return kInf;
        if (y == 0.0) return 0.0;
        auto neg = [&](double u) { return -(y * inv(u) - u); };
        ScalarMinResult r = minimize_positive(neg, 1.0, 1e-14, 1e15);
        return std::max(0.0, -r.fx);
    };
    auto phi_copy = psi.phi;
    psi.phi_inv = [phi_copy](double v) {
        if (v <= 0.0) return 0.0;
        return generalized_inverse(phi_copy, v);
    };
    return psi;
}

double numeric_conjugate(const std::function<double(double)>& h, double y) {
    auto neg = [&](double x) {
        const double hx = h(x);
        if (!std::isfinite(hx)) return kInf;
        return -(x * y - hx);
    };
    // expand B until the objective decreases at B (cap 1e12)
    double B = 1.0;
    double best_tail = neg(B);
    while (B < 1e12) {
        const double nb = neg(2.0 * B);
        if (nb > best_tail) break;
        best_tail = nb;
        B *= 2.0;
    }
    ScalarMinResult r = golden_section(neg, 0.0, std::min(2.0 * B, 1e12));
    return -r.fx;
}

}  // namespace tailrisk
