// SPDX-License-Identifier: Apache-2.0

#include "tailrisk/ubsr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tailrisk/divergence.hpp"
#include "tailrisk/orlicz.hpp"
#include "tailrisk/scalar_opt.hpp"

namespace tailrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

LossFunction exp_loss() {
    LossFunction L;
    L.ell = [](double x) { return x <= 0.0 ? 0.0 : std::exp(x) - 1.0; };
    L.ell_conjugate = [](double y) {
        if (y < 0.0) return kInf;
        if (y <= 1.0) return 0.0;
        return y * std::log(y) - y + 1.0;
    };
    L.name = "exp";
    return L;
}

LossFunction power_loss(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("power_loss: p must exceed 1");
    const double q = p / (p - 1.0);
    LossFunction L;
    L.ell = [p](double x) { return x <= 0.0 ? 0.0 : std::pow(x, p) / p; };
    L.ell_conjugate = [q](double y) {
        if (y < 0.0) return kInf;
        return std::pow(y, q) / q;
    };
    L.name = "power";
    return L;
}

LossFunction linear_loss() {
    LossFunction L;
    L.ell = [](double x) { return x <= 0.0 ? 0.0 : x; };
    L.ell_conjugate = [](double y) {
        if (y < 0.0 || y > 1.0) return kInf;
        return 0.0;
    };
    L.name = "linear";
    return L;
}

double ubsr(const EmpiricalDistribution& d, const LossFunction& L) {
    if (!(L.x0 > 0.0)) throw std::domain_error("ubsr: x0 must be positive");

    auto acceptance = [&](double m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double v = L.ell(d.value(i) - m);
            if (!std::isfinite(v)) return kInf;
            acc += d.weight(i) * v;
        }
        return acc;
    };

    // m >= max X gives E[ell(X-m)] = 0 <= x0; the lower end is pushed below
    // min X - ell^{-1}(x0) - 1 where acceptance must exceed x0
    const double hi0 = d.max();
    const double ell_inv = generalized_inverse(
        [&](double x) { return L.ell(x); }, L.x0, 1.0);
    double lo = d.min() - ell_inv - 1.0;
    int guard = 0;
    while (acceptance(lo) <= L.x0 && ++guard < 128) lo -= std::max(1.0, std::abs(lo));
    if (acceptance(lo) <= L.x0) return lo;  // ell degenerate below x0 everywhere

    return bisect_threshold([&](double m) { return acceptance(m) <= L.x0; },
                            lo, hi0, 1e-10 / std::max(1.0, std::abs(hi0)));
}

double ubsr_penalty(const EmpiricalDistribution& Z, const LossFunction& L) {
    double mean = 0.0;
    for (std::size_t i = 0; i < Z.size(); ++i) {
        if (Z.value(i) < 0.0)
            throw std::domain_error("ubsr_penalty: density must be nonnegative");
        mean += Z.weight(i) * Z.value(i);
    }
    if (std::abs(mean - 1.0) > 1e-9)
        throw std::domain_error("ubsr_penalty: density must have weighted mean 1");

    YoungFunction conj;
    conj.phi = L.ell_conjugate;
    conj.name = L.name + "*";
    return orlicz_norm(Z, conj);
}

}  // namespace tailrisk
