// SPDX-License-Identifier: Apache-2.0

#include "tailrisk/lambert.hpp"

#include <cmath>
#include <stdexcept>

namespace tailrisk {

double lambert_w(double z) {
    static const double kBranch = -std::exp(-1.0);
    if (std::isnan(z) || z < kBranch * (1.0 + 1e-12))
        throw std::domain_error("lambert_w: argument below -1/e");
    if (z <= kBranch) return -1.0;
    if (z == 0.0) return 0.0;

    if (z > 1e10) {
        // solve w + log w = log z by Newton; e^w would overflow
        const double lz = std::log(z);
        double w = lz - std::log(lz);
        for (int i = 0; i < 64; ++i) {
            const double h = w + std::log(w) - lz;
            const double dw = h / (1.0 + 1.0 / w);
            w -= dw;
            if (std::abs(dw) <= 1e-15 * (1.0 + std::abs(w))) break;
        }
        return w;
    }

    // initial guess
    double w;
    if (z < -0.25) {
        const double p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
    } else if (z < 1.0) {
        w = z * (1.0 - z + 1.5 * z * z);
    } else {
        const double lz = std::log(z);
        w = lz - std::log(std::max(lz, 1.0));
        if (w <= 0.0) w = lz > 0 ? lz : 0.5;
    }

    for (int i = 0; i < 64; ++i) {
        const double ew = std::exp(w);
        const double r = w * ew - z;
        const double denom = ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0);
        const double dw = r / denom;
        w -= dw;
        if (std::abs(dw) <= 1e-15 * (1.0 + std::abs(w))) break;
    }
    return w;
}

}  // namespace tailrisk
