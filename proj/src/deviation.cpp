// SPDX-License-Identifier: Apache-2.0

#include "tailrisk/deviation.hpp"

#include <cmath>
#include <stdexcept>

#include "tailrisk/orlicz.hpp"

namespace tailrisk {

double deviation_bound(const YoungFunction& Psi, double lux_norm, double x) {
    if (!(x > 0.0)) throw std::domain_error("deviation_bound: x must be positive");
    if (!(lux_norm > 0.0))
        throw std::domain_error("deviation_bound: Luxemburg norm must be positive");
    if (!Psi.finite)
        throw std::invalid_argument("deviation_bound: Psi must be finite");
    const double level = Psi.phi(x / lux_norm);
    if (level <= 1.0) return 1.0;
    return 1.0 / level;
}

double reference_bound(const ReferenceDistribution& Y,
                       const EmpiricalDistribution& d, double x) {
    const YoungFunction Psi = young_from_envelope(Y, EnvelopeSide::primal);
    const EmpiricalDistribution a = d.transformed([](double v) { return std::abs(v); });
    const double norm = luxemburg_norm(a, Psi);
    if (!(norm > 0.0)) return x > 0.0 ? 0.0 : 1.0;
    return std::min(1.0, Y.distribution_function(x / norm));
}

std::vector<DeviationRow> verify_deviation(const EmpiricalDistribution& d,
                                           const YoungFunction& Psi,
                                           std::span<const double> grid) {
    const EmpiricalDistribution a = d.transformed([](double v) { return std::abs(v); });
    const double norm = luxemburg_norm(a, Psi);

    std::vector<DeviationRow> rows;
    rows.reserve(grid.size());
    for (double x : grid) {
        DeviationRow row;
        row.x = x;
        double survival = 0.0;  // closed tail: ties counted in
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a.value(i) >= x) survival += a.weight(i);
        row.survival = survival;
        row.bound = (x > 0.0 && norm > 0.0) ? deviation_bound(Psi, norm, x)
                                            : (x <= 0.0 ? 1.0 : 0.0);
        row.pass = row.survival <= row.bound + 1e-12;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace tailrisk
