// SPDX-License-Identifier: Apache-2.0

#ifndef TAILRISK_LAMBERT_HPP
#define TAILRISK_LAMBERT_HPP

namespace tailrisk {

/// Principal branch of the Lambert W function (w e^w = z, w >= -1) for
/// z >= -1/e, by Halley iteration to 1e-14 relative accuracy. Large
/// arguments are handled in log space.
double lambert_w(double z);

}  // namespace tailrisk

#endif
