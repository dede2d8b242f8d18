#ifndef DESMOOTH_LOCAL_POLY_HPP
#define DESMOOTH_LOCAL_POLY_HPP

#include "desmooth/dataset.hpp"
#include "desmooth/fit.hpp"
#include "desmooth/kernel.hpp"

#include <vector>

namespace desmooth {

/// Local polynomial regression of the given degree (0 = Nadaraya-Watson,
/// 1 = local linear, 2 = local quadratic, 3 = local cubic; degrees up to 5
/// supported).
///
/// At each grid point x0 the kernel-weighted least-squares problem over the
/// centered monomial basis {1, (x-x0), ..., (x-x0)^degree} is solved and the
/// intercept returned. The basis is scaled by h before solving and the solve
/// goes through a column-pivoted Householder QR, so well-conditioned inputs
/// match the normal equations to full precision without squaring the
/// condition number.
///
/// Throws InvalidBandwidthError (h <= 0), std::invalid_argument (degree > 5
/// or n < degree + 1), RankDeficiencyError when the weighted design is
/// numerically singular at some grid point. Empty windows are flagged, not
/// thrown (see Fit).
Fit fit_local_poly(const Dataset& data, int degree, const Kernel& kernel, double h,
                   const std::vector<double>& grid);

/// Single-point variant of fit_local_poly; NaN signals a degenerate window.
/// weight_sum_out, when non-null, receives the effective weight sum.
double local_poly_at(const Dataset& data, int degree, const Kernel& kernel, double h, double x0,
                     double* weight_sum_out = nullptr);

} // namespace desmooth

#endif // DESMOOTH_LOCAL_POLY_HPP
