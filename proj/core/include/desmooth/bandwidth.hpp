#ifndef DESMOOTH_BANDWIDTH_HPP
#define DESMOOTH_BANDWIDTH_HPP

#include "desmooth/dataset.hpp"
#include "desmooth/estimator.hpp"
#include "desmooth/kernel.hpp"

#include <optional>
#include <vector>

namespace desmooth {

/// Strictly increasing list of candidate bandwidths.
class BandwidthGrid {
public:
    explicit BandwidthGrid(std::vector<double> values);

    /// count log-spaced values on [lo, hi].
    static BandwidthGrid log_spaced(double lo, double hi, std::size_t count);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
};

/// Default cross-validation grid for a dataset: 40 log-spaced bandwidths
/// from a quarter of the median covariate spacing up to half the covariate
/// range, bracketing the spacing-based pilot bandwidth (see
/// pilot_bandwidth) from both sides.
BandwidthGrid default_cv_grid(const Dataset& data);

/// Spacing heuristic: half the median of successive differences of the
/// sorted covariates.
double pilot_bandwidth(const Dataset& data);

struct LoocvResult {
    double h_star = 0.0;        ///< grid value minimizing the CV score
    std::vector<double> scores; ///< CV(h) per grid value, same order
};

/// Leave-one-out cross-validation for a kernel estimator.
///
/// CV(h) = sum_i (y_i - ghat_{-i}(x_i))^2, where ghat_{-i} refits without
/// observation i. A degenerate (or rank-deficient) leave-one-out fit at x_i
/// contributes a penalty y_i^2, so bandwidths with empty windows are never
/// preferred. Ties break toward the smaller h. Throws NoValidBandwidthError
/// when every bandwidth is degenerate at every point, ConfigError for
/// non-kernel estimators.
LoocvResult loocv_select(const Dataset& data, const EstimatorSpec& spec, const BandwidthGrid& grid,
                         const Kernel& kernel = Kernel{});

/// Batch variant scoring several estimators over the same grid.
std::vector<LoocvResult> loocv_select_many(const Dataset& data,
                                           const std::vector<EstimatorSpec>& specs,
                                           const BandwidthGrid& grid,
                                           const Kernel& kernel = Kernel{});

/// Inputs of the asymptotically optimal bandwidth formulas for the
/// exponential-growth model.
struct OptimalBandwidthInputs {
    double sigma2 = 1.0;                 ///< error variance
    double n = 1.0;                      ///< sample size
    double f_x0 = 1.0;                   ///< design density at x0
    std::optional<double> fprime_x0;     ///< f'(x0); required for even degrees
    double lambda = 1.0;                 ///< growth rate
    double x0 = 0.0;                     ///< evaluation point
    double g0 = 1.0;                     ///< initial value g(0)
    Kernel kernel{};
};

/// Asymptotically optimal bandwidth for the degree-k DE-constrained
/// exponential-growth estimator:
///
///   odd k:  h^(2k+3) = sigma^2 R(K) ((k+1)!)^2
///                      / [ n f(x0) e^(2 lambda x0) g(0)^2 lambda^(2k+2)
///                          (2k+2) mu_{k+1}^2 ]
///   even k: h^(2k+5) = sigma^2 R(K) ((k+1)!)^2
///                      / [ n f(x0) e^(2 lambda x0) g(0)^2 lambda^(2k+2)
///                          (2k+4) mu_{k+2}^2 (lambda + f'(x0)/f(x0))^2 ]
///
/// Throws UndefinedOptimumError when lambda = 0 or, for even k, when
/// lambda + f'/f vanishes; std::invalid_argument when an even degree is
/// requested without fprime_x0.
double optimal_bandwidth(int k, const OptimalBandwidthInputs& inputs);

/// Degree k -> k+2 recursion between optimal bandwidths (Gaussian kernel):
///   odd k:  h' = ( (k+3)(k+1) / lambda^4 * h^(2k+3) )^(1/(2k+7))
///   even k: h' = ( (k+2)^3 / ((k+4) lambda^4) * h^(2k+5) )^(1/(2k+9))
double bandwidth_recursion(double h_ok, int k, double lambda);

} // namespace desmooth

#endif // DESMOOTH_BANDWIDTH_HPP
