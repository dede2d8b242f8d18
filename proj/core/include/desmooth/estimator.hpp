#ifndef DESMOOTH_ESTIMATOR_HPP
#define DESMOOTH_ESTIMATOR_HPP

#include "desmooth/dataset.hpp"
#include "desmooth/de_local.hpp"
#include "desmooth/fit.hpp"
#include "desmooth/kernel.hpp"
#include "desmooth/local_poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace desmooth {

enum class Method {
    NW,        ///< local constant
    LL,        ///< local linear
    LQ,        ///< local quadratic
    LC,        ///< local cubic
    De1k,      ///< DE-constrained exponential-growth estimator of degree k
    Nls,       ///< parametric exponential fit by nonlinear least squares
    LogLinear, ///< parametric fit of the log-linear model
};

/// One estimator choice, as named on the command line and in simulation
/// configs: "nw", "ll", "lq", "lc", "de1-1".."de1-7", "nls", "loglinear".
/// "de1-0" is accepted as an alias for "nw".
struct EstimatorSpec {
    Method method = Method::NW;
    int degree = 0;      ///< Taylor degree for De1k
    double lambda = 0.0; ///< growth rate for De1k

    /// Parses a method name; lambda is required for de1-k with k >= 1.
    /// Throws ConfigError on unknown names or a missing lambda.
    static EstimatorSpec parse(const std::string& name, std::optional<double> lambda = {});

    std::string name() const;

    /// True for the kernel-weighted methods (everything except nls/loglinear).
    bool is_kernel_method() const noexcept {
        return method != Method::Nls && method != Method::LogLinear;
    }

    /// Polynomial degree for the baseline methods (NW=0 .. LC=3).
    int poly_degree() const;

    /// Taylor degree used by the Corollary-style optimal-bandwidth formulas:
    /// 0 for NW, 1 for LL, k for DE1-k. Throws ConfigError for LQ/LC.
    int bandwidth_degree() const;
};

/// Evaluates a kernel-based estimator over a grid. Throws ConfigError when
/// the spec is not a kernel method.
Fit fit_estimator(const EstimatorSpec& spec, const Dataset& data, const Kernel& kernel, double h,
                  const std::vector<double>& grid);

namespace detail {

/// Leave-one-out single-point evaluation used by cross-validation.
double estimator_loo(const EstimatorSpec& spec, const Dataset& data, const Kernel& kernel,
                     double h, double x0, std::size_t exclude);

} // namespace detail

} // namespace desmooth

#endif // DESMOOTH_ESTIMATOR_HPP
