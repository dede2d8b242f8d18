#ifndef DESMOOTH_PARAMETRIC_HPP
#define DESMOOTH_PARAMETRIC_HPP

#include "desmooth/dataset.hpp"

#include <optional>
#include <utility>

namespace desmooth {

/// Result of fitting y = g(a) e^{lambda (x - a)} by least squares, where a
/// is the left endpoint of the dataset interval.
struct ExponentialFit {
    double g_a = 0.0;    ///< fitted initial value g(a)
    double lambda = 0.0; ///< fitted growth rate
    double rss = 0.0;    ///< residual sum of squares at the solution
    int iterations = 0;
    bool converged = false;

    double predict(double x, double a) const;
};

struct NlsOptions {
    std::optional<std::pair<double, double>> init; ///< (g_a, lambda) start
    std::optional<double> fix_lambda;              ///< hold lambda fixed, fit g_a only
    int max_iterations = 200;
    double rss_rel_tol = 1e-12;  ///< relative RSS-change convergence threshold
    double grad_tol = 1e-10;     ///< gradient-norm convergence threshold
};

/// Damped Gauss-Newton fit of the exponential solution. Accepted steps never
/// increase the RSS. The default start comes from fit_loglinear when every
/// response is positive, otherwise (mean(y), 0). Hitting the iteration cap
/// yields converged = false rather than an exception. Throws
/// DegenerateDesignError when all covariates coincide.
ExponentialFit fit_exponential_nls(const Dataset& data, const NlsOptions& opts = {});

struct LogLinearFit {
    double log_g_a = 0.0; ///< intercept: log g(a)
    double lambda = 0.0;  ///< slope
};

/// Ordinary least squares of log y on (x - a). Throws
/// NonpositiveResponseError when some y <= 0.
LogLinearFit fit_loglinear(const Dataset& data);

} // namespace desmooth

#endif // DESMOOTH_PARAMETRIC_HPP
