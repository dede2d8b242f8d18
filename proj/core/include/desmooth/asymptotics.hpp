#ifndef DESMOOTH_ASYMPTOTICS_HPP
#define DESMOOTH_ASYMPTOTICS_HPP

#include "desmooth/estimator.hpp"
#include "desmooth/kernel.hpp"

namespace desmooth {

/// Everything the leading-order interior bias/variance formulas consume.
/// Valid for interior evaluation points only; boundary-region behavior is
/// out of scope. Double-smoothing estimators are likewise not covered here.
struct AsymptoticContext {
    double lambda = 0.0;    ///< growth rate of the exponential model
    double g_x0 = 1.0;      ///< true mean value g(x0)
    double h = 0.1;         ///< bandwidth
    double n = 1.0;         ///< sample size
    double sigma2 = 1.0;    ///< error variance
    double f_x0 = 1.0;      ///< design density at x0
    double fprime_x0 = 0.0; ///< derivative of the design density at x0
    Kernel kernel{};
};

/// Leading-order conditional bias of the degree-k DE-constrained
/// exponential-growth estimator:
///   odd k:  lambda^(k+1) g(x0) h^(k+1) mu_{k+1} / (k+1)!
///   even k: lambda^(k+1) g(x0) h^(k+2) mu_{k+2} / (k+1)!
///             * ( lambda/(k+2) + f'(x0)/f(x0) )
/// k = 0 is the local constant estimator and reproduces its textbook bias.
double de1k_bias(int k, const AsymptoticContext& ctx);

/// Leading-order conditional variance, degree-independent:
///   sigma^2 R(K) / (n h f(x0)).
double de1k_variance(const AsymptoticContext& ctx);

struct BiasVariance {
    double bias = 0.0;
    double variance = 0.0;
};

/// Leading-order interior bias and variance of the conventional local
/// polynomial baselines under the exponential-growth mean (so higher
/// derivatives of g reduce to powers of lambda times g). Accepts
/// Method::NW, LL, LQ, LC.
BiasVariance baseline_bias_variance(Method method, const AsymptoticContext& ctx);

/// Leading-order mean squared error: de1k_bias^2 + de1k_variance.
double amse(int k, const AsymptoticContext& ctx);

} // namespace desmooth

#endif // DESMOOTH_ASYMPTOTICS_HPP
