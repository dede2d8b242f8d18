#ifndef DESMOOTH_DE_LOCAL_HPP
#define DESMOOTH_DE_LOCAL_HPP

#include "desmooth/dataset.hpp"
#include "desmooth/fit.hpp"
#include "desmooth/kernel.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace desmooth {

/// Largest supported Taylor degree for the DE-constrained estimators.
inline constexpr int kMaxTaylorDegree = 7;

/// First-order constraint g'(x) = lambda * g(x).
struct ExponentialDE {
    double lambda = 0.0; ///< growth rate; 0 reduces every DE1-k to Nadaraya-Watson
};

/// First-order linear constraint g'(x) = a(x) g(x) + b(x).
///
/// The coefficient functions are supplied as derivative providers:
/// a_deriv(l, x) returns the l-th derivative of a at x (order 0 is the value
/// itself), and likewise b_deriv. A degree-k fit consumes derivatives up to
/// order k-1. max_derivative_order caps what the providers implement;
/// requesting beyond it raises MissingDerivativeError.
struct LinearFirstOrderDE {
    using DerivFn = std::function<double(int order, double x)>;

    DerivFn a_deriv;
    DerivFn b_deriv;
    int max_derivative_order = std::numeric_limits<int>::max();

    /// Constant-coefficient convenience: g' = a0 * g + b0.
    static LinearFirstOrderDE constant(double a0, double b0);
};

/// First-order constraint g'(x) = F(x, g(x)) for general (possibly
/// nonlinear) F. F1 and F2 are the partial derivatives of F with respect to
/// x and g; they are required only by the degree-2 approximant.
class GeneralFirstOrderDE {
public:
    using Rhs = std::function<double(double x, double g)>;

    /// Probe rectangle for the construction-time Lipschitz spot check:
    /// |F(x, g + d) - F(x, g)| / d must stay finite and bounded over a small
    /// grid of (x, g) pairs. This is a sanity screen, not a proof.
    struct ProbeDomain {
        Interval x;
        Interval g;
        ProbeDomain() : x{0.0, 1.0}, g{-10.0, 10.0} {}
        ProbeDomain(Interval x_range, Interval g_range) : x(x_range), g(g_range) {}
    };

    explicit GeneralFirstOrderDE(Rhs F, Rhs F1 = nullptr, Rhs F2 = nullptr,
                                 ProbeDomain probe = {});

    double F(double x, double g) const { return F_(x, g); }
    bool has_partials() const noexcept { return static_cast<bool>(F1_) && static_cast<bool>(F2_); }
    double F1(double x, double g) const { return F1_(x, g); }
    double F2(double x, double g) const { return F2_(x, g); }

private:
    Rhs F_;
    Rhs F1_;
    Rhs F2_;
};

/// Affine representation g^(p)(x0) = A[p] * g(x0) + B[p] of the derivatives
/// implied by a linear first-order DE. A[0] = 1 and B[0] = 0 always.
struct AffineApproximant {
    std::vector<double> A;
    std::vector<double> B;

    int degree() const noexcept { return static_cast<int>(A.size()) - 1; }
};

/// Derivative recursion for the linear DE: with a^(l), b^(l) evaluated at x0,
///   A[p+1] = sum_l C(p,l) a^(l) A[p-l],
///   B[p+1] = sum_l C(p,l) a^(l) B[p-l] + b^(p).
/// Consumes derivatives of a and b up to order k-1.
AffineApproximant affine_coeffs(const LinearFirstOrderDE& de, double x0, int k);

/// Closed-form DE-constrained estimator of degree k for g' = lambda g:
///   ghat_k(x0) = sum_i y_i S_i K_h(x_i - x0) / sum_i S_i^2 K_h(x_i - x0),
///   S_i = sum_{p=0}^{k} (x_i - x0)^p lambda^p / p!.
/// k must lie in [1, kMaxTaylorDegree]. Window degeneracy is flagged per
/// point, as in fit_local_poly.
Fit de1k_exponential(const Dataset& data, const ExponentialDE& de, int k, const Kernel& kernel,
                     double h, const std::vector<double>& grid);

/// Closed-form DE-constrained estimator of degree k for the general linear
/// first-order DE. With (A, B) = affine_coeffs at x0 and
///   S_i = sum_p (x_i - x0)^p A[p] / p!,  T_i = sum_p (x_i - x0)^p B[p] / p!,
/// the estimate is sum_i (y_i - T_i) S_i K_i / sum_i S_i^2 K_i.
Fit de1k_linear(const Dataset& data, const LinearFirstOrderDE& de, int k, const Kernel& kernel,
                double h, const std::vector<double>& grid);

/// Options for the scalar minimizer behind de11_general.
struct SolverOptions {
    double tol = 1e-10;      ///< bracket-width target, scaled by (1 + |alpha|)
    int max_expansions = 60; ///< bracket-search growth steps before giving up
};

/// DE-constrained local fit for a general first-order DE, degree 1 or 2.
/// The single local parameter alpha = g(x0) is found by bracketed 1-D
/// minimization of the local objective; the initial bracket is centered on
/// the Nadaraya-Watson estimate. Degree 2 requires the partials F1, F2.
/// Throws OptimizerFailureError when no bracket is found.
Fit de11_general(const Dataset& data, const GeneralFirstOrderDE& de, int degree,
                 const Kernel& kernel, double h, const std::vector<double>& grid,
                 const SolverOptions& opts = {});

/// Kernel-weighted local least-squares objective
///   sum_i { y_i - predict(x_i, alpha) }^2 K_h(x_i - x0),
/// exposed publicly so brute-force minimization can cross-check the
/// closed-form estimators.
double local_objective(const Dataset& data, double alpha, double x0,
                       const std::function<double(double xi, double alpha)>& predict,
                       const Kernel& kernel, double h);

namespace detail {

/// Single-point evaluators with optional leave-one-out exclusion; used by
/// cross-validation. NaN signals a degenerate window.
double de1k_exponential_loo(const Dataset& data, const ExponentialDE& de, int k,
                            const Kernel& kernel, double h, double x0, std::size_t exclude,
                            double* weight_sum_out);
double de1k_linear_loo(const Dataset& data, const LinearFirstOrderDE& de, int k,
                       const Kernel& kernel, double h, double x0, std::size_t exclude,
                       double* weight_sum_out);
double local_poly_loo(const Dataset& data, int degree, const Kernel& kernel, double h, double x0,
                      std::size_t exclude, double* weight_sum_out);

} // namespace detail

} // namespace desmooth

#endif // DESMOOTH_DE_LOCAL_HPP
