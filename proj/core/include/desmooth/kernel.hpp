#ifndef DESMOOTH_KERNEL_HPP
#define DESMOOTH_KERNEL_HPP

#include "desmooth/errors.hpp"

#include <string>

namespace desmooth {

enum class KernelFamily {
    Gaussian,     ///< standard normal density, unbounded support
    Epanechnikov  ///< 3/4 (1 - u^2) on [-1, 1]
};

/// Symmetric probability-density kernel with bandwidth scaling and the
/// moment / roughness constants that enter the asymptotic formulas:
///   mu_k = int w^k K(w) dw,   R_k = int w^k K(w)^2 dw,   R(K) = R_0.
///
/// Constants are tabulated in closed form (exact rationals, or rational
/// multiples of 1/sqrt(pi) for the Gaussian) rather than integrated at
/// runtime, so every caller sees identical values. The unit tests verify
/// the table against adaptive quadrature.
class Kernel {
public:
    explicit Kernel(KernelFamily family = KernelFamily::Gaussian) : family_(family) {}

    KernelFamily family() const noexcept { return family_; }
    std::string name() const;

    /// Unscaled kernel K(u).
    double evaluate(double u) const;

    /// K_h(u) = K(u/h) / h. Throws InvalidBandwidthError for h <= 0.
    double eval_scaled(double u, double h) const;

    /// mu_k for k <= 6; odd moments are exactly zero.
    /// Throws UnsupportedMomentError above the tabulated range.
    double moment(int k) const;

    /// R_k = int w^k K(w)^2 dw for k <= 6; R(K) = roughness(0).
    double roughness(int k) const;

    /// Radius r such that contributions beyond |u| > r*h are numerically
    /// negligible at double precision (exact support for Epanechnikov).
    double support_radius() const noexcept;

private:
    KernelFamily family_;
};

/// Free-function forms mirroring the member API.
double eval_scaled(const Kernel& kernel, double u, double h);
double moment(const Kernel& kernel, int k);
double roughness(const Kernel& kernel, int k);

} // namespace desmooth

#endif // DESMOOTH_KERNEL_HPP
