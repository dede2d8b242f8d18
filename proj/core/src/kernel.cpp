#include "desmooth/kernel.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace desmooth {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794; // 1/sqrt(2 pi)

const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

// mu_k tables, k = 0..6. Gaussian even moments are (k-1)!!;
// Epanechnikov even moments are 3 / ((k+1)(k+3)).
constexpr std::array<double, 7> kGaussianMoments = {1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0};
constexpr std::array<double, 7> kEpanechnikovMoments = {
    1.0, 0.0, 1.0 / 5.0, 0.0, 3.0 / 35.0, 0.0, 1.0 / 21.0};

// R_k tables. Gaussian: (k-1)!! / (2^(k/2+1) sqrt(pi)).
// Epanechnikov: (9/16) * int_{-1}^{1} w^k (1-w^2)^2 dw.
const std::array<double, 7> kGaussianRoughness = {
    0.5 * kInvSqrtPi, 0.0, 0.25 * kInvSqrtPi, 0.0, 0.375 * kInvSqrtPi, 0.0, 0.9375 * kInvSqrtPi};
constexpr std::array<double, 7> kEpanechnikovRoughness = {
    3.0 / 5.0, 0.0, 3.0 / 35.0, 0.0, 1.0 / 35.0, 0.0, 1.0 / 77.0};

} // namespace

std::string Kernel::name() const {
    return family_ == KernelFamily::Gaussian ? "gaussian" : "epanechnikov";
}

double Kernel::evaluate(double u) const {
    switch (family_) {
    case KernelFamily::Gaussian:
        return kInvSqrt2Pi * std::exp(-0.5 * u * u);
    case KernelFamily::Epanechnikov:
        return std::abs(u) > 1.0 ? 0.0 : 0.75 * (1.0 - u * u);
    }
    return 0.0;
}

double Kernel::eval_scaled(double u, double h) const {
    if (!(h > 0.0)) {
        throw InvalidBandwidthError("eval_scaled: bandwidth must be positive, got h=" +
                                    std::to_string(h));
    }
    return evaluate(u / h) / h;
}

double Kernel::moment(int k) const {
    if (k < 0 || k > 6) {
        throw UnsupportedMomentError("kernel moment order " + std::to_string(k) +
                                     " outside tabulated range [0, 6]");
    }
    return family_ == KernelFamily::Gaussian ? kGaussianMoments[static_cast<size_t>(k)]
                                             : kEpanechnikovMoments[static_cast<size_t>(k)];
}

double Kernel::roughness(int k) const {
    if (k < 0 || k > 6) {
        throw UnsupportedMomentError("kernel roughness order " + std::to_string(k) +
                                     " outside tabulated range [0, 6]");
    }
    return family_ == KernelFamily::Gaussian ? kGaussianRoughness[static_cast<size_t>(k)]
                                             : kEpanechnikovRoughness[static_cast<size_t>(k)];
}

double Kernel::support_radius() const noexcept {
    // exp(-72) ~ 5e-32: Gaussian tail weight beyond 12 bandwidths cannot move
    // any sum at double precision.
    return family_ == KernelFamily::Gaussian ? 12.0 : 1.0;
}

double eval_scaled(const Kernel& kernel, double u, double h) { return kernel.eval_scaled(u, h); }
double moment(const Kernel& kernel, int k) { return kernel.moment(k); }
double roughness(const Kernel& kernel, int k) { return kernel.roughness(k); }

} // namespace desmooth
