#include "desmooth/de_local.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace desmooth {

namespace {

constexpr std::size_t kNoExclude = std::numeric_limits<std::size_t>::max();
constexpr double kGolden = 0.61803398874989484820;

struct Window {
    std::size_t lo;
    std::size_t hi;
};

Window kernel_window(const std::vector<double>& xs, const Kernel& kernel, double h, double x0) {
    const double r = kernel.support_radius() * h;
    auto lo = std::lower_bound(xs.begin(), xs.end(), x0 - r);
    auto hi = std::upper_bound(xs.begin(), xs.end(), x0 + r);
    return {static_cast<std::size_t>(lo - xs.begin()), static_cast<std::size_t>(hi - xs.begin())};
}

// S term of the exponential approximant: sum_{p=0}^{k} (dx * lambda)^p / p!.
double taylor_exp_factor(double dx_lambda, int k) {
    double term = 1.0;
    double sum = 1.0;
    for (int p = 1; p <= k; ++p) {
        term *= dx_lambda / p;
        sum += term;
    }
    return sum;
}

void validate_de1k_args(double h, int k, std::size_t n) {
    if (!(h > 0.0)) {
        throw InvalidBandwidthError("DE1-k fit: bandwidth must be positive");
    }
    if (k < 1 || k > kMaxTaylorDegree) {
        throw std::invalid_argument("DE1-k fit: Taylor degree must lie in [1, " +
                                    std::to_string(kMaxTaylorDegree) + "], got " +
                                    std::to_string(k));
    }
    if (n == 0) {
        throw EmptyDatasetError("DE1-k fit: empty dataset");
    }
}

// Shared S/T evaluation for the linear-DE estimator at one grid point.
void linear_terms(const AffineApproximant& affine, double dx, double* S, double* T) {
    double weight = 1.0; // dx^p / p!
    double s = affine.A[0];
    double t = affine.B[0];
    const int k = affine.degree();
    for (int p = 1; p <= k; ++p) {
        weight *= dx / p;
        s += weight * affine.A[static_cast<std::size_t>(p)];
        t += weight * affine.B[static_cast<std::size_t>(p)];
    }
    *S = s;
    *T = t;
}

} // namespace

LinearFirstOrderDE LinearFirstOrderDE::constant(double a0, double b0) {
    LinearFirstOrderDE de;
    de.a_deriv = [a0](int order, double) { return order == 0 ? a0 : 0.0; };
    de.b_deriv = [b0](int order, double) { return order == 0 ? b0 : 0.0; };
    return de;
}

GeneralFirstOrderDE::GeneralFirstOrderDE(Rhs F, Rhs F1, Rhs F2, ProbeDomain probe)
    : F_(std::move(F)), F1_(std::move(F1)), F2_(std::move(F2)) {
    if (!F_) {
        throw std::invalid_argument("GeneralFirstOrderDE: F must be callable");
    }
    // Finite-difference Lipschitz spot check over a coarse probe grid.
    constexpr int kProbes = 5;
    constexpr double kLipschitzBound = 1e8;
    for (int ix = 0; ix < kProbes; ++ix) {
        const double x = probe.x.a + (probe.x.b - probe.x.a) * ix / (kProbes - 1);
        for (int ig = 0; ig < kProbes; ++ig) {
            const double g = probe.g.a + (probe.g.b - probe.g.a) * ig / (kProbes - 1);
            const double delta = 1e-4 * (1.0 + std::abs(g));
            const double slope = (F_(x, g + delta) - F_(x, g)) / delta;
            if (!std::isfinite(slope) || std::abs(slope) > kLipschitzBound) {
                throw std::invalid_argument(
                    "GeneralFirstOrderDE: F fails the Lipschitz spot check near (x=" +
                    std::to_string(x) + ", g=" + std::to_string(g) + ")");
            }
        }
    }
}

AffineApproximant affine_coeffs(const LinearFirstOrderDE& de, double x0, int k) {
    if (k < 0) {
        throw std::invalid_argument("affine_coeffs: degree must be nonnegative");
    }
    if (!de.a_deriv || !de.b_deriv) {
        throw std::invalid_argument("affine_coeffs: coefficient providers must be callable");
    }
    if (k >= 1 && k - 1 > de.max_derivative_order) {
        throw MissingDerivativeError("affine_coeffs: derivative of order " + std::to_string(k - 1) +
                                     " unavailable (provider caps at order " +
                                     std::to_string(de.max_derivative_order) + ")");
    }

    AffineApproximant affine;
    affine.A.assign(static_cast<std::size_t>(k) + 1, 0.0);
    affine.B.assign(static_cast<std::size_t>(k) + 1, 0.0);
    affine.A[0] = 1.0;
    affine.B[0] = 0.0;

    std::vector<double> a_at(static_cast<std::size_t>(std::max(k, 1)), 0.0);
    std::vector<double> b_at(static_cast<std::size_t>(std::max(k, 1)), 0.0);
    for (int l = 0; l < k; ++l) {
        a_at[static_cast<std::size_t>(l)] = de.a_deriv(l, x0);
        b_at[static_cast<std::size_t>(l)] = de.b_deriv(l, x0);
        if (!std::isfinite(a_at[static_cast<std::size_t>(l)]) ||
            !std::isfinite(b_at[static_cast<std::size_t>(l)])) {
            throw std::invalid_argument("affine_coeffs: coefficient derivative of order " +
                                        std::to_string(l) + " not finite at x0=" +
                                        std::to_string(x0));
        }
    }

    std::vector<double> binom(static_cast<std::size_t>(k) + 1, 0.0); // row p of Pascal's triangle
    for (int p = 0; p < k; ++p) {
        binom[0] = 1.0;
        for (int l = p; l >= 1; --l) {
            binom[static_cast<std::size_t>(l)] =
                (l == p) ? 1.0
                         : binom[static_cast<std::size_t>(l)] + binom[static_cast<std::size_t>(l - 1)];
        }
        double next_a = 0.0;
        double next_b = 0.0;
        for (int l = 0; l <= p; ++l) {
            const double c = binom[static_cast<std::size_t>(l)] * a_at[static_cast<std::size_t>(l)];
            next_a += c * affine.A[static_cast<std::size_t>(p - l)];
            next_b += c * affine.B[static_cast<std::size_t>(p - l)];
        }
        affine.A[static_cast<std::size_t>(p) + 1] = next_a;
        affine.B[static_cast<std::size_t>(p) + 1] = next_b + b_at[static_cast<std::size_t>(p)];
    }
    return affine;
}

namespace detail {

double de1k_exponential_loo(const Dataset& data, const ExponentialDE& de, int k,
                            const Kernel& kernel, double h, double x0, std::size_t exclude,
                            double* weight_sum_out) {
    const auto& xs = data.xs();
    const auto& ys = data.ys();
    const Window win = kernel_window(xs, kernel, h, x0);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = win.lo; i < win.hi; ++i) {
        if (i == exclude) continue;
        const double w = kernel.eval_scaled(xs[i] - x0, h);
        const double s = taylor_exp_factor((xs[i] - x0) * de.lambda, k);
        num += ys[i] * s * w;
        den += s * s * w;
    }
    if (weight_sum_out) *weight_sum_out = den;
    if (den < kDegenerateWeightSum) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return num / den;
}

double de1k_linear_loo(const Dataset& data, const LinearFirstOrderDE& de, int k,
                       const Kernel& kernel, double h, double x0, std::size_t exclude,
                       double* weight_sum_out) {
    const auto& xs = data.xs();
    const auto& ys = data.ys();
    const AffineApproximant affine = affine_coeffs(de, x0, k);
    const Window win = kernel_window(xs, kernel, h, x0);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = win.lo; i < win.hi; ++i) {
        if (i == exclude) continue;
        const double w = kernel.eval_scaled(xs[i] - x0, h);
        double S, T;
        linear_terms(affine, xs[i] - x0, &S, &T);
        num += (ys[i] - T) * S * w;
        den += S * S * w;
    }
    if (weight_sum_out) *weight_sum_out = den;
    if (den < kDegenerateWeightSum) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return num / den;
}

} // namespace detail

Fit de1k_exponential(const Dataset& data, const ExponentialDE& de, int k, const Kernel& kernel,
                     double h, const std::vector<double>& grid) {
    validate_de1k_args(h, k, data.size());
    if (!std::isfinite(de.lambda)) {
        throw std::invalid_argument("de1k_exponential: lambda must be finite");
    }

    Fit fit;
    fit.grid = grid;
    fit.values.resize(grid.size());
    fit.degenerate.assign(grid.size(), 0);
    fit.weight_sums.resize(grid.size());
    fit.method = "de1-" + std::to_string(k);
    fit.bandwidth = h;

    for (std::size_t g = 0; g < grid.size(); ++g) {
        double den = 0.0;
        const double v =
            detail::de1k_exponential_loo(data, de, k, kernel, h, grid[g], kNoExclude, &den);
        fit.values[g] = v;
        fit.weight_sums[g] = den;
        if (std::isnan(v)) fit.degenerate[g] = 1;
    }
    return fit;
}

Fit de1k_linear(const Dataset& data, const LinearFirstOrderDE& de, int k, const Kernel& kernel,
                double h, const std::vector<double>& grid) {
    validate_de1k_args(h, k, data.size());

    Fit fit;
    fit.grid = grid;
    fit.values.resize(grid.size());
    fit.degenerate.assign(grid.size(), 0);
    fit.weight_sums.resize(grid.size());
    fit.method = "de1-" + std::to_string(k) + "-linear";
    fit.bandwidth = h;

    for (std::size_t g = 0; g < grid.size(); ++g) {
        double den = 0.0;
        const double v = detail::de1k_linear_loo(data, de, k, kernel, h, grid[g], kNoExclude, &den);
        fit.values[g] = v;
        fit.weight_sums[g] = den;
        if (std::isnan(v)) fit.degenerate[g] = 1;
    }
    return fit;
}

double local_objective(const Dataset& data, double alpha, double x0,
                       const std::function<double(double xi, double alpha)>& predict,
                       const Kernel& kernel, double h) {
    if (!(h > 0.0)) {
        throw InvalidBandwidthError("local_objective: bandwidth must be positive");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = data.y(i) - predict(data.x(i), alpha);
        total += r * r * kernel.eval_scaled(data.x(i) - x0, h);
    }
    return total;
}

Fit de11_general(const Dataset& data, const GeneralFirstOrderDE& de, int degree,
                 const Kernel& kernel, double h, const std::vector<double>& grid,
                 const SolverOptions& opts) {
    if (!(h > 0.0)) {
        throw InvalidBandwidthError("de11_general: bandwidth must be positive");
    }
    if (degree != 1 && degree != 2) {
        throw std::invalid_argument("de11_general: degree must be 1 or 2");
    }
    if (degree == 2 && !de.has_partials()) {
        throw std::invalid_argument("de11_general: degree 2 requires the partials F1 and F2");
    }

    Fit fit;
    fit.grid = grid;
    fit.values.resize(grid.size());
    fit.degenerate.assign(grid.size(), 0);
    fit.weight_sums.resize(grid.size());
    fit.method = "de11-g" + std::to_string(degree);
    fit.bandwidth = h;

    const auto& xs = data.xs();
    const auto& ys = data.ys();

    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double x0 = grid[g];
        const Window win = kernel_window(xs, kernel, h, x0);

        double wsum = 0.0;
        double nw_num = 0.0;
        for (std::size_t i = win.lo; i < win.hi; ++i) {
            const double w = kernel.eval_scaled(xs[i] - x0, h);
            wsum += w;
            nw_num += ys[i] * w;
        }
        fit.weight_sums[g] = wsum;
        if (wsum < kDegenerateWeightSum) {
            fit.values[g] = std::numeric_limits<double>::quiet_NaN();
            fit.degenerate[g] = 1;
            continue;
        }

        auto objective = [&](double alpha) {
            double total = 0.0;
            for (std::size_t i = win.lo; i < win.hi; ++i) {
                const double dx = xs[i] - x0;
                double pred = alpha + dx * de.F(x0, alpha);
                if (degree == 2) {
                    pred += 0.5 * dx * dx *
                            (de.F1(x0, alpha) + de.F2(x0, alpha) * de.F(x0, alpha));
                }
                const double r = ys[i] - pred;
                total += r * r * kernel.eval_scaled(dx, h);
            }
            return total;
        };

        // Bracket the minimum around the NW estimate, growing geometrically.
        double mid = nw_num / wsum;
        double step = 0.5 * (1.0 + std::abs(mid));
        double lo = mid - step;
        double hi = mid + step;
        double f_lo = objective(lo);
        double f_mid = objective(mid);
        double f_hi = objective(hi);
        int expansions = 0;
        while (!(f_mid <= f_lo && f_mid <= f_hi)) {
            if (++expansions > opts.max_expansions) {
                throw OptimizerFailureError(
                    "de11_general: no bracket for the local minimum at x0=" + std::to_string(x0),
                    x0);
            }
            step *= 2.0;
            if (f_lo < f_hi) {
                hi = mid;
                f_hi = f_mid;
                mid = lo;
                f_mid = f_lo;
                lo = mid - step;
                f_lo = objective(lo);
            } else {
                lo = mid;
                f_lo = f_mid;
                mid = hi;
                f_mid = f_hi;
                hi = mid + step;
                f_hi = objective(hi);
            }
        }

        // Golden-section shrink to the requested bracket width.
        double b = lo + kGolden * (hi - lo);
        double a = hi - kGolden * (hi - lo);
        double f_a = objective(a);
        double f_b = objective(b);
        while (hi - lo > opts.tol * (1.0 + 0.5 * (std::abs(lo) + std::abs(hi)))) {
            if (f_a < f_b) {
                hi = b;
                b = a;
                f_b = f_a;
                a = hi - kGolden * (hi - lo);
                f_a = objective(a);
            } else {
                lo = a;
                a = b;
                f_a = f_b;
                b = lo + kGolden * (hi - lo);
                f_b = objective(b);
            }
        }
        fit.values[g] = 0.5 * (lo + hi);
    }
    return fit;
}

} // namespace desmooth
