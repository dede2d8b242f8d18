#include "desmooth/local_poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace desmooth {

namespace {

constexpr std::size_t kNoExclude = std::numeric_limits<std::size_t>::max();

struct Window {
    std::size_t lo;
    std::size_t hi; // one past the end
};

Window kernel_window(const std::vector<double>& xs, const Kernel& kernel, double h, double x0) {
    const double r = kernel.support_radius() * h;
    auto lo = std::lower_bound(xs.begin(), xs.end(), x0 - r);
    auto hi = std::upper_bound(xs.begin(), xs.end(), x0 + r);
    return {static_cast<std::size_t>(lo - xs.begin()), static_cast<std::size_t>(hi - xs.begin())};
}

double solve_at(const Dataset& data, int degree, const Kernel& kernel, double h, double x0,
                double* weight_sum_out, std::size_t exclude) {
    const auto& xs = data.xs();
    const auto& ys = data.ys();
    const Window win = kernel_window(xs, kernel, h, x0);

    double wsum = 0.0;
    std::size_t m = 0;
    for (std::size_t i = win.lo; i < win.hi; ++i) {
        if (i == exclude) continue;
        wsum += kernel.eval_scaled(xs[i] - x0, h);
        ++m;
    }
    if (weight_sum_out) *weight_sum_out = wsum;
    if (wsum < kDegenerateWeightSum) {
        return std::numeric_limits<double>::quiet_NaN();
    }

    if (degree == 0) {
        double num = 0.0;
        for (std::size_t i = win.lo; i < win.hi; ++i) {
            if (i == exclude) continue;
            num += ys[i] * kernel.eval_scaled(xs[i] - x0, h);
        }
        return num / wsum;
    }

    const int p = degree + 1;
    Eigen::MatrixXd design(static_cast<Eigen::Index>(m), p);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m));
    Eigen::Index row = 0;
    for (std::size_t i = win.lo; i < win.hi; ++i) {
        if (i == exclude) continue;
        const double sw = std::sqrt(kernel.eval_scaled(xs[i] - x0, h));
        const double z = (xs[i] - x0) / h; // scaled basis controls conditioning
        double basis = sw;
        for (int j = 0; j < p; ++j) {
            design(row, j) = basis;
            basis *= z;
        }
        rhs(row) = sw * ys[i];
        ++row;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
        throw RankDeficiencyError("local polynomial fit: weighted design numerically singular at "
                                  "grid point x0=" + std::to_string(x0),
                                  x0);
    }
    const Eigen::VectorXd beta = qr.solve(rhs);
    return beta(0); // intercept of the centered basis is ghat(x0)
}

} // namespace

double local_poly_at(const Dataset& data, int degree, const Kernel& kernel, double h, double x0,
                     double* weight_sum_out) {
    return solve_at(data, degree, kernel, h, x0, weight_sum_out, kNoExclude);
}

namespace detail {

// Leave-one-out hook shared with the bandwidth module.
double local_poly_loo(const Dataset& data, int degree, const Kernel& kernel, double h, double x0,
                      std::size_t exclude, double* weight_sum_out) {
    return solve_at(data, degree, kernel, h, x0, weight_sum_out, exclude);
}

} // namespace detail

Fit fit_local_poly(const Dataset& data, int degree, const Kernel& kernel, double h,
                   const std::vector<double>& grid) {
    if (!(h > 0.0)) {
        throw InvalidBandwidthError("fit_local_poly: bandwidth must be positive");
    }
    if (degree < 0 || degree > 5) {
        throw std::invalid_argument("fit_local_poly: degree must be in [0, 5]");
    }
    if (data.size() < static_cast<std::size_t>(degree) + 1) {
        throw std::invalid_argument("fit_local_poly: need at least degree + 1 observations");
    }

    Fit fit;
    fit.grid = grid;
    fit.values.resize(grid.size());
    fit.degenerate.assign(grid.size(), 0);
    fit.weight_sums.resize(grid.size());
    static const char* kNames[] = {"nw", "ll", "lq", "lc", "lp4", "lp5"};
    fit.method = kNames[degree];
    fit.bandwidth = h;

    for (std::size_t g = 0; g < grid.size(); ++g) {
        double wsum = 0.0;
        const double v = solve_at(data, degree, kernel, h, grid[g], &wsum, kNoExclude);
        fit.values[g] = v;
        fit.weight_sums[g] = wsum;
        if (std::isnan(v)) fit.degenerate[g] = 1;
    }
    return fit;
}

} // namespace desmooth
