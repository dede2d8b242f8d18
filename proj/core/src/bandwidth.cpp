#include "desmooth/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace desmooth {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

BandwidthGrid::BandwidthGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw std::invalid_argument("bandwidth grid must be nonempty");
    }
    double prev = 0.0;
    for (double v : values_) {
        if (!(v > prev) || !std::isfinite(v)) {
            throw std::invalid_argument(
                "bandwidth grid must be strictly increasing, positive, and finite");
        }
        prev = v;
    }
}

BandwidthGrid BandwidthGrid::log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) {
        throw std::invalid_argument("log_spaced: need 0 < lo < hi and count >= 2");
    }
    std::vector<double> values(count);
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        values[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                       static_cast<double>(count - 1));
    }
    values.front() = lo;
    values.back() = hi;
    return BandwidthGrid(std::move(values));
}

double pilot_bandwidth(const Dataset& data) { return 0.5 * data.median_spacing(); }

BandwidthGrid default_cv_grid(const Dataset& data) {
    const double range = data.interval().length();
    double spacing = data.median_spacing();
    if (!(range > 0.0)) {
        throw std::invalid_argument("default_cv_grid: degenerate covariate range");
    }
    if (!(spacing > 0.0)) spacing = range / static_cast<double>(data.size() + 1);
    const double lo = 0.25 * spacing;
    const double hi = std::max(0.5 * range, 2.0 * lo);
    return BandwidthGrid::log_spaced(lo, hi, 40);
}

std::vector<LoocvResult> loocv_select_many(const Dataset& data,
                                           const std::vector<EstimatorSpec>& specs,
                                           const BandwidthGrid& grid, const Kernel& kernel) {
    if (data.size() < 3) {
        throw std::invalid_argument("loocv_select: need at least 3 observations");
    }
    for (const auto& spec : specs) {
        if (!spec.is_kernel_method()) {
            throw ConfigError("loocv_select: " + spec.name() + " has no bandwidth to select");
        }
    }

    const std::size_t n = data.size();
    const std::size_t n_h = grid.size();
    std::vector<LoocvResult> results(specs.size());
    for (auto& r : results) r.scores.assign(n_h, 0.0);
    std::vector<bool> any_valid(specs.size(), false);

    for (std::size_t hi = 0; hi < n_h; ++hi) {
        const double h = grid.values()[hi];
        for (std::size_t s = 0; s < specs.size(); ++s) {
            double cv = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double pred;
                try {
                    pred = detail::estimator_loo(specs[s], data, kernel, h, data.x(i), i);
                } catch (const RankDeficiencyError&) {
                    pred = std::numeric_limits<double>::quiet_NaN();
                }
                if (std::isnan(pred)) {
                    cv += data.y(i) * data.y(i); // empty-window penalty
                } else {
                    const double r = data.y(i) - pred;
                    cv += r * r;
                    any_valid[s] = true;
                }
            }
            results[s].scores[hi] = cv;
        }
    }

    for (std::size_t s = 0; s < specs.size(); ++s) {
        if (!any_valid[s]) {
            throw NoValidBandwidthError("loocv_select: every bandwidth degenerate at every point "
                                        "for estimator " + specs[s].name());
        }
        // strict < keeps the smallest h on ties
        std::size_t best = 0;
        for (std::size_t hi = 1; hi < n_h; ++hi) {
            if (results[s].scores[hi] < results[s].scores[best]) best = hi;
        }
        results[s].h_star = grid.values()[best];
    }
    return results;
}

LoocvResult loocv_select(const Dataset& data, const EstimatorSpec& spec, const BandwidthGrid& grid,
                         const Kernel& kernel) {
    return loocv_select_many(data, {spec}, grid, kernel).front();
}

double optimal_bandwidth(int k, const OptimalBandwidthInputs& in) {
    if (k < 0) {
        throw std::invalid_argument("optimal_bandwidth: degree must be nonnegative");
    }
    if (!(in.sigma2 > 0.0) || !(in.n >= 1.0) || !(in.f_x0 > 0.0)) {
        throw std::invalid_argument("optimal_bandwidth: need sigma2 > 0, n >= 1, f(x0) > 0");
    }
    if (in.lambda == 0.0) {
        throw UndefinedOptimumError("optimal_bandwidth: formula degenerates at lambda = 0");
    }

    const double rk = in.kernel.roughness(0);
    const double fact = factorial(k + 1);
    const double common = in.sigma2 * rk * fact * fact /
                          (in.n * in.f_x0 * std::exp(2.0 * in.lambda * in.x0) * in.g0 * in.g0 *
                           std::pow(in.lambda, 2 * k + 2));

    if (k % 2 == 1) {
        const double mu = in.kernel.moment(k + 1);
        const double power = common / ((2.0 * k + 2.0) * mu * mu);
        return std::pow(power, 1.0 / (2.0 * k + 3.0));
    }

    if (!in.fprime_x0) {
        throw std::invalid_argument("optimal_bandwidth: even degree requires fprime_x0");
    }
    const double drift = in.lambda + *in.fprime_x0 / in.f_x0;
    if (drift == 0.0) {
        throw UndefinedOptimumError(
            "optimal_bandwidth: lambda + f'(x0)/f(x0) vanishes for even degree");
    }
    const double mu = in.kernel.moment(k + 2);
    const double power = common / ((2.0 * k + 4.0) * mu * mu * drift * drift);
    return std::pow(power, 1.0 / (2.0 * k + 5.0));
}

double bandwidth_recursion(double h_ok, int k, double lambda) {
    if (!(h_ok > 0.0)) {
        throw InvalidBandwidthError("bandwidth_recursion: h must be positive");
    }
    if (k < 0) {
        throw std::invalid_argument("bandwidth_recursion: degree must be nonnegative");
    }
    if (lambda == 0.0) {
        throw UndefinedOptimumError("bandwidth_recursion: undefined at lambda = 0");
    }
    const double l4 = lambda * lambda * lambda * lambda;
    if (k % 2 == 1) {
        const double factor = (k + 3.0) * (k + 1.0) / l4;
        return std::pow(factor * std::pow(h_ok, 2.0 * k + 3.0), 1.0 / (2.0 * k + 7.0));
    }
    const double factor = (k + 2.0) * (k + 2.0) * (k + 2.0) / ((k + 4.0) * l4);
    return std::pow(factor * std::pow(h_ok, 2.0 * k + 5.0), 1.0 / (2.0 * k + 9.0));
}

} // namespace desmooth
