#include "desmooth/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace desmooth {

Dataset::Dataset(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.empty()) {
        throw EmptyDatasetError("dataset must contain at least one observation");
    }
    if (xs_.size() != ys_.size()) {
        throw std::invalid_argument("dataset: xs and ys must have equal length");
    }
    auto [lo, hi] = std::minmax_element(xs_.begin(), xs_.end());
    interval_ = Interval{*lo, *hi};
    sort_and_validate();
}

Dataset::Dataset(std::vector<double> xs, std::vector<double> ys, Interval interval)
    : xs_(std::move(xs)), ys_(std::move(ys)), interval_(interval) {
    if (xs_.empty()) {
        throw EmptyDatasetError("dataset must contain at least one observation");
    }
    if (xs_.size() != ys_.size()) {
        throw std::invalid_argument("dataset: xs and ys must have equal length");
    }
    sort_and_validate();
}

void Dataset::sort_and_validate() {
    const std::size_t n = xs_.size();
    for (double x : xs_) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument("dataset: covariates must be finite");
        }
        if (!interval_.contains(x)) {
            throw std::invalid_argument("dataset: covariate " + std::to_string(x) +
                                        " outside interval [" + std::to_string(interval_.a) + ", " +
                                        std::to_string(interval_.b) + "]");
        }
    }
    if (std::is_sorted(xs_.begin(), xs_.end())) {
        return;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [this](std::size_t i, std::size_t j) { return xs_[i] < xs_[j]; });
    std::vector<double> xs_sorted(n), ys_sorted(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs_sorted[i] = xs_[order[i]];
        ys_sorted[i] = ys_[order[i]];
    }
    xs_ = std::move(xs_sorted);
    ys_ = std::move(ys_sorted);
}

Dataset Dataset::without(std::size_t i) const {
    std::vector<double> xs;
    std::vector<double> ys;
    xs.reserve(xs_.size() - 1);
    ys.reserve(ys_.size() - 1);
    for (std::size_t j = 0; j < xs_.size(); ++j) {
        if (j == i) continue;
        xs.push_back(xs_[j]);
        ys.push_back(ys_[j]);
    }
    return Dataset(std::move(xs), std::move(ys), interval_);
}

double Dataset::median_spacing() const {
    if (xs_.size() < 2) return 0.0;
    std::vector<double> d(xs_.size() - 1);
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        d[i] = xs_[i + 1] - xs_[i];
    }
    std::sort(d.begin(), d.end());
    const std::size_t m = d.size();
    return (m % 2 == 1) ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]);
}

} // namespace desmooth
