#ifndef DESMOOTH_DATASET_HPP
#define DESMOOTH_DATASET_HPP

#include "desmooth/errors.hpp"

#include <span>
#include <vector>

namespace desmooth {

/// Closed interval [a, b].
struct Interval {
    double a = 0.0;
    double b = 1.0;

    double length() const noexcept { return b - a; }
    bool contains(double x) const noexcept { return x >= a && x <= b; }
};

/// Ordered (x, y) observation pairs on an interval [a, b].
///
/// Construction sorts by x (y permuted in lockstep) and validates that every
/// covariate lies inside the interval. Duplicate x values are allowed.
class Dataset {
public:
    /// Interval defaults to [min x, max x].
    Dataset(std::vector<double> xs, std::vector<double> ys);
    Dataset(std::vector<double> xs, std::vector<double> ys, Interval interval);

    std::size_t size() const noexcept { return xs_.size(); }
    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& ys() const noexcept { return ys_; }
    const Interval& interval() const noexcept { return interval_; }

    double x(std::size_t i) const { return xs_[i]; }
    double y(std::size_t i) const { return ys_[i]; }

    /// Copy with observation i removed (interval preserved). Used by
    /// leave-one-out cross-validation.
    Dataset without(std::size_t i) const;

    /// Median of successive differences of the sorted covariates
    /// (0 when n < 2 or all x coincide).
    double median_spacing() const;

private:
    void sort_and_validate();

    std::vector<double> xs_;
    std::vector<double> ys_;
    Interval interval_;
};

} // namespace desmooth

#endif // DESMOOTH_DATASET_HPP
