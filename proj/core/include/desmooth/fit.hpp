#ifndef DESMOOTH_FIT_HPP
#define DESMOOTH_FIT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace desmooth {

/// Weight sums below this are treated as an empty kernel window.
inline constexpr double kDegenerateWeightSum = 1e-12;

/// Result of evaluating an estimator over a grid.
///
/// A grid point with effectively empty kernel window is flagged degenerate:
/// its value is NaN, degenerate[i] = 1, and the surviving weight sum is kept
/// in weight_sums for diagnostics. Fits never abort on empty windows.
struct Fit {
    std::vector<double> grid;           ///< evaluation points x0
    std::vector<double> values;         ///< ghat(x0); NaN where degenerate
    std::vector<std::uint8_t> degenerate; ///< 1 where the window was empty
    std::vector<double> weight_sums;    ///< per-point effective weight sum
    std::string method;                 ///< estimator identity tag
    double bandwidth = 0.0;             ///< bandwidth used (representative when varying)
    std::vector<double> bandwidths;     ///< per-point bandwidths; empty unless they vary

    std::size_t size() const noexcept { return grid.size(); }
    bool any_degenerate() const noexcept {
        for (auto d : degenerate)
            if (d) return true;
        return false;
    }
    std::size_t degenerate_count() const noexcept {
        std::size_t c = 0;
        for (auto d : degenerate) c += d;
        return c;
    }
};

} // namespace desmooth

#endif // DESMOOTH_FIT_HPP
