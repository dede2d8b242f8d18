#ifndef DESMOOTH_TOOLS_MOUSE_DATA_HPP
#define DESMOOTH_TOOLS_MOUSE_DATA_HPP

#include "desmooth/dataset.hpp"

#include <vector>

namespace desmooth::tools {

/// Control-arm tumor volume measurements from a single mouse: time in days,
/// volume in cubic centimeters. Shipped as data/mouse_tumor.csv as well.
inline Dataset mouse_tumor_data() {
    std::vector<double> days = {21, 25, 28, 31, 33, 35, 38, 40, 42, 45};
    std::vector<double> volumes = {0.05, 0.09, 0.22, 0.32, 0.61, 0.70, 0.90, 1.29, 1.77, 3.32};
    return Dataset(std::move(days), std::move(volumes));
}

} // namespace desmooth::tools

#endif // DESMOOTH_TOOLS_MOUSE_DATA_HPP
