#pragma once

#include <vector>

namespace chaotun {

/// Uniformly sampled occupation probability N0(k * dt_sample).
struct OccupationSeries {
    double dt_sample = 1.0;
    std::vector<double> values;
};

} // namespace chaotun
