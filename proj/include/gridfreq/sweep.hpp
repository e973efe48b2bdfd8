#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gridfreq/metrics.hpp"
#include "gridfreq/scenario.hpp"

namespace gridfreq {

struct SweepPoint {
    double parameter = 0.0;
    Metrics metrics;
};

/// One simulation per parameter value plus trend diagnostics. The nadir-time
/// linear fit covers the central half of the grid (indices [n/4, n - n/4)).
struct SweepResult {
    std::string parameter_name;
    std::vector<SweepPoint> points;

    bool nadir_non_decreasing = false;
    std::size_t nadir_argmax = 0;       ///< index of the highest nadir
    double first_increment_hz = 0.0;    ///< nadir gain between the first two points
    double last_increment_hz = 0.0;     ///< nadir gain between the last two points
    double saturation_ratio = 0.0;      ///< last/first increment; NaN when undefined

    std::size_t midrange_begin = 0;
    std::size_t midrange_end = 0;
    LinearFit nadir_time_fit;           ///< nadir time vs parameter over the mid-range

    double crossover_gap_hz = 0.0;      ///< |first - second nadir| at the argmax; NaN when absent
    std::size_t time_jump_count = 0;    ///< nadir-time drops > 1 s between consecutive points
    std::size_t time_jump_index = 0;    ///< left index of the detected drop
};

/// Runs base.devices with e_max (and SoC) set to each value in turn.
/// e_values must be positive, ascending, and at least 4 points.
SweepResult sweep_capacity(const Study& base, const std::vector<double>& e_values_mws);

/// For each discharge duration T, sets override_power = min(e_max/T, p_max) on
/// every (step-controlled) device and runs. Durations must be positive,
/// ascending, and at least 4 points.
SweepResult sweep_duration(const Study& base, const std::vector<double>& durations_s);

} // namespace gridfreq
