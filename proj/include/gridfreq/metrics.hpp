#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gridfreq/trace.hpp"

namespace gridfreq {

/// A local minimum and the following local maximum must differ by at least
/// this much to count as a distinct nadir.
constexpr double kNadirProminenceHz = 0.005;

/// Settling frequency is the mean over the final part of the trace.
constexpr double kSettlingWindowS = 5.0;

struct Metrics {
    double f_nominal_hz = 60.0;
    double nadir_hz = 0.0;     ///< global minimum over the trace
    double nadir_time_s = 0.0;
    std::optional<double> first_local_nadir_hz;
    std::optional<double> first_local_nadir_time_s;
    std::optional<double> second_local_nadir_hz;
    std::optional<double> second_local_nadir_time_s;
    double settling_hz = 0.0;
    double min_rocof_hz_per_s = 0.0;
    double energy_used_mws = 0.0; ///< trapezoidal integral of total device power
    double peak_power_mw = 0.0;
    bool ufls_triggered = false;

    bool has_two_nadirs() const
    {
        return first_local_nadir_hz.has_value() && second_local_nadir_hz.has_value();
    }
};

/// Global minimum plus prominence-filtered local nadirs (at most the two
/// deepest, reported in time order).
Metrics compute_metrics(const Trace& trace);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

} // namespace gridfreq
