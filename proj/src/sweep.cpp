#include "gridfreq/sweep.hpp"

#include <cmath>
#include <limits>

#include "gridfreq/errors.hpp"
#include "gridfreq/simulate.hpp"

namespace gridfreq {

namespace {

constexpr double kTimeJumpThresholdS = 1.0;

void check_grid(const std::vector<double>& values, const char* what)
{
    if (values.size() < 4) {
        throw ScenarioError(std::string(what) + ": need at least 4 sweep points");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw ScenarioError(std::string(what) + ": sweep values must be positive");
        }
        if (i > 0 && !(values[i] > values[i - 1])) {
            throw ScenarioError(std::string(what) + ": sweep values must be strictly ascending");
        }
    }
}

SweepResult analyze(std::string parameter_name, std::vector<SweepPoint> points)
{
    SweepResult r;
    r.parameter_name = std::move(parameter_name);
    r.points = std::move(points);
    const std::size_t n = r.points.size();

    r.nadir_non_decreasing = true;
    r.nadir_argmax = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double nadir = r.points[i].metrics.nadir_hz;
        if (i > 0 && nadir < r.points[i - 1].metrics.nadir_hz - 1e-9) {
            r.nadir_non_decreasing = false;
        }
        if (nadir > r.points[r.nadir_argmax].metrics.nadir_hz) {
            r.nadir_argmax = i;
        }
    }

    r.first_increment_hz = r.points[1].metrics.nadir_hz - r.points[0].metrics.nadir_hz;
    r.last_increment_hz = r.points[n - 1].metrics.nadir_hz - r.points[n - 2].metrics.nadir_hz;
    r.saturation_ratio = r.first_increment_hz > 0.0
        ? r.last_increment_hz / r.first_increment_hz
        : std::numeric_limits<double>::quiet_NaN();

    // nadir-time trend over the central half of the grid
    r.midrange_begin = n / 4;
    r.midrange_end = n - n / 4;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = r.midrange_begin; i < r.midrange_end; ++i) {
        xs.push_back(r.points[i].parameter);
        ys.push_back(r.points[i].metrics.nadir_time_s);
    }
    r.nadir_time_fit = linear_fit(xs, ys);

    const Metrics& best = r.points[r.nadir_argmax].metrics;
    r.crossover_gap_hz = best.has_two_nadirs()
        ? std::abs(*best.first_local_nadir_hz - *best.second_local_nadir_hz)
        : std::numeric_limits<double>::quiet_NaN();

    r.time_jump_count = 0;
    r.time_jump_index = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dt_nadir =
            r.points[i + 1].metrics.nadir_time_s - r.points[i].metrics.nadir_time_s;
        if (dt_nadir <= -kTimeJumpThresholdS) {
            ++r.time_jump_count;
            r.time_jump_index = i;
        }
    }
    return r;
}

} // namespace

SweepResult sweep_capacity(const Study& base, const std::vector<double>& e_values_mws)
{
    check_grid(e_values_mws, "capacity sweep");
    const GridModel model = build_model(base.scenario, base.grid);

    std::vector<SweepPoint> points;
    points.reserve(e_values_mws.size());
    for (double e : e_values_mws) {
        std::vector<StorageDevice> devices = base.devices;
        for (StorageDevice& d : devices) {
            d.e_max_mws = e;
            d.soc_mws = e;
        }
        try {
            const Trace tr = run_simulation(model, base.scenario, devices);
            points.push_back({e, compute_metrics(tr)});
        } catch (const std::exception& ex) {
            throw SimulationError("capacity sweep aborted at e_max=" + std::to_string(e) + ": "
                                  + ex.what());
        }
    }
    return analyze("e_max_mws", std::move(points));
}

SweepResult sweep_duration(const Study& base, const std::vector<double>& durations_s)
{
    check_grid(durations_s, "duration sweep");
    for (const StorageDevice& d : base.devices) {
        if (!d.step_controlled()) {
            throw ScenarioError("duration sweep requires step-controlled devices");
        }
    }
    const GridModel model = build_model(base.scenario, base.grid);

    std::vector<SweepPoint> points;
    points.reserve(durations_s.size());
    for (double duration : durations_s) {
        std::vector<StorageDevice> devices = base.devices;
        for (StorageDevice& d : devices) {
            auto& cfg = std::get<StepConfig>(d.controller);
            cfg.override_power_mw = std::min(d.e_max_mws / duration, d.p_max_mw);
        }
        try {
            const Trace tr = run_simulation(model, base.scenario, devices);
            points.push_back({duration, compute_metrics(tr)});
        } catch (const std::exception& ex) {
            throw SimulationError("duration sweep aborted at T=" + std::to_string(duration) + ": "
                                  + ex.what());
        }
    }
    return analyze("duration_s", std::move(points));
}

} // namespace gridfreq
