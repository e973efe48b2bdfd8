#include "gridfreq/storage.hpp"

#include <algorithm>
#include <cmath>

#include "gridfreq/errors.hpp"

namespace gridfreq {

namespace {

constexpr double kTimeEps = 1e-9;

void require(bool ok, const char* what)
{
    if (!ok) {
        throw ConfigError(std::string("storage device invariant violated: ") + what);
    }
}

} // namespace

void Measurement::reset(double nominal)
{
    nominal_hz = nominal;
    raw_hz = nominal;
    filtered_hz = nominal;
    rocof_hz_per_s = 0.0;
    warming_up = true;
    history.clear();
}

double filter_frequency(Measurement& meas, double raw_hz, double dt_s)
{
    if (!std::isfinite(raw_hz) || !(dt_s > 0.0)) {
        throw NumericError("filter_frequency: bad input");
    }
    meas.raw_hz = raw_hz;
    meas.filtered_hz += (dt_s / meas.t_filter_s) * (raw_hz - meas.filtered_hz);
    return meas.filtered_hz;
}

double estimate_rocof(const Measurement& meas)
{
    const auto& h = meas.history;
    const std::size_t n = h.size();
    if (n < 2) {
        return 0.0;
    }
    const double span = h.back().first - h.front().first;
    if (span <= 0.0) {
        throw NumericError("estimate_rocof: degenerate sample window");
    }
    if (span + kTimeEps < meas.window_s) {
        return 0.0; // still warming up
    }

    double t_mean = 0.0;
    double f_mean = 0.0;
    for (const auto& [t, f] : h) {
        t_mean += t;
        f_mean += f;
    }
    t_mean /= static_cast<double>(n);
    f_mean /= static_cast<double>(n);

    double num = 0.0;
    double den = 0.0;
    for (const auto& [t, f] : h) {
        num += (t - t_mean) * (f - f_mean);
        den += (t - t_mean) * (t - t_mean);
    }
    if (den <= 0.0) {
        throw NumericError("estimate_rocof: degenerate sample window");
    }
    return num / den;
}

void measurement_update(Measurement& meas, double t_s, double raw_hz, double dt_s)
{
    filter_frequency(meas, raw_hz, dt_s);
    meas.history.emplace_back(t_s, meas.filtered_hz);
    while (meas.history.front().first < t_s - meas.window_s - kTimeEps) {
        meas.history.pop_front();
    }
    const double span = meas.history.back().first - meas.history.front().first;
    meas.warming_up = span + kTimeEps < meas.window_s;
    meas.rocof_hz_per_s = estimate_rocof(meas);
}

bool StorageDevice::step_controlled() const
{
    return std::holds_alternative<StepConfig>(controller);
}

void StorageDevice::validate() const
{
    require(std::isfinite(p_max_mw) && p_max_mw > 0.0, "p_max_mw must be > 0");
    require(std::isfinite(e_max_mws) && e_max_mws > 0.0, "e_max_mws must be > 0");
    require(soc_mws >= 0.0 && soc_mws <= e_max_mws, "soc_mws must be in [0, e_max_mws]");
    require(rocof_window_s > 0.0, "rocof_window_s must be > 0");
    if (const auto* droop = std::get_if<DroopConfig>(&controller)) {
        require(droop->droop_ratio > 0.0, "droop_ratio must be > 0");
        require(droop->t_filter_s > 0.0, "t_filter_s must be > 0");
        require(droop->deadband_hz >= 0.0, "deadband_hz must be >= 0");
    } else {
        const auto& step = std::get<StepConfig>(controller);
        require(step.alpha > 0.0 && step.alpha < 1.0, "alpha must be in (0,1)");
        require(step.delay_s >= 0.0, "delay_s must be >= 0");
        require(step.t_filter_s > 0.0, "t_filter_s must be > 0");
        require(step.assumed_inertia_s >= 0.0, "assumed_inertia_s must be >= 0");
        require(step.assumed_capacity_mva >= 0.0, "assumed_capacity_mva must be >= 0");
        if (step.override_power_mw) {
            require(*step.override_power_mw >= 0.0, "override_power_mw must be >= 0");
        }
    }
}

void StorageDevice::reset_runtime(double f_nominal_hz)
{
    meas.t_filter_s = std::visit([](const auto& c) { return c.t_filter_s; }, controller);
    meas.window_s = rocof_window_s;
    meas.reset(f_nominal_hz);
    phase = StepPhase::Armed;
    confirm_started_s = 0.0;
    p_step_mw = 0.0;
}

double droop_command(const DroopConfig& ctrl, const StorageDevice& device,
                     double f_nominal_hz, double filtered_hz)
{
    const double df = f_nominal_hz - filtered_hz - ctrl.deadband_hz;
    if (df <= 0.0) {
        return 0.0;
    }
    const double p = df / (ctrl.droop_ratio * f_nominal_hz) * device.p_max_mw;
    return std::min(p, device.p_max_mw);
}

double step_magnitude(const StepConfig& ctrl, double rocof_hz_per_s, double f_nominal_hz)
{
    if (!std::isfinite(rocof_hz_per_s) || !(f_nominal_hz > 0.0)) {
        throw NumericError("step_magnitude: bad input");
    }
    if (ctrl.override_power_mw) {
        return *ctrl.override_power_mw;
    }
    return ctrl.alpha * 2.0 * ctrl.assumed_inertia_s * (std::abs(rocof_hz_per_s) / f_nominal_hz)
        * ctrl.assumed_capacity_mva;
}

double controller_update(StorageDevice& device, const Measurement& meas, double t_s, double dt_s)
{
    double cmd = 0.0;

    if (const auto* droop = std::get_if<DroopConfig>(&device.controller)) {
        cmd = droop_command(*droop, device, meas.nominal_hz, meas.filtered_hz);
    } else {
        const auto& step = std::get<StepConfig>(device.controller);
        switch (device.phase) {
        case StepPhase::Armed:
            if (meas.filtered_hz < step.activation_hz) {
                device.phase = StepPhase::Confirming;
                device.confirm_started_s = t_s;
            }
            break;
        case StepPhase::Confirming:
            if (t_s - device.confirm_started_s + kTimeEps >= step.delay_s) {
                const double rocof = meas.rocof_hz_per_s;
                if (rocof < 0.0) {
                    device.p_step_mw =
                        std::min(step_magnitude(step, rocof, meas.nominal_hz), device.p_max_mw);
                    device.phase = StepPhase::Active;
                    cmd = device.p_step_mw;
                } else {
                    device.phase = StepPhase::Armed; // contingency not confirmed
                }
            }
            break;
        case StepPhase::Active:
            cmd = device.p_step_mw;
            break;
        case StepPhase::Exhausted:
            break;
        }
    }

    cmd = std::clamp(cmd, 0.0, device.p_max_mw);

    // Energy accounting: the final emission is reduced to drain exactly to zero.
    if (cmd > 0.0) {
        const double sustainable = device.soc_mws / dt_s;
        if (cmd >= sustainable) {
            cmd = sustainable;
            device.soc_mws = 0.0;
            if (device.phase == StepPhase::Active) {
                device.phase = StepPhase::Exhausted;
            }
        } else {
            device.soc_mws -= cmd * dt_s;
        }
    }
    return cmd;
}

} // namespace gridfreq
