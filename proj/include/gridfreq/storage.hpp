#pragma once

#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace gridfreq {

/// PLL-style measurement chain: first-order low-pass on the raw frequency and
/// a trailing-window least-squares ROCOF estimate on the filtered signal.
struct Measurement {
    double nominal_hz = 60.0;
    double t_filter_s = 0.5;
    double window_s = 0.25;
    double raw_hz = 60.0;
    double filtered_hz = 60.0;
    double rocof_hz_per_s = 0.0;
    bool warming_up = true; ///< window not yet spanned
    std::deque<std::pair<double, double>> history; ///< (t_s, filtered_hz)

    void reset(double nominal);
};

/// One low-pass update: y += (dt/T1) * (u - y). Returns the updated value.
double filter_frequency(Measurement& meas, double raw_hz, double dt_s);

/// Least-squares slope of the filtered frequency over the trailing window.
/// Returns 0 while warming up; throws NumericError on a degenerate window.
double estimate_rocof(const Measurement& meas);

/// Filter, record, and refresh the ROCOF estimate. Call once per major step.
void measurement_update(Measurement& meas, double t_s, double raw_hz, double dt_s);

struct DroopConfig {
    double droop_ratio = 0.025; ///< per-unit droop on the device rating
    double t_filter_s = 0.5;
    double deadband_hz = 0.0;
};

struct StepConfig {
    double alpha = 0.85;               ///< response-contingency ratio, in (0,1)
    double activation_hz = 59.85;      ///< trigger threshold
    double delay_s = 0.5;              ///< confirmation delay
    double assumed_inertia_s = 0.0;    ///< controller belief of H; 0 = take from model
    double assumed_capacity_mva = 0.0; ///< controller belief of C; 0 = take from model
    double t_filter_s = 0.5;
    std::optional<double> override_power_mw; ///< fixed magnitude for duration sweeps
};

enum class StorageKind { HEES, HPES };
enum class StepPhase { Armed, Confirming, Active, Exhausted };

/// Power- and energy-limited discharge-only injector with one controller.
struct StorageDevice {
    std::string name = "es";
    double p_max_mw = 0.0;
    double e_max_mws = 0.0;
    double soc_mws = 0.0;
    StorageKind kind = StorageKind::HPES;
    double rocof_window_s = 0.25;
    std::variant<DroopConfig, StepConfig> controller = DroopConfig{};

    // per-run state, reset by run_simulation
    Measurement meas;
    StepPhase phase = StepPhase::Armed;
    double confirm_started_s = 0.0;
    double p_step_mw = 0.0;

    bool step_controlled() const;
    void validate() const;
    void reset_runtime(double f_nominal_hz);
};

/// P = max(0, f_nominal - filtered - deadband) / (droop_ratio * f_nominal) * p_max,
/// clamped to [0, p_max]. Per-unit base is the device rating.
double droop_command(const DroopConfig& ctrl, const StorageDevice& device,
                     double f_nominal_hz, double filtered_hz);

/// Step response magnitude alpha * 2 * H * (|rocof| / f_nominal) * C, before
/// the power-limit clamp. Returns the override magnitude when configured.
double step_magnitude(const StepConfig& ctrl, double rocof_hz_per_s, double f_nominal_hz);

/// Advance the controller one major step; returns the power held over
/// [t, t+dt). Droop path emits the droop command each step; step path runs
/// Armed -> Confirming -> Active -> Exhausted (with re-arm on a failed
/// confirmation). Drains SoC and reduces the final emission to land exactly
/// at zero.
double controller_update(StorageDevice& device, const Measurement& meas, double t_s, double dt_s);

} // namespace gridfreq
