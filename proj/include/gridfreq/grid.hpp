#pragma once

#include <functional>
#include <vector>

namespace gridfreq {

/// Equivalent reheat governor-turbine fleet of the aggregated interconnection.
/// Valve and reheat states are per unit on responsive_mva.
struct GovernorFleet {
    double responsive_mva = 0.0; ///< governor-responsive capacity, MVA
    double droop_pu = 0.05;      ///< speed droop R, per unit
    double t_governor_s = 0.2;   ///< valve/servo time constant, s
    double t_reheat_s = 6.0;     ///< reheat time constant, s
    double hp_fraction = 0.5;    ///< high-pressure turbine power fraction
    double headroom_mw = 0.0;    ///< maximum additional mechanical power, MW
};

/// One under-frequency load-shedding stage. Sheds a fraction of the remaining
/// load once the filtered frequency has stayed below threshold_hz for delay_s.
struct UflsStage {
    double threshold_hz = 59.3;
    double shed_fraction = 0.05;
    double delay_s = 0.1;
};

/// Aggregated single-bus model: swing equation plus one equivalent governor fleet.
struct GridModel {
    double f_nominal_hz = 60.0;
    double capacity_mva = 0.0;      ///< system MVA base
    double inertia_s = 0.0;         ///< effective average inertia constant, post-derating
    double load_mw = 0.0;
    double damping_pu_per_hz = 0.0; ///< load frequency sensitivity, fraction of load per Hz
    GovernorFleet governor;
    std::vector<UflsStage> ufls;    ///< empty = disabled

    void validate() const; // throws ConfigError naming the offending field
};

struct SystemState {
    double t_s = 0.0;
    double freq_hz = 60.0;
    double gov_valve_pu = 0.0;
    double gov_reheat_pu = 0.0;
    double mech_power_mw = 0.0;           ///< fleet mechanical power deviation, MW
    double load_remaining_fraction = 1.0; ///< in (0,1], after UFLS actions
};

struct GovernorRates {
    double valve_pu_s = 0.0;
    double reheat_pu_s = 0.0;
};

/// Swing equation: df/dt = f_nominal * P_net / (2 * H * C). injection_mw is
/// the net external injection seen by the bus (storage + shed load -
/// contingency loss); mechanical power comes from the state and the load
/// damping term is applied internally.
double swing_derivative(const GridModel& model, const SystemState& state, double injection_mw);

/// First-order valve lag toward -df/(R*f_nominal), reheat lag behind the valve.
GovernorRates governor_derivatives(const GridModel& model, const SystemState& state);

/// Fleet mechanical power for the given internal states, clamped to [0, headroom_mw].
double mechanical_power_mw(const GridModel& model, double valve_pu, double reheat_pu);

/// Classical fixed-step RK4 over the coupled swing + governor states.
/// injection_mw_at is evaluated at sub-step times; callers hold it piecewise
/// constant over the step so the callback is pure within a step.
SystemState rk4_step(const GridModel& model, const SystemState& state, double dt_s,
                     const std::function<double(double)>& injection_mw_at);

} // namespace gridfreq
