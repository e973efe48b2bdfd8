#include "gridfreq/grid.hpp"

#include <cmath>
#include <string>

#include "gridfreq/errors.hpp"

namespace gridfreq {

namespace {

void require(bool ok, const char* what)
{
    if (!ok) {
        throw ConfigError(std::string("grid model invariant violated: ") + what);
    }
}

} // namespace

void GridModel::validate() const
{
    require(std::isfinite(f_nominal_hz) && f_nominal_hz > 0.0, "f_nominal_hz must be > 0");
    require(std::isfinite(capacity_mva) && capacity_mva > 0.0, "capacity_mva must be > 0");
    require(std::isfinite(inertia_s) && inertia_s > 0.0, "inertia_s must be > 0");
    require(std::isfinite(load_mw) && load_mw > 0.0, "load_mw must be > 0");
    require(std::isfinite(damping_pu_per_hz) && damping_pu_per_hz >= 0.0,
            "damping_pu_per_hz must be >= 0");

    const GovernorFleet& g = governor;
    require(std::isfinite(g.responsive_mva) && g.responsive_mva >= 0.0,
            "governor.responsive_mva must be >= 0");
    require(g.droop_pu > 0.0, "governor.droop_pu must be > 0");
    require(g.t_governor_s > 0.0, "governor.t_governor_s must be > 0");
    require(g.t_reheat_s > 0.0, "governor.t_reheat_s must be > 0");
    require(g.hp_fraction >= 0.0 && g.hp_fraction <= 1.0, "governor.hp_fraction must be in [0,1]");
    require(g.headroom_mw >= 0.0, "governor.headroom_mw must be >= 0");

    for (std::size_t i = 0; i < ufls.size(); ++i) {
        const UflsStage& s = ufls[i];
        require(s.threshold_hz < f_nominal_hz, "ufls threshold_hz must be below nominal");
        require(s.shed_fraction > 0.0 && s.shed_fraction <= 1.0, "ufls shed_fraction must be in (0,1]");
        require(s.delay_s >= 0.0, "ufls delay_s must be >= 0");
        if (i > 0) {
            require(s.threshold_hz < ufls[i - 1].threshold_hz,
                    "ufls thresholds must be strictly decreasing");
        }
    }
}

double mechanical_power_mw(const GridModel& model, double valve_pu, double reheat_pu)
{
    const GovernorFleet& g = model.governor;
    double p = g.responsive_mva * (g.hp_fraction * valve_pu + (1.0 - g.hp_fraction) * reheat_pu);
    if (p < 0.0) {
        p = 0.0;
    } else if (p > g.headroom_mw) {
        p = g.headroom_mw;
    }
    return p;
}

double swing_derivative(const GridModel& model, const SystemState& state, double injection_mw)
{
    if (!std::isfinite(injection_mw) || !std::isfinite(state.freq_hz)
        || !std::isfinite(state.mech_power_mw)) {
        throw NumericError("swing_derivative: non-finite input");
    }
    const double damping_mw = model.damping_pu_per_hz * model.load_mw
        * state.load_remaining_fraction * (state.freq_hz - model.f_nominal_hz);
    const double net_mw = state.mech_power_mw + injection_mw - damping_mw;
    return model.f_nominal_hz * net_mw / (2.0 * model.inertia_s * model.capacity_mva);
}

GovernorRates governor_derivatives(const GridModel& model, const SystemState& state)
{
    const GovernorFleet& g = model.governor;
    const double df = state.freq_hz - model.f_nominal_hz;
    const double valve_target = -df / (g.droop_pu * model.f_nominal_hz);
    return {(valve_target - state.gov_valve_pu) / g.t_governor_s,
            (state.gov_valve_pu - state.gov_reheat_pu) / g.t_reheat_s};
}

namespace {

struct Rates {
    double freq = 0.0;
    double valve = 0.0;
    double reheat = 0.0;
};

Rates stage_rates(const GridModel& model, const SystemState& base, double t, double freq,
                  double valve, double reheat, const std::function<double(double)>& injection_at)
{
    SystemState s = base;
    s.t_s = t;
    s.freq_hz = freq;
    s.gov_valve_pu = valve;
    s.gov_reheat_pu = reheat;
    s.mech_power_mw = mechanical_power_mw(model, valve, reheat);
    const GovernorRates gr = governor_derivatives(model, s);
    return {swing_derivative(model, s, injection_at(t)), gr.valve_pu_s, gr.reheat_pu_s};
}

} // namespace

SystemState rk4_step(const GridModel& model, const SystemState& state, double dt_s,
                     const std::function<double(double)>& injection_mw_at)
{
    if (!(dt_s > 0.0) || !std::isfinite(dt_s)) {
        throw NumericError("rk4_step: dt must be positive and finite");
    }
    const double t = state.t_s;
    const double h = dt_s;

    const Rates k1 = stage_rates(model, state, t, state.freq_hz, state.gov_valve_pu,
                                 state.gov_reheat_pu, injection_mw_at);
    const Rates k2 = stage_rates(model, state, t + h / 2.0, state.freq_hz + h / 2.0 * k1.freq,
                                 state.gov_valve_pu + h / 2.0 * k1.valve,
                                 state.gov_reheat_pu + h / 2.0 * k1.reheat, injection_mw_at);
    const Rates k3 = stage_rates(model, state, t + h / 2.0, state.freq_hz + h / 2.0 * k2.freq,
                                 state.gov_valve_pu + h / 2.0 * k2.valve,
                                 state.gov_reheat_pu + h / 2.0 * k2.reheat, injection_mw_at);
    const Rates k4 = stage_rates(model, state, t + h, state.freq_hz + h * k3.freq,
                                 state.gov_valve_pu + h * k3.valve,
                                 state.gov_reheat_pu + h * k3.reheat, injection_mw_at);

    SystemState out = state;
    out.t_s = t + h;
    out.freq_hz = state.freq_hz + h / 6.0 * (k1.freq + 2.0 * k2.freq + 2.0 * k3.freq + k4.freq);
    out.gov_valve_pu =
        state.gov_valve_pu + h / 6.0 * (k1.valve + 2.0 * k2.valve + 2.0 * k3.valve + k4.valve);
    out.gov_reheat_pu =
        state.gov_reheat_pu + h / 6.0 * (k1.reheat + 2.0 * k2.reheat + 2.0 * k3.reheat + k4.reheat);
    out.mech_power_mw = mechanical_power_mw(model, out.gov_valve_pu, out.gov_reheat_pu);

    if (!std::isfinite(out.freq_hz) || !std::isfinite(out.gov_valve_pu)
        || !std::isfinite(out.gov_reheat_pu)) {
        throw SimulationError("integration produced a non-finite state at t="
                              + std::to_string(out.t_s) + " s");
    }
    return out;
}

} // namespace gridfreq
