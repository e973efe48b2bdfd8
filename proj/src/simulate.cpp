#include "gridfreq/simulate.hpp"

#include <cmath>

#include "gridfreq/errors.hpp"

namespace gridfreq {

double Trace::total_power_mw(std::size_t row) const
{
    double sum = 0.0;
    for (const auto& col : device_power_mw) {
        sum += col[row];
    }
    return sum;
}

double Trace::total_soc_mws(std::size_t row) const
{
    double sum = 0.0;
    for (const auto& col : device_soc_mws) {
        sum += col[row];
    }
    return sum;
}

Trace run_simulation(const GridModel& model, const Scenario& scenario,
                     std::vector<StorageDevice> devices)
{
    model.validate();
    scenario.validate();

    const double dt = scenario.dt_s;
    const auto n_steps = static_cast<std::size_t>(std::llround(scenario.duration_s / dt));
    if (n_steps == 0) {
        throw ScenarioError("duration_s shorter than one integration step");
    }

    // Fill in controller beliefs that default to the true model, then reset
    // per-run state on the local copies.
    for (StorageDevice& d : devices) {
        if (auto* step = std::get_if<StepConfig>(&d.controller)) {
            if (step->assumed_inertia_s <= 0.0) {
                step->assumed_inertia_s = model.inertia_s;
            }
            if (step->assumed_capacity_mva <= 0.0) {
                step->assumed_capacity_mva = model.capacity_mva;
            }
            if (!(step->activation_hz < model.f_nominal_hz)) {
                throw ConfigError("step activation_hz must be below the nominal frequency");
            }
        }
        d.validate();
        d.reset_runtime(model.f_nominal_hz);
    }

    Measurement system_meas;
    system_meas.reset(model.f_nominal_hz);

    struct UflsRuntime {
        double below_s = 0.0;
        bool tripped = false;
    };
    std::vector<UflsRuntime> ufls_state(model.ufls.size());

    SystemState state;
    state.freq_hz = model.f_nominal_hz;

    Trace tr;
    tr.f_nominal_hz = model.f_nominal_hz;
    tr.dt_s = dt;
    tr.t_s.reserve(n_steps + 1);
    tr.freq_hz.reserve(n_steps + 1);
    tr.rocof_hz_s.reserve(n_steps + 1);
    tr.mech_mw.reserve(n_steps + 1);
    tr.load_fraction.reserve(n_steps + 1);
    tr.device_power_mw.resize(devices.size());
    tr.device_soc_mws.resize(devices.size());
    for (std::size_t i = 0; i < devices.size(); ++i) {
        tr.device_power_mw[i].reserve(n_steps + 1);
        tr.device_soc_mws[i].reserve(n_steps + 1);
    }

    const auto record = [&](double t, const std::vector<double>& held) {
        tr.t_s.push_back(t);
        tr.freq_hz.push_back(state.freq_hz);
        tr.rocof_hz_s.push_back(system_meas.rocof_hz_per_s);
        tr.mech_mw.push_back(state.mech_power_mw);
        tr.load_fraction.push_back(state.load_remaining_fraction);
        for (std::size_t i = 0; i < devices.size(); ++i) {
            tr.device_power_mw[i].push_back(held[i]);
            tr.device_soc_mws[i].push_back(devices[i].soc_mws);
        }
    };

    std::vector<double> held(devices.size(), 0.0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;

        measurement_update(system_meas, t, state.freq_hz, dt);
        for (StorageDevice& d : devices) {
            measurement_update(d.meas, t, state.freq_hz, dt);
        }

        // UFLS pickup timers run on the filtered system frequency; a stage
        // trips once and sheds a fraction of the remaining load.
        for (std::size_t i = 0; i < model.ufls.size(); ++i) {
            UflsRuntime& u = ufls_state[i];
            if (u.tripped) {
                continue;
            }
            if (system_meas.filtered_hz < model.ufls[i].threshold_hz) {
                u.below_s += dt;
                if (u.below_s + 1e-9 >= model.ufls[i].delay_s) {
                    u.tripped = true;
                    state.load_remaining_fraction *= 1.0 - model.ufls[i].shed_fraction;
                }
            } else {
                u.below_s = 0.0;
            }
        }

        double es_total_mw = 0.0;
        for (std::size_t i = 0; i < devices.size(); ++i) {
            held[i] = controller_update(devices[i], devices[i].meas, t, dt);
            es_total_mw += held[i];
        }

        const double loss_mw = (t + 1e-12 >= scenario.loss_time_s) ? scenario.loss_mw : 0.0;
        const double shed_mw = model.load_mw * (1.0 - state.load_remaining_fraction);
        const double net_injection_mw = es_total_mw + shed_mw - loss_mw;

        record(t, held);

        state = rk4_step(model, state, dt, [net_injection_mw](double) { return net_injection_mw; });
    }

    // Final row: measurement refresh plus a peek at what the controllers
    // would emit, without committing SoC or phase changes.
    const double t_end = static_cast<double>(n_steps) * dt;
    measurement_update(system_meas, t_end, state.freq_hz, dt);
    std::vector<double> peek(devices.size(), 0.0);
    for (std::size_t i = 0; i < devices.size(); ++i) {
        measurement_update(devices[i].meas, t_end, state.freq_hz, dt);
        StorageDevice scratch = devices[i];
        peek[i] = controller_update(scratch, scratch.meas, t_end, dt);
    }
    record(t_end, peek);

    return tr;
}

} // namespace gridfreq
