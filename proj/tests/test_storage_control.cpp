#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "gridfreq/errors.hpp"
#include "gridfreq/metrics.hpp"
#include "gridfreq/scenario.hpp"
#include "gridfreq/simulate.hpp"
#include "gridfreq/storage.hpp"

using namespace gridfreq;

namespace {

// independent least-squares slope for cross-checking the estimator
double ls_slope_oracle(const std::vector<std::pair<double, double>>& samples)
{
    double st = 0.0;
    double sf = 0.0;
    for (const auto& [t, f] : samples) {
        st += t;
        sf += f;
    }
    const double n = static_cast<double>(samples.size());
    const double tm = st / n;
    const double fm = sf / n;
    double num = 0.0;
    double den = 0.0;
    for (const auto& [t, f] : samples) {
        num += (t - tm) * (f - fm);
        den += (t - tm) * (t - tm);
    }
    return num / den;
}

StorageDevice ei_device(std::variant<DroopConfig, StepConfig> controller)
{
    StorageDevice dev;
    dev.p_max_mw = 3100.0;
    dev.e_max_mws = 31000.0;
    dev.soc_mws = 31000.0;
    dev.kind = StorageKind::HPES;
    dev.controller = std::move(controller);
    dev.reset_runtime(60.0);
    return dev;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y)
{
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        sum += 0.5 * (y[i] + y[i + 1]) * (t[i + 1] - t[i]);
    }
    return sum;
}

} // namespace

TEST_CASE("low-pass filter")
{
    Measurement meas;
    meas.t_filter_s = 0.5;
    meas.reset(60.0);

    SUBCASE("constant input at the state is a fixed point")
    {
        const double before = meas.filtered_hz;
        filter_frequency(meas, 60.0, 0.01);
        CHECK(meas.filtered_hz == before);
    }

    SUBCASE("unit step reaches 1 - 1/e after one time constant, within 1%")
    {
        meas.reset(0.0);
        for (int i = 0; i < 50; ++i) {
            filter_frequency(meas, 1.0, 0.01); // 0.5 s total
        }
        CHECK(std::abs(meas.filtered_hz - (1.0 - std::exp(-1.0))) < 0.01);
    }

    SUBCASE("ramp input settles to a lag of slope * T1")
    {
        meas.reset(0.0);
        const double slope = 2.0;
        const double dt = 0.001;
        double u = 0.0;
        for (int i = 1; i <= 10000; ++i) {
            u = slope * static_cast<double>(i) * dt;
            filter_frequency(meas, u, dt);
        }
        const double lag = u - meas.filtered_hz;
        CHECK(lag == doctest::Approx(slope * meas.t_filter_s).epsilon(0.01));
    }

    SUBCASE("non-finite input rejected")
    {
        CHECK_THROWS_AS(filter_frequency(meas, std::nan(""), 0.01), NumericError);
    }
}

TEST_CASE("rocof estimation")
{
    Measurement meas;
    meas.window_s = 0.25;
    meas.reset(60.0);

    SUBCASE("exact slope of a line")
    {
        for (int i = 0; i <= 25; ++i) {
            const double t = 0.01 * i;
            meas.history.emplace_back(t, 60.0 - 0.2 * t);
        }
        CHECK(estimate_rocof(meas) == doctest::Approx(-0.2).epsilon(1e-12));
    }

    SUBCASE("constant frequency gives zero")
    {
        for (int i = 0; i <= 25; ++i) {
            meas.history.emplace_back(0.01 * i, 60.0);
        }
        CHECK(estimate_rocof(meas) == 0.0);
    }

    SUBCASE("alternating noise stays near the underlying slope and matches the oracle")
    {
        std::vector<std::pair<double, double>> samples;
        for (int i = 0; i <= 25; ++i) {
            const double t = 0.01 * i;
            const double noise = (i % 2 == 0) ? 1e-3 : -1e-3;
            samples.emplace_back(t, 60.0 - 0.2 * t + noise);
            meas.history.emplace_back(samples.back());
        }
        const double est = estimate_rocof(meas);
        CHECK(est == doctest::Approx(ls_slope_oracle(samples)).epsilon(1e-12));
        CHECK(std::abs(est - (-0.2)) < 0.01);
    }

    SUBCASE("short window warms up to zero")
    {
        meas.history.emplace_back(0.00, 60.0);
        meas.history.emplace_back(0.01, 59.9);
        CHECK(estimate_rocof(meas) == 0.0);
    }

    SUBCASE("degenerate window throws")
    {
        meas.history.emplace_back(1.0, 60.0);
        meas.history.emplace_back(1.0, 59.9);
        CHECK_THROWS_AS(estimate_rocof(meas), NumericError);
    }

    SUBCASE("measurement_update flags warm-up then clears it")
    {
        Measurement m2;
        m2.window_s = 0.25;
        m2.reset(60.0);
        for (int i = 0; i <= 200; ++i) {
            measurement_update(m2, 0.01 * i, 60.0 - 0.2 * 0.01 * i, 0.01);
            if (0.01 * i < 0.25) {
                CHECK(m2.warming_up);
                CHECK(m2.rocof_hz_per_s == 0.0);
            }
        }
        CHECK_FALSE(m2.warming_up);
        // after several filter time constants the filtered slope tracks the ramp
        CHECK(m2.rocof_hz_per_s == doctest::Approx(-0.2).epsilon(0.02));
    }
}

TEST_CASE("droop command")
{
    DroopConfig cfg;
    cfg.droop_ratio = 0.025;
    StorageDevice dev = ei_device(cfg);

    SUBCASE("no deviation, no output")
    {
        CHECK(droop_command(cfg, dev, 60.0, 60.0) == 0.0);
    }

    SUBCASE("EI table numbers: 0.15 Hz deviation gives 310 MW")
    {
        const double p = droop_command(cfg, dev, 60.0, 59.85);
        CHECK(p == doctest::Approx((0.15 / 1.5) * 3100.0).epsilon(1e-9));
    }

    SUBCASE("saturates at the converter limit")
    {
        CHECK(droop_command(cfg, dev, 60.0, 57.0) == 3100.0);
    }

    SUBCASE("deadband boundary and monotonicity")
    {
        cfg.deadband_hz = 0.05;
        CHECK(droop_command(cfg, dev, 60.0, 59.95) == 0.0);
        CHECK(droop_command(cfg, dev, 60.0, 59.9499) > 0.0);

        std::mt19937 rng(7);
        std::uniform_real_distribution<double> freq(57.0, 61.0);
        for (int i = 0; i < 500; ++i) {
            const double a = freq(rng);
            const double b = freq(rng);
            const double pa = droop_command(cfg, dev, 60.0, a);
            const double pb = droop_command(cfg, dev, 60.0, b);
            if (a < b) {
                CHECK(pa >= pb); // non-increasing in filtered frequency
            }
            CHECK(pa >= 0.0);
            CHECK(pa <= dev.p_max_mw);
            CHECK((pa > 0.0) == (a < 60.0 - cfg.deadband_hz));
        }
    }
}

TEST_CASE("step magnitude")
{
    StepConfig cfg;
    cfg.alpha = 0.85;
    cfg.assumed_inertia_s = 1.0;
    cfg.assumed_capacity_mva = 560000.0;

    SUBCASE("zero rocof, zero power")
    {
        CHECK(step_magnitude(cfg, 0.0, 60.0) == 0.0);
    }

    SUBCASE("EI numbers, pre-clamp")
    {
        const double p = step_magnitude(cfg, -0.24107, 60.0);
        CHECK(p == doctest::Approx(0.85 * 2.0 * 1.0 * (0.24107 / 60.0) * 560000.0).epsilon(1e-12));
        CHECK(p == doctest::Approx(3824.9773333333333).epsilon(1e-9));
    }

    SUBCASE("doubled inertia belief doubles the command")
    {
        StepConfig wrong = cfg;
        wrong.assumed_inertia_s = 2.0;
        const double p_true = step_magnitude(cfg, -0.2, 60.0);
        const double p_wrong = step_magnitude(wrong, -0.2, 60.0);
        CHECK(p_wrong / p_true == doctest::Approx(2.0).epsilon(1e-12));
    }

    SUBCASE("override supersedes the formula")
    {
        cfg.override_power_mw = 1234.0;
        CHECK(step_magnitude(cfg, -0.2, 60.0) == 1234.0);
    }

    SUBCASE("non-finite rocof rejected")
    {
        CHECK_THROWS_AS(step_magnitude(cfg, std::nan(""), 60.0), NumericError);
    }
}

TEST_CASE("step controller state machine")
{
    StepConfig cfg;
    cfg.activation_hz = 59.85;
    cfg.delay_s = 0.5;
    cfg.assumed_inertia_s = 1.0;
    cfg.assumed_capacity_mva = 560000.0;

    const double dt = 0.01;

    SUBCASE("never crossing the threshold keeps it armed with zero output")
    {
        StorageDevice dev = ei_device(cfg);
        for (int i = 0; i < 500; ++i) {
            measurement_update(dev.meas, i * dt, 59.9, dt);
            CHECK(controller_update(dev, dev.meas, i * dt, dt) == 0.0);
        }
        CHECK(dev.phase == StepPhase::Armed);
        CHECK(dev.soc_mws == dev.e_max_mws);
    }

    SUBCASE("declining frequency arms, confirms, then goes active")
    {
        StorageDevice dev = ei_device(cfg);
        bool saw_confirming = false;
        double first_active_t = -1.0;
        for (int i = 0; i < 700; ++i) {
            const double t = i * dt;
            measurement_update(dev.meas, t, 60.0 - 0.24 * t, dt);
            const double p = controller_update(dev, dev.meas, t, dt);
            if (dev.phase == StepPhase::Confirming) {
                saw_confirming = true;
                CHECK(p == 0.0);
            }
            if (dev.phase == StepPhase::Active && first_active_t < 0.0) {
                first_active_t = t;
                CHECK(p > 0.0);
                CHECK(p <= dev.p_max_mw);
            }
        }
        CHECK(saw_confirming);
        CHECK(first_active_t > 0.5); // at least the confirmation delay after arming
        CHECK(dev.p_step_mw > 0.0);
    }

    SUBCASE("recovered frequency at confirmation re-arms")
    {
        StorageDevice dev = ei_device(cfg);
        // dip below the threshold, then recover so the windowed slope is positive
        for (int i = 0; i < 200; ++i) {
            const double t = i * dt;
            const double f = (i < 30) ? 59.80 : 60.0;
            measurement_update(dev.meas, t, f, dt);
            const double p = controller_update(dev, dev.meas, t, dt);
            CHECK(p == 0.0);
        }
        CHECK(dev.phase == StepPhase::Armed);
    }

    SUBCASE("HPES with e_max = P*10s exhausts after exactly 10 s of active time")
    {
        StepConfig fixed = cfg;
        fixed.override_power_mw = 1000.0;
        StorageDevice dev = ei_device(fixed);
        dev.e_max_mws = 10000.0; // 1000 MW for 10 s
        dev.soc_mws = dev.e_max_mws;

        int active_steps = 0;
        for (int i = 0; i < 3000; ++i) {
            const double t = i * dt;
            measurement_update(dev.meas, t, 60.0 - 0.24 * t, dt);
            const double p = controller_update(dev, dev.meas, t, dt);
            if (p > 0.0) {
                ++active_steps;
                CHECK(p == 1000.0);
            } else if (dev.phase == StepPhase::Exhausted) {
                CHECK(dev.soc_mws == 0.0);
            }
        }
        CHECK(active_steps == 1000); // exactly 10 s at dt = 0.01
        CHECK(dev.phase == StepPhase::Exhausted);
        CHECK(dev.soc_mws == 0.0);
    }
}

TEST_CASE("phase sequence is monotone apart from the re-arm")
{
    Study st = make_preset(PresetId::EI);
    StorageDevice dev = st.devices.front();
    dev.controller = preset_step_config(PresetId::EI);
    auto& cfg = std::get<StepConfig>(dev.controller);
    cfg.assumed_inertia_s = 2.8;
    cfg.assumed_capacity_mva = 560000.0;
    dev.reset_runtime(60.0);

    const double dt = 0.01;
    StepPhase prev = StepPhase::Armed;
    for (int i = 0; i < 6000; ++i) {
        const double t = i * dt;
        const double f = 60.0 - std::min(0.3, std::max(0.0, 0.1 * (t - 1.0)));
        measurement_update(dev.meas, t, f, dt);
        controller_update(dev, dev.meas, t, dt);
        const StepPhase cur = dev.phase;
        const bool forward = static_cast<int>(cur) >= static_cast<int>(prev);
        const bool rearm = prev == StepPhase::Confirming && cur == StepPhase::Armed;
        CHECK((forward || rearm));
        prev = cur;
    }
}

TEST_CASE("energy accounting on full simulations")
{
    SUBCASE("droop HPES drains, never exceeds limits, and stops at empty")
    {
        Study st = make_preset(PresetId::ERCOT);
        StorageDevice dev = st.devices.front(); // droop, HPES table values
        dev.e_max_mws = 2000.0;
        dev.soc_mws = 2000.0;
        const GridModel model = build_model(st.scenario, st.grid);
        const Trace tr = run_simulation(model, st.scenario, {dev});

        for (std::size_t i = 0; i < tr.rows(); ++i) {
            CHECK(tr.device_power_mw[0][i] >= 0.0);
            CHECK(tr.device_power_mw[0][i] <= dev.p_max_mw);
            CHECK(tr.device_soc_mws[0][i] >= 0.0);
            CHECK(tr.device_soc_mws[0][i] <= dev.e_max_mws);
        }
        CHECK(trapezoid(tr.t_s, tr.device_power_mw[0]) <= dev.e_max_mws * (1.0 + 1e-6));
        CHECK(tr.device_soc_mws[0].back() == 0.0);
        CHECK(tr.device_power_mw[0].back() == 0.0);
    }

    SUBCASE("HEES step device never exhausts within the study window")
    {
        Study st = make_preset(PresetId::EI);
        StorageDevice dev = st.devices.front();
        dev.controller = preset_step_config(PresetId::EI);
        apply_storage_kind(dev, StorageKind::HEES);
        CHECK(dev.e_max_mws == dev.p_max_mw * kHeesHorizonS);

        const GridModel model = build_model(st.scenario, st.grid);
        const Trace tr = run_simulation(model, st.scenario, {dev});
        CHECK(tr.device_soc_mws[0].back() > 0.0);
        // output still flowing at the end of the hour-scale device
        CHECK(tr.device_power_mw[0].back() > 0.0);
        CHECK(trapezoid(tr.t_s, tr.device_power_mw[0]) <= dev.e_max_mws * (1.0 + 1e-6));
    }

    SUBCASE("step HPES exhausts and produces the withdrawal")
    {
        Study st = make_preset(PresetId::EI);
        StorageDevice dev = st.devices.front();
        dev.controller = preset_step_config(PresetId::EI);
        const GridModel model = build_model(st.scenario, st.grid);
        const Trace tr = run_simulation(model, st.scenario, {dev});

        CHECK(tr.device_soc_mws[0].back() == 0.0);
        CHECK(trapezoid(tr.t_s, tr.device_power_mw[0]) <= dev.e_max_mws * (1.0 + 1e-6));
        // power drops to zero after exhaustion
        CHECK(tr.device_power_mw[0].back() == 0.0);
    }
}

TEST_CASE("device validation")
{
    StorageDevice dev = ei_device(DroopConfig{});
    CHECK_NOTHROW(dev.validate());

    StorageDevice bad = dev;
    bad.soc_mws = bad.e_max_mws + 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = dev;
    bad.p_max_mw = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    StepConfig cfg;
    cfg.alpha = 1.5;
    bad = dev;
    bad.controller = cfg;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
