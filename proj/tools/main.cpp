#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gridfreq/csv.hpp"
#include "gridfreq/errors.hpp"
#include "gridfreq/metrics.hpp"
#include "gridfreq/scenario.hpp"
#include "gridfreq/simulate.hpp"
#include "gridfreq/svg.hpp"
#include "gridfreq/sweep.hpp"

namespace {

using namespace gridfreq;

struct RunArgs {
    std::string config_path;
    std::string preset;
    std::string control = "droop";
    std::string storage_kind = "hees";
    std::string out_dir = ".";
    bool plot = false;
};

Study resolve_study(const RunArgs& args, bool control_flags_used)
{
    if (!args.config_path.empty()) {
        if (control_flags_used) {
            throw ConfigError(
                "--control/--storage-kind apply to --preset runs; set controllers in the config file");
        }
        return load_config(args.config_path).study;
    }
    if (args.preset.empty()) {
        throw ConfigError("need either --config or --preset");
    }

    const PresetId id = preset_from_name(args.preset);
    Study study = make_preset(id);

    if (args.control == "none") {
        study.devices.clear();
    } else {
        for (StorageDevice& dev : study.devices) {
            if (args.control == "droop") {
                dev.controller = preset_droop_config(id);
            } else if (args.control == "step") {
                dev.controller = preset_step_config(id);
            } else {
                throw ConfigError("--control must be droop, step, or none");
            }
            if (args.storage_kind == "hees") {
                apply_storage_kind(dev, StorageKind::HEES);
            } else if (args.storage_kind == "hpes") {
                apply_storage_kind(dev, StorageKind::HPES);
            } else {
                throw ConfigError("--storage-kind must be hees or hpes");
            }
        }
    }
    return study;
}

void write_outputs(const std::string& out_dir, const Trace& trace, const Metrics& metrics,
                   bool plot)
{
    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/trace.csv", trace_csv(trace));
    write_file(out_dir + "/metrics.csv", metrics_csv(metrics));
    if (plot) {
        Series freq{"frequency", trace.t_s, trace.freq_hz};
        write_file(out_dir + "/trace.svg", svg_line_plot({freq}, "time [s]", "frequency [Hz]"));
    }
}

int cmd_run(const RunArgs& args, bool control_flags_used)
{
    const Study study = resolve_study(args, control_flags_used);
    const GridModel model = build_model(study.scenario, study.grid);
    const Trace trace = run_simulation(model, study.scenario, study.devices);
    const Metrics metrics = compute_metrics(trace);
    write_outputs(args.out_dir, trace, metrics, args.plot);

    std::printf("%s: nadir %.4f Hz at %.2f s, settling %.4f Hz, min ROCOF %.4f Hz/s\n",
                study.scenario.name.c_str(), metrics.nadir_hz, metrics.nadir_time_s,
                metrics.settling_hz, metrics.min_rocof_hz_per_s);
    if (metrics.has_two_nadirs()) {
        std::printf("  two nadirs: %.4f Hz at %.2f s, %.4f Hz at %.2f s\n",
                    *metrics.first_local_nadir_hz, *metrics.first_local_nadir_time_s,
                    *metrics.second_local_nadir_hz, *metrics.second_local_nadir_time_s);
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, bool plot)
{
    const LoadedStudy loaded = load_config(config_path);
    if (!loaded.sweep) {
        throw ConfigError("config has no sweep section");
    }

    const SweepResult result = loaded.sweep->kind == SweepKind::Capacity
        ? sweep_capacity(loaded.study, loaded.sweep->values)
        : sweep_duration(loaded.study, loaded.sweep->values);

    std::filesystem::create_directories(out_dir);
    write_file(out_dir + "/sweep.csv", sweep_csv(result));
    if (plot) {
        Series nadir{"nadir", {}, {}};
        Series nadir_time{"nadir time", {}, {}};
        for (const SweepPoint& p : result.points) {
            nadir.x.push_back(p.parameter);
            nadir.y.push_back(p.metrics.nadir_hz);
            nadir_time.x.push_back(p.parameter);
            nadir_time.y.push_back(p.metrics.nadir_time_s);
        }
        write_file(out_dir + "/sweep.svg",
                   svg_line_plot({nadir}, result.parameter_name, "nadir [Hz]"));
        write_file(out_dir + "/sweep_time.svg",
                   svg_line_plot({nadir_time}, result.parameter_name, "nadir time [s]"));
    }

    const SweepPoint& best = result.points[result.nadir_argmax];
    std::printf("sweep over %s: %zu points, best nadir %.4f Hz at %s=%g\n",
                result.parameter_name.c_str(), result.points.size(), best.metrics.nadir_hz,
                result.parameter_name.c_str(), best.parameter);
    return 0;
}

int cmd_preset_list()
{
    for (PresetId id : {PresetId::EI, PresetId::ERCOT}) {
        const Study st = make_preset(id);
        const StorageDevice& dev = st.devices.front();
        const auto& droop = std::get<DroopConfig>(dev.controller);
        const StepConfig step = preset_step_config(id);
        std::printf("%-6s load %.0f MW, loss %.0f MW at %.1f s, es p_max %.0f MW, e_max %.0f MW*s, "
                    "droop %.1f%%, step activation %.2f Hz, delay %.1f s, alpha %.2f\n",
                    preset_name(id), st.grid.load_mw, st.scenario.loss_mw,
                    st.scenario.loss_time_s, dev.p_max_mw, dev.e_max_mws,
                    droop.droop_ratio * 100.0, step.activation_hz, step.delay_s, step.alpha);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reduced-order grid frequency response simulator with energy storage control"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Simulate one scenario and write trace/metrics CSV");
    auto* opt_config = run->add_option("--config", run_args.config_path, "JSON config file");
    auto* opt_preset = run->add_option("--preset", run_args.preset, "Preset name: ei or ercot");
    opt_config->excludes(opt_preset);
    auto* opt_control =
        run->add_option("--control", run_args.control, "Controller: droop, step, or none");
    auto* opt_kind =
        run->add_option("--storage-kind", run_args.storage_kind, "Storage kind: hees or hpes");
    run->add_option("--out", run_args.out_dir, "Output directory");
    run->add_flag("--plot", run_args.plot, "Also write an SVG frequency plot");

    std::string sweep_config;
    std::string sweep_out = ".";
    bool sweep_plot = false;
    CLI::App* sweep = app.add_subcommand("sweep", "Run the sweep described in a config file");
    sweep->add_option("--config", sweep_config, "JSON config file with a sweep section")
        ->required();
    sweep->add_option("--out", sweep_out, "Output directory");
    sweep->add_flag("--plot", sweep_plot, "Also write SVG sweep curves");

    CLI::App* presets = app.add_subcommand("preset-list", "List built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed()) {
            const bool control_flags_used = opt_control->count() > 0 || opt_kind->count() > 0;
            return cmd_run(run_args, control_flags_used);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_config, sweep_out, sweep_plot);
        }
        if (presets->parsed()) {
            return cmd_preset_list();
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const SimulationError& e) {
        std::cerr << "simulation aborted: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
