#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridfreq/grid.hpp"
#include "gridfreq/storage.hpp"

namespace gridfreq {

enum class PresetId { EI, ERCOT, Custom };

struct Scenario {
    std::string name = "custom";
    PresetId preset = PresetId::Custom;
    double pv_fraction = 0.0;
    double wind_fraction = 0.0;
    double loss_mw = 0.0;     ///< contingency magnitude, applied as a step loss
    double loss_time_s = 1.0;
    double dt_s = 0.01;
    double duration_s = 60.0;
    bool ufls_enabled = false;

    void validate() const;
};

/// Pre-derating description of the interconnection. build_model applies the
/// renewable shares: renewables contribute no inertia, no headroom, no response.
struct GridDefaults {
    double f_nominal_hz = 60.0;
    double load_mw = 0.0;
    double capacity_mva = 0.0;       ///< 0 = same as load_mw
    double h_base_s = 14.0;          ///< inertia at zero renewables
    double damping_pu_per_hz = 0.0;
    double responsive_fraction = 1.0; ///< governor-responsive share of capacity
    double governor_droop_pu = 0.05;
    double t_governor_s = 0.2;
    double t_reheat_s = 6.0;
    double hp_fraction = 0.5;
    double headroom_fraction = 0.2;  ///< of the derated responsive capacity
    std::vector<UflsStage> ufls_stages;
};

std::vector<UflsStage> default_ufls_stages();

/// Derate by the synchronous share s = 1 - pv - wind: inertia = h_base * s,
/// responsive capacity scales by s. Throws ScenarioError when s <= 0.
GridModel build_model(const Scenario& scenario, const GridDefaults& defaults);

/// A runnable bundle: scenario, base grid numbers, and the storage fleet.
struct Study {
    Scenario scenario;
    GridDefaults grid;
    std::vector<StorageDevice> devices;
};

Study make_preset(PresetId id);
PresetId preset_from_name(const std::string& name); // "ei" / "ercot", case-insensitive
const char* preset_name(PresetId id);
DroopConfig preset_droop_config(PresetId id);
StepConfig preset_step_config(PresetId id);

/// Effective energy horizon for HEES devices: one hour at rated power.
constexpr double kHeesHorizonS = 3600.0;

/// HEES resizes the energy capacity to the HEES horizon; HPES keeps e_max as is.
void apply_storage_kind(StorageDevice& device, StorageKind kind);

enum class SweepKind { Capacity, Duration };

struct SweepSpec {
    SweepKind kind = SweepKind::Capacity;
    std::vector<double> values;
};

struct LoadedStudy {
    Study study;
    std::optional<SweepSpec> sweep;
};

/// Strict-schema JSON config: unknown keys are rejected and all invariants are
/// checked at load time. Keys mirror the model fields without unit suffixes;
/// units are fixed (MW, MW*s, Hz, s).
LoadedStudy parse_config(const std::string& json_text);
LoadedStudy load_config(const std::string& path);

/// Normalized full-form config; load(serialize(x)) == x and a second
/// serialize is byte-identical.
std::string serialize_config(const LoadedStudy& loaded);

} // namespace gridfreq
