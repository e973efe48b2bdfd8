#include "gridfreq/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "gridfreq/errors.hpp"

namespace gridfreq {

using njson = nlohmann::ordered_json;

void Scenario::validate() const
{
    const auto fail = [](const std::string& msg) { throw ScenarioError("scenario: " + msg); };
    if (!(pv_fraction >= 0.0 && pv_fraction < 1.0)) {
        fail("pv_fraction must be in [0,1)");
    }
    if (!(wind_fraction >= 0.0 && wind_fraction < 1.0)) {
        fail("wind_fraction must be in [0,1)");
    }
    if (!(pv_fraction + wind_fraction < 1.0)) {
        fail("pv_fraction + wind_fraction must stay below 1");
    }
    if (!(loss_mw >= 0.0) || !std::isfinite(loss_mw)) {
        fail("loss_mw must be >= 0");
    }
    if (!(loss_time_s >= 0.0)) {
        fail("loss_time_s must be >= 0");
    }
    if (!(dt_s > 0.0)) {
        fail("dt_s must be > 0");
    }
    if (!(duration_s > loss_time_s)) {
        fail("duration_s must exceed loss_time_s");
    }
}

std::vector<UflsStage> default_ufls_stages()
{
    return {{59.3, 0.05, 0.1}, {58.9, 0.10, 0.1}, {58.5, 0.10, 0.1}};
}

GridModel build_model(const Scenario& scenario, const GridDefaults& defaults)
{
    scenario.validate();
    const double sync_share = 1.0 - scenario.pv_fraction - scenario.wind_fraction;
    if (sync_share <= 0.0) {
        throw ScenarioError("invalid scenario: renewable shares leave no synchronous generation");
    }

    GridModel m;
    m.f_nominal_hz = defaults.f_nominal_hz;
    m.load_mw = defaults.load_mw;
    m.capacity_mva = defaults.capacity_mva > 0.0 ? defaults.capacity_mva : defaults.load_mw;
    m.inertia_s = defaults.h_base_s * sync_share;
    m.damping_pu_per_hz = defaults.damping_pu_per_hz;

    m.governor.responsive_mva = m.capacity_mva * defaults.responsive_fraction * sync_share;
    m.governor.droop_pu = defaults.governor_droop_pu;
    m.governor.t_governor_s = defaults.t_governor_s;
    m.governor.t_reheat_s = defaults.t_reheat_s;
    m.governor.hp_fraction = defaults.hp_fraction;
    m.governor.headroom_mw = defaults.headroom_fraction * m.governor.responsive_mva;

    if (scenario.ufls_enabled) {
        m.ufls = defaults.ufls_stages.empty() ? default_ufls_stages() : defaults.ufls_stages;
    }

    m.validate();
    return m;
}

const char* preset_name(PresetId id)
{
    switch (id) {
    case PresetId::EI:
        return "ei";
    case PresetId::ERCOT:
        return "ercot";
    case PresetId::Custom:
        break;
    }
    return "custom";
}

PresetId preset_from_name(const std::string& name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "ei") {
        return PresetId::EI;
    }
    if (lower == "ercot") {
        return PresetId::ERCOT;
    }
    throw ConfigError("unknown preset '" + name + "' (expected 'ei' or 'ercot')");
}

DroopConfig preset_droop_config(PresetId id)
{
    DroopConfig c;
    c.droop_ratio = id == PresetId::ERCOT ? 0.05 : 0.025;
    c.t_filter_s = 0.5;
    c.deadband_hz = 0.0;
    return c;
}

StepConfig preset_step_config(PresetId id)
{
    StepConfig c;
    c.alpha = 0.85;
    c.activation_hz = id == PresetId::ERCOT ? 59.55 : 59.85;
    c.delay_s = 0.5;
    c.t_filter_s = 0.5;
    return c;
}

Study make_preset(PresetId id)
{
    if (id == PresetId::Custom) {
        throw ConfigError("no preset named 'custom'");
    }

    Study st;
    st.scenario.preset = id;
    st.scenario.pv_fraction = 0.65;
    st.scenario.wind_fraction = 0.15;
    st.scenario.loss_time_s = 1.0;
    st.scenario.dt_s = 0.01;
    st.scenario.duration_s = 60.0;
    st.scenario.ufls_enabled = false;

    st.grid.f_nominal_hz = 60.0;
    st.grid.h_base_s = 14.0;
    st.grid.damping_pu_per_hz = 0.0;
    st.grid.ufls_stages = default_ufls_stages();

    StorageDevice dev;
    dev.kind = StorageKind::HPES;
    dev.controller = preset_droop_config(id);

    if (id == PresetId::EI) {
        st.scenario.name = "ei";
        st.grid.load_mw = 560000.0;
        st.grid.responsive_fraction = 0.4;
        st.scenario.loss_mw = 4500.0;
        dev.p_max_mw = 3100.0;
        dev.e_max_mws = 31000.0;
    } else {
        st.scenario.name = "ercot";
        st.grid.load_mw = 75000.0;
        st.grid.responsive_fraction = 1.0;
        st.scenario.loss_mw = 2750.0;
        dev.p_max_mw = 2630.0;
        dev.e_max_mws = 26300.0;
    }
    dev.soc_mws = dev.e_max_mws;
    st.devices.push_back(dev);
    return st;
}

void apply_storage_kind(StorageDevice& device, StorageKind kind)
{
    device.kind = kind;
    if (kind == StorageKind::HEES) {
        device.e_max_mws = device.p_max_mw * kHeesHorizonS;
        device.soc_mws = device.e_max_mws;
    } else if (device.soc_mws > device.e_max_mws) {
        device.soc_mws = device.e_max_mws;
    }
}

// ---------------------------------------------------------------------------
// JSON configuration
// ---------------------------------------------------------------------------

namespace {

void check_keys(const njson& obj, const char* section, std::initializer_list<const char*> allowed)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("unknown key '" + it.key() + "' in " + section);
        }
    }
}

double num_or(const njson& obj, const char* key, double fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    const njson& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(std::string("key '") + key + "' must be a number");
    }
    return v.get<double>();
}

double num_required(const njson& obj, const char* key, const char* section)
{
    if (!obj.contains(key)) {
        throw ConfigError(std::string("missing required key '") + key + "' in " + section);
    }
    return num_or(obj, key, 0.0);
}

bool bool_or(const njson& obj, const char* key, bool fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    const njson& v = obj.at(key);
    if (!v.is_boolean()) {
        throw ConfigError(std::string("key '") + key + "' must be a boolean");
    }
    return v.get<bool>();
}

std::string string_or(const njson& obj, const char* key, const std::string& fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    const njson& v = obj.at(key);
    if (!v.is_string()) {
        throw ConfigError(std::string("key '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void apply_scenario_section(const njson& j, Scenario& sc)
{
    check_keys(j, "scenario", {"pv_fraction", "wind_fraction", "loss", "loss_time", "dt",
                               "duration", "ufls_enabled"});
    sc.pv_fraction = num_or(j, "pv_fraction", sc.pv_fraction);
    sc.wind_fraction = num_or(j, "wind_fraction", sc.wind_fraction);
    sc.loss_mw = num_or(j, "loss", sc.loss_mw);
    sc.loss_time_s = num_or(j, "loss_time", sc.loss_time_s);
    sc.dt_s = num_or(j, "dt", sc.dt_s);
    sc.duration_s = num_or(j, "duration", sc.duration_s);
    sc.ufls_enabled = bool_or(j, "ufls_enabled", sc.ufls_enabled);
}

void apply_grid_section(const njson& j, GridDefaults& gd)
{
    check_keys(j, "grid", {"f_nominal", "load", "capacity", "h_base", "damping", "governor",
                           "ufls_stages"});
    gd.f_nominal_hz = num_or(j, "f_nominal", gd.f_nominal_hz);
    gd.load_mw = num_or(j, "load", gd.load_mw);
    gd.capacity_mva = num_or(j, "capacity", gd.capacity_mva);
    gd.h_base_s = num_or(j, "h_base", gd.h_base_s);
    gd.damping_pu_per_hz = num_or(j, "damping", gd.damping_pu_per_hz);

    if (j.contains("governor")) {
        const njson& g = j.at("governor");
        check_keys(g, "grid.governor", {"droop", "t_governor", "t_reheat", "hp_fraction",
                                        "headroom_fraction", "responsive_fraction"});
        gd.governor_droop_pu = num_or(g, "droop", gd.governor_droop_pu);
        gd.t_governor_s = num_or(g, "t_governor", gd.t_governor_s);
        gd.t_reheat_s = num_or(g, "t_reheat", gd.t_reheat_s);
        gd.hp_fraction = num_or(g, "hp_fraction", gd.hp_fraction);
        gd.headroom_fraction = num_or(g, "headroom_fraction", gd.headroom_fraction);
        gd.responsive_fraction = num_or(g, "responsive_fraction", gd.responsive_fraction);
    }

    if (j.contains("ufls_stages")) {
        const njson& stages = j.at("ufls_stages");
        if (!stages.is_array()) {
            throw ConfigError("ufls_stages must be an array");
        }
        gd.ufls_stages.clear();
        for (const njson& s : stages) {
            check_keys(s, "ufls_stages[]", {"threshold", "shed_fraction", "delay"});
            UflsStage stage;
            stage.threshold_hz = num_required(s, "threshold", "ufls_stages[]");
            stage.shed_fraction = num_required(s, "shed_fraction", "ufls_stages[]");
            stage.delay_s = num_or(s, "delay", 0.1);
            gd.ufls_stages.push_back(stage);
        }
    }
}

StorageDevice parse_device(const njson& j, std::size_t index)
{
    const std::string section = "devices[" + std::to_string(index) + "]";
    const std::string control = lower(string_or(j, "control", "droop"));

    std::vector<const char*> allowed = {"name", "p_max", "e_max", "soc",
                                        "kind", "control", "rocof_window", "t_filter"};
    if (control == "droop") {
        allowed.insert(allowed.end(), {"droop_ratio", "deadband"});
    } else if (control == "step") {
        allowed.insert(allowed.end(), {"alpha", "activation", "delay", "assumed_inertia",
                                       "assumed_capacity", "override_power"});
    } else {
        throw ConfigError(section + ": control must be 'droop' or 'step'");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(allowed.begin(), allowed.end(),
                         [&](const char* k) { return it.key() == k; })) {
            throw ConfigError("unknown key '" + it.key() + "' in " + section);
        }
    }

    StorageDevice dev;
    dev.name = string_or(j, "name", "es" + std::to_string(index));
    dev.p_max_mw = num_required(j, "p_max", section.c_str());

    const std::string kind = lower(string_or(j, "kind", "hpes"));
    if (kind == "hees") {
        dev.kind = StorageKind::HEES;
        dev.e_max_mws = num_or(j, "e_max", dev.p_max_mw * kHeesHorizonS);
    } else if (kind == "hpes") {
        dev.kind = StorageKind::HPES;
        dev.e_max_mws = num_required(j, "e_max", section.c_str());
    } else {
        throw ConfigError(section + ": kind must be 'hees' or 'hpes'");
    }
    dev.soc_mws = num_or(j, "soc", dev.e_max_mws);
    dev.rocof_window_s = num_or(j, "rocof_window", dev.rocof_window_s);

    if (control == "droop") {
        DroopConfig c;
        c.droop_ratio = num_or(j, "droop_ratio", c.droop_ratio);
        c.t_filter_s = num_or(j, "t_filter", c.t_filter_s);
        c.deadband_hz = num_or(j, "deadband", c.deadband_hz);
        dev.controller = c;
    } else {
        StepConfig c;
        c.alpha = num_or(j, "alpha", c.alpha);
        c.activation_hz = num_or(j, "activation", c.activation_hz);
        c.delay_s = num_or(j, "delay", c.delay_s);
        c.assumed_inertia_s = num_or(j, "assumed_inertia", c.assumed_inertia_s);
        c.assumed_capacity_mva = num_or(j, "assumed_capacity", c.assumed_capacity_mva);
        c.t_filter_s = num_or(j, "t_filter", c.t_filter_s);
        if (j.contains("override_power")) {
            c.override_power_mw = num_or(j, "override_power", 0.0);
        }
        dev.controller = c;
    }
    dev.validate();
    return dev;
}

} // namespace

LoadedStudy parse_config(const std::string& json_text)
{
    njson j;
    try {
        j = njson::parse(json_text);
    } catch (const njson::parse_error& e) {
        std::size_t line = 1;
        const std::size_t stop = std::min(json_text.size(), static_cast<std::size_t>(e.byte));
        for (std::size_t i = 0; i < stop; ++i) {
            if (json_text[i] == '\n') {
                ++line;
            }
        }
        throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }
    check_keys(j, "config", {"name", "preset", "scenario", "grid", "devices", "sweep"});

    LoadedStudy loaded;
    if (j.contains("preset")) {
        loaded.study = make_preset(preset_from_name(string_or(j, "preset", "")));
    }
    Study& st = loaded.study;

    st.scenario.name = string_or(j, "name", st.scenario.name);
    if (j.contains("scenario")) {
        apply_scenario_section(j.at("scenario"), st.scenario);
    }
    if (j.contains("grid")) {
        apply_grid_section(j.at("grid"), st.grid);
    }
    if (j.contains("devices")) {
        const njson& devs = j.at("devices");
        if (!devs.is_array()) {
            throw ConfigError("devices must be an array");
        }
        st.devices.clear();
        for (std::size_t i = 0; i < devs.size(); ++i) {
            st.devices.push_back(parse_device(devs[i], i));
        }
    }
    if (j.contains("sweep")) {
        const njson& sw = j.at("sweep");
        check_keys(sw, "sweep", {"type", "values"});
        SweepSpec spec;
        const std::string type = lower(string_or(sw, "type", ""));
        if (type == "capacity") {
            spec.kind = SweepKind::Capacity;
        } else if (type == "duration") {
            spec.kind = SweepKind::Duration;
        } else {
            throw ConfigError("sweep.type must be 'capacity' or 'duration'");
        }
        if (!sw.contains("values") || !sw.at("values").is_array() || sw.at("values").empty()) {
            throw ConfigError("sweep.values must be a non-empty array of numbers");
        }
        for (const njson& v : sw.at("values")) {
            if (!v.is_number()) {
                throw ConfigError("sweep.values must contain numbers only");
            }
            spec.values.push_back(v.get<double>());
        }
        loaded.sweep = std::move(spec);
    }

    // Invariants are all checked at load time; this also surfaces an
    // impossible penetration (synchronous share <= 0).
    st.scenario.validate();
    if (st.grid.load_mw <= 0.0) {
        throw ConfigError("grid.load must be > 0 (set a preset or a grid section)");
    }
    (void)build_model(st.scenario, st.grid);
    for (const StorageDevice& d : st.devices) {
        d.validate();
    }
    return loaded;
}

LoadedStudy load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("config file not found: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const LoadedStudy& loaded)
{
    const Study& st = loaded.study;
    njson j;
    j["name"] = st.scenario.name;
    if (st.scenario.preset != PresetId::Custom) {
        j["preset"] = preset_name(st.scenario.preset);
    }

    njson sc;
    sc["pv_fraction"] = st.scenario.pv_fraction;
    sc["wind_fraction"] = st.scenario.wind_fraction;
    sc["loss"] = st.scenario.loss_mw;
    sc["loss_time"] = st.scenario.loss_time_s;
    sc["dt"] = st.scenario.dt_s;
    sc["duration"] = st.scenario.duration_s;
    sc["ufls_enabled"] = st.scenario.ufls_enabled;
    j["scenario"] = sc;

    njson grid;
    grid["f_nominal"] = st.grid.f_nominal_hz;
    grid["load"] = st.grid.load_mw;
    grid["capacity"] = st.grid.capacity_mva;
    grid["h_base"] = st.grid.h_base_s;
    grid["damping"] = st.grid.damping_pu_per_hz;
    njson gov;
    gov["droop"] = st.grid.governor_droop_pu;
    gov["t_governor"] = st.grid.t_governor_s;
    gov["t_reheat"] = st.grid.t_reheat_s;
    gov["hp_fraction"] = st.grid.hp_fraction;
    gov["headroom_fraction"] = st.grid.headroom_fraction;
    gov["responsive_fraction"] = st.grid.responsive_fraction;
    grid["governor"] = gov;
    njson stages = njson::array();
    for (const UflsStage& s : st.grid.ufls_stages) {
        njson stage;
        stage["threshold"] = s.threshold_hz;
        stage["shed_fraction"] = s.shed_fraction;
        stage["delay"] = s.delay_s;
        stages.push_back(stage);
    }
    grid["ufls_stages"] = stages;
    j["grid"] = grid;

    njson devs = njson::array();
    for (const StorageDevice& d : st.devices) {
        njson dev;
        dev["name"] = d.name;
        dev["p_max"] = d.p_max_mw;
        dev["e_max"] = d.e_max_mws;
        dev["soc"] = d.soc_mws;
        dev["kind"] = d.kind == StorageKind::HEES ? "hees" : "hpes";
        dev["rocof_window"] = d.rocof_window_s;
        if (const auto* droop = std::get_if<DroopConfig>(&d.controller)) {
            dev["control"] = "droop";
            dev["droop_ratio"] = droop->droop_ratio;
            dev["t_filter"] = droop->t_filter_s;
            dev["deadband"] = droop->deadband_hz;
        } else {
            const auto& step = std::get<StepConfig>(d.controller);
            dev["control"] = "step";
            dev["alpha"] = step.alpha;
            dev["activation"] = step.activation_hz;
            dev["delay"] = step.delay_s;
            dev["assumed_inertia"] = step.assumed_inertia_s;
            dev["assumed_capacity"] = step.assumed_capacity_mva;
            dev["t_filter"] = step.t_filter_s;
            if (step.override_power_mw) {
                dev["override_power"] = *step.override_power_mw;
            }
        }
        devs.push_back(dev);
    }
    j["devices"] = devs;

    if (loaded.sweep) {
        njson sw;
        sw["type"] = loaded.sweep->kind == SweepKind::Capacity ? "capacity" : "duration";
        sw["values"] = loaded.sweep->values;
        j["sweep"] = sw;
    }
    return j.dump(2) + "\n";
}

} // namespace gridfreq
