#include "gridfreq/csv.hpp"

#include <cstdio>
#include <fstream>

#include "gridfreq/errors.hpp"

namespace gridfreq {

namespace {

void append_num(std::string& out, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    out += buf;
}

void append_opt(std::string& out, const std::optional<double>& v)
{
    if (v) {
        append_num(out, *v);
    }
}

} // namespace

std::string trace_csv(const Trace& trace)
{
    std::string out = "t_s,freq_hz,rocof_hz_s,es_power_mw,es_soc_mws,mech_mw,load_fraction\n";
    for (std::size_t i = 0; i < trace.rows(); ++i) {
        append_num(out, trace.t_s[i]);
        out += ',';
        append_num(out, trace.freq_hz[i]);
        out += ',';
        append_num(out, trace.rocof_hz_s[i]);
        out += ',';
        append_num(out, trace.total_power_mw(i));
        out += ',';
        append_num(out, trace.total_soc_mws(i));
        out += ',';
        append_num(out, trace.mech_mw[i]);
        out += ',';
        append_num(out, trace.load_fraction[i]);
        out += '\n';
    }
    return out;
}

std::string metrics_csv(const Metrics& m)
{
    std::string out =
        "nadir_hz,nadir_time_s,first_nadir_hz,first_nadir_time_s,second_nadir_hz,"
        "second_nadir_time_s,settling_hz,min_rocof_hz_s,energy_used_mws,peak_power_mw,"
        "ufls_triggered\n";
    append_num(out, m.nadir_hz);
    out += ',';
    append_num(out, m.nadir_time_s);
    out += ',';
    append_opt(out, m.first_local_nadir_hz);
    out += ',';
    append_opt(out, m.first_local_nadir_time_s);
    out += ',';
    append_opt(out, m.second_local_nadir_hz);
    out += ',';
    append_opt(out, m.second_local_nadir_time_s);
    out += ',';
    append_num(out, m.settling_hz);
    out += ',';
    append_num(out, m.min_rocof_hz_per_s);
    out += ',';
    append_num(out, m.energy_used_mws);
    out += ',';
    append_num(out, m.peak_power_mw);
    out += ',';
    out += m.ufls_triggered ? '1' : '0';
    out += '\n';
    return out;
}

std::string sweep_csv(const SweepResult& result)
{
    std::string out =
        "parameter,nadir_hz,nadir_time_s,first_nadir_hz,first_nadir_time_s,second_nadir_hz,"
        "second_nadir_time_s,settling_hz,is_argmax\n";
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const SweepPoint& p = result.points[i];
        append_num(out, p.parameter);
        out += ',';
        append_num(out, p.metrics.nadir_hz);
        out += ',';
        append_num(out, p.metrics.nadir_time_s);
        out += ',';
        append_opt(out, p.metrics.first_local_nadir_hz);
        out += ',';
        append_opt(out, p.metrics.first_local_nadir_time_s);
        out += ',';
        append_opt(out, p.metrics.second_local_nadir_hz);
        out += ',';
        append_opt(out, p.metrics.second_local_nadir_time_s);
        out += ',';
        append_num(out, p.metrics.settling_hz);
        out += ',';
        out += (i == result.nadir_argmax) ? '1' : '0';
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot open for writing: " + path);
    }
    out << content;
    if (!out) {
        throw ConfigError("write failed: " + path);
    }
}

} // namespace gridfreq
