#pragma once

#include <cstddef>
#include <vector>

namespace gridfreq {

/// Uniformly sampled simulation record. Row i holds the state at t_s[i]; the
/// power columns hold the zero-order-hold values applied over [t_i, t_i + dt).
struct Trace {
    double f_nominal_hz = 60.0;
    double dt_s = 0.0;
    std::vector<double> t_s;
    std::vector<double> freq_hz;
    std::vector<double> rocof_hz_s; ///< windowed estimate on the filtered frequency
    std::vector<double> mech_mw;
    std::vector<double> load_fraction;
    std::vector<std::vector<double>> device_power_mw; ///< [device][row]
    std::vector<std::vector<double>> device_soc_mws;  ///< [device][row]

    std::size_t rows() const { return t_s.size(); }
    std::size_t device_count() const { return device_power_mw.size(); }
    double total_power_mw(std::size_t row) const;
    double total_soc_mws(std::size_t row) const;
};

} // namespace gridfreq
