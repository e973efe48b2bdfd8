#include "gridfreq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "gridfreq/errors.hpp"

namespace gridfreq {

namespace {

struct Dip {
    double f_hz = 0.0;
    double t_s = 0.0;
    std::size_t index = 0;
};

// Local minima of the sampled curve, merged by prominence: a dip only closes
// once the following rebound rises at least `prominence` above its bottom;
// shallower rebounds merge neighbouring dips into one.
std::vector<Dip> find_dips(const std::vector<double>& t, const std::vector<double>& f,
                           double prominence)
{
    // run-length compress so plateaus behave as single points
    std::vector<std::size_t> idx;
    idx.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (idx.empty() || f[i] != f[idx.back()]) {
            idx.push_back(i);
        }
    }

    std::vector<Dip> dips;
    bool open = false;
    Dip cur;
    for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        const double prev = f[idx[k - 1]];
        const double v = f[idx[k]];
        const double next = f[idx[k + 1]];
        if (v < prev && v < next) {
            if (!open) {
                open = true;
                cur = {v, t[idx[k]], idx[k]};
            } else if (v < cur.f_hz) {
                cur = {v, t[idx[k]], idx[k]};
            }
        } else if (v > prev && v > next && open) {
            if (v - cur.f_hz >= prominence) {
                dips.push_back(cur);
                open = false;
            }
        }
    }
    if (open) {
        double tail_max = cur.f_hz;
        for (std::size_t i = cur.index; i < f.size(); ++i) {
            tail_max = std::max(tail_max, f[i]);
        }
        if (tail_max - cur.f_hz >= prominence) {
            dips.push_back(cur);
        }
    }
    return dips;
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

Metrics compute_metrics(const Trace& trace)
{
    const std::size_t n = trace.rows();
    if (n == 0) {
        throw NumericError("compute_metrics: empty trace");
    }

    Metrics m;
    m.f_nominal_hz = trace.f_nominal_hz;

    // global nadir: plain scan, first occurrence
    std::size_t min_i = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (trace.freq_hz[i] < trace.freq_hz[min_i]) {
            min_i = i;
        }
    }
    m.nadir_hz = trace.freq_hz[min_i];
    m.nadir_time_s = trace.t_s[min_i];

    std::vector<Dip> dips = find_dips(trace.t_s, trace.freq_hz, kNadirProminenceHz);
    if (dips.size() > 2) {
        std::sort(dips.begin(), dips.end(),
                  [](const Dip& a, const Dip& b) { return a.f_hz < b.f_hz; });
        dips.resize(2);
    }
    std::sort(dips.begin(), dips.end(), [](const Dip& a, const Dip& b) { return a.t_s < b.t_s; });
    if (!dips.empty()) {
        m.first_local_nadir_hz = dips[0].f_hz;
        m.first_local_nadir_time_s = dips[0].t_s;
    }
    if (dips.size() > 1) {
        m.second_local_nadir_hz = dips[1].f_hz;
        m.second_local_nadir_time_s = dips[1].t_s;
    }

    const double t_end = trace.t_s.back();
    double window_start = t_end - kSettlingWindowS;
    if (window_start < trace.t_s.front()) {
        std::cerr << "compute_metrics: trace shorter than the settling window; "
                     "using the available tail\n";
        window_start = trace.t_s.front();
    }
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (trace.t_s[i] >= window_start - 1e-9) {
            acc += trace.freq_hz[i];
            ++count;
        }
    }
    m.settling_hz = acc / static_cast<double>(count);

    m.min_rocof_hz_per_s = *std::min_element(trace.rocof_hz_s.begin(), trace.rocof_hz_s.end());

    std::vector<double> total_power(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        total_power[i] = trace.total_power_mw(i);
    }
    m.energy_used_mws = trapezoid(trace.t_s, total_power);
    m.peak_power_mw = total_power.empty() ? 0.0 : *std::max_element(total_power.begin(), total_power.end());

    m.ufls_triggered = std::any_of(trace.load_fraction.begin(), trace.load_fraction.end(),
                                   [](double f) { return f < 1.0; });
    return m;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw NumericError("linear_fit: need at least two matching samples");
    }
    const auto n = static_cast<double>(x.size());
    double xm = 0.0;
    double ym = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xm += x[i];
        ym += y[i];
    }
    xm /= n;
    ym /= n;

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - xm) * (x[i] - xm);
        sxy += (x[i] - xm) * (y[i] - ym);
        syy += (y[i] - ym) * (y[i] - ym);
    }
    if (sxx <= 0.0) {
        throw NumericError("linear_fit: degenerate abscissa");
    }

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

} // namespace gridfreq
