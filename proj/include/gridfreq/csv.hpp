#pragma once

#include <string>

#include "gridfreq/metrics.hpp"
#include "gridfreq/sweep.hpp"
#include "gridfreq/trace.hpp"

namespace gridfreq {

// All CSV output uses fixed 6-decimal formatting and is byte-reproducible for
// identical inputs. Device power/SoC columns aggregate over devices.

std::string trace_csv(const Trace& trace);
std::string metrics_csv(const Metrics& metrics);
std::string sweep_csv(const SweepResult& result);

void write_file(const std::string& path, const std::string& content);

} // namespace gridfreq
