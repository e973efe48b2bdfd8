#pragma once

#include <vector>

#include "gridfreq/grid.hpp"
#include "gridfreq/scenario.hpp"
#include "gridfreq/storage.hpp"
#include "gridfreq/trace.hpp"

namespace gridfreq {

/// Deterministic fixed-step simulation of a generation-loss contingency.
/// Devices are taken by value: controller state, measurements and SoC evolve
/// on the copies, so callers can reuse their inputs. Controller outputs and
/// the contingency loss are held constant across RK4 sub-steps (zero-order
/// hold at the major-step start). An empty device list is the no-storage
/// baseline.
Trace run_simulation(const GridModel& model, const Scenario& scenario,
                     std::vector<StorageDevice> devices);

} // namespace gridfreq
