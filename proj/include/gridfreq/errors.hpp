#pragma once

#include <stdexcept>
#include <string>

namespace gridfreq {

// Bad files, bad schema, or violated model invariants.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario construction problems (e.g. renewable shares leave no synchronous fleet).
struct ScenarioError : ConfigError {
    using ConfigError::ConfigError;
};

// Non-finite or degenerate numeric inputs.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The integrator produced a non-finite state; message carries the simulation time.
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gridfreq
