#pragma once

#include <stdexcept>
#include <string>

namespace optomem {

// Error taxonomy mapped to CLI exit codes: config 2, physics 3, input 4.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Instability, solver non-convergence, unphysical state.
struct physics_error : std::runtime_error {
  explicit physics_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-supplied data files (samples, malformed CSV).
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Internal numerical failures (shape mismatches, singular matrices).
struct numerics_error : std::runtime_error {
  explicit numerics_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace optomem
