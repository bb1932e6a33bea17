#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavesearch/oscillator_model.hpp"
#include "wavesearch/wave_engine.hpp"

namespace wavesearch::app {

/// Everything a single CLI invocation needs. Field names match the JSON keys.
struct RunConfig {
  std::string command;  // grover | wave | quantum | experiment
  std::string action;   // empty for grover

  // Search and wave runs.
  std::optional<std::uint64_t> n;
  Family family = Family::B;
  int p = 1;
  std::vector<std::size_t> target;
  double amplitude = 1.0;
  std::optional<std::uint64_t> q;  // defaults to the optimal query count
  double gamma = 0.0;
  double step = 1e-3;
  std::uint64_t seed = 0;
  std::uint64_t trials = 10000;
  Integrator integrator = Integrator::exact;
  std::uint32_t samples_per_interval = 1;
  std::optional<InitialKind> initial;
  TapVariant variant = TapVariant::standard;
  std::uint32_t cycles = 100;

  // Quantum frames.
  double alpha_re = -2.0;
  double alpha_im = 0.0;
  double omega = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  bool tapped = true;
  std::uint32_t frames = 64;
  std::optional<double> dt;  // defaults to one period / frames
  std::uint32_t points = 201;
  std::optional<double> x_min;
  std::optional<double> x_max;

  // Experiments.
  std::vector<double> grid;
  double scale = 2.0;
  double barrier_energy = 1.0;
  double thermal_energy = 1.0;
  double focused_energy = 0.0;

  std::string output_dir;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// wavesearch::Error naming the key.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON file and parses it strictly.
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);

/// Cross-field checks (required keys, target < n, command/action pairs).
void validate(const RunConfig& config);

}  // namespace wavesearch::app
