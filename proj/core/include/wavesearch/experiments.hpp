#pragma once

// Robustness and detuning studies built on the wave engine.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "wavesearch/oscillator_model.hpp"
#include "wavesearch/wave_engine.hpp"

namespace wavesearch {

enum class SweepParameter { damping, scale, detune, family_index, n_items };

std::string_view to_string(SweepParameter p) noexcept;

struct ExperimentConfig {
  std::size_t n_items = 4;
  Family family = Family::B;
  int p = 1;
  std::size_t target = 0;
  double amplitude = 1.0;
  std::uint64_t queries = 1;
  double step = 1e-3;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SweepSpec {
  SweepParameter parameter = SweepParameter::damping;
  std::vector<double> grid;
  ExperimentConfig base;
  std::size_t trials = 1;

  void validate() const;
};

struct DampingRow {
  double gamma = 0.0;
  double realized_gain = 0.0;
  double frequency = 0.0;        // fitted relative-mode frequency
  double frequency_shift = 0.0;  // fitted(gamma = 0) - fitted(gamma)
};

/// Damped search runs (numeric integrator, taps unchecked after t = 0) plus a
/// zero-crossing frequency fit of the damped relative mode x_t - xbar.
std::vector<DampingRow> damping_sweep(const SweepSpec& sweep);

/// Frequency of the x_t - xbar mode from a least-squares fit of its zero
/// crossings over `periods` oscillations.
double fit_relative_mode_frequency(const ExperimentConfig& config, double gamma,
                                   std::uint32_t periods = 100);

struct ScalingReport {
  double scale = 1.0;
  /// Max coordinate difference between the base run and the run with every
  /// mass and spring multiplied by `scale`.
  double global_max_deviation = 0.0;
  /// Per-oscillator factors drawn uniformly from [0.9, 1.1].
  std::vector<double> per_oscillator_scales;
  std::vector<double> per_oscillator_final_energy;
  std::size_t argmax_oscillator = 0;
  bool target_is_argmax = false;
};

ScalingReport scaling_check(double scale, const ExperimentConfig& config);

struct DetuningRow {
  double factor = 1.0;
  double realized_gain = 0.0;  // peak target kinetic energy / initial
  double gain_fraction = 0.0;  // relative to the untouched (factor 1) run
};

/// Target mass multiplied by each factor (spring unchanged); taps follow the
/// tuned schedule without the displacement check.
std::vector<DetuningRow> detuning_sweep(const SweepSpec& sweep);

struct RateInputs {
  double barrier_energy = 1.0;
  double thermal_energy = 1.0;
  double focused_energy = 0.0;

  void validate() const;
};

/// Model choice, not a derived law: the ratio of Boltzmann weights for
/// crossing a barrier with and without focused energy, exp(min(E_f, E_b) / kT).
double rate_enhancement(const RateInputs& inputs);

}  // namespace wavesearch
