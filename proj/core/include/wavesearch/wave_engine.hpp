#pragma once

// Time evolution of the coupled-oscillator register and the tapping oracle.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "wavesearch/oscillator_model.hpp"
#include "wavesearch/search_core.hpp"

namespace wavesearch {

enum class TapVariant {
  standard,    // reverse the targets' velocities (U_t)
  complement,  // reverse every oscillator except the targets (-U_t)
};

/// Default relative tolerance for the zero-displacement check at tap instants.
inline constexpr double kDefaultTapTolerance = 1e-6;

struct TapSchedule {
  double interval = 0.0;
  std::uint64_t count = 0;
  std::vector<std::size_t> targets;
  TapVariant variant = TapVariant::standard;

  static TapSchedule for_family(Family family, std::vector<std::size_t> targets,
                                std::uint64_t count,
                                TapVariant variant = TapVariant::standard);
  void validate(std::size_t n_items) const;
};

enum class Integrator { exact, numeric };

struct RunOptions {
  Integrator integrator = Integrator::exact;
  double step = 1e-3;                 // numeric only
  std::uint32_t samples_per_interval = 1;  // 1 = record tap instants only
  /// Relative displacement tolerance; scaled by max|x_dot| * interval.
  /// Infinity disables the check (detuned or damped variants).
  double tap_tolerance = kDefaultTapTolerance;
};

struct TrajectorySample {
  PhaseSpaceState state;
  EnergyLedger energy;
  /// Target energy over register energy. Equals the kinetic fraction at tap
  /// instants, where every spring is relaxed.
  double target_fraction = 0.0;
  bool tap_instant = false;
  std::uint64_t tap_index = 0;  // queries applied before this sample
};

struct Trajectory {
  std::vector<TrajectorySample> samples;

  std::vector<const TrajectorySample*> tap_instants() const;
  const TrajectorySample& back() const { return samples.back(); }
  bool empty() const noexcept { return samples.empty(); }
};

struct GainPoint {
  double time = 0.0;
  double gain = 0.0;
};

struct GainReport {
  /// Bound from the initial state; empty when the initial target velocity is 0.
  std::optional<double> max_gain;
  /// Target kinetic energy at the stop instant over its initial value.
  std::optional<double> realized_gain;
  std::optional<double> peak_gain;
  double peak_time = 0.0;
  std::vector<GainPoint> gain_vs_time;  // tap instants only
  double stop_time = 0.0;
};

struct SearchResult {
  Trajectory trajectory;
  GainReport gain;
};

/// Closed-form undamped evolution by `dt` via the e_pm and relative modes.
PhaseSpaceState evolve_exact(const PhaseSpaceState& state, const OscillatorParams& params,
                             double dt);

/// Fixed-step fourth-order symmetric composition of velocity Verlet, with
/// exact velocity decay factors for damping. The step is shrunk so an integer
/// number of steps lands exactly on `dt`.
PhaseSpaceState evolve_numeric(const PhaseSpaceState& state, const GeneralizedSystem& system,
                               double dt, double step);
PhaseSpaceState evolve_numeric(const PhaseSpaceState& state, const OscillatorParams& params,
                               double dt, double step);

/// Same integrator; calls `observer` after every step.
void integrate_numeric(PhaseSpaceState& state, const GeneralizedSystem& system, double dt,
                       double step,
                       const std::function<void(const PhaseSpaceState&)>& observer);

/// Elastic tap. `tolerance` is absolute; the check uses max_spring_extension.
/// Throws MistimedTapError when the springs are not relaxed.
PhaseSpaceState apply_tap(const PhaseSpaceState& state, TapVariant variant,
                          std::span<const std::size_t> targets, bool big_spring_anchored,
                          double tolerance = std::numeric_limits<double>::infinity());

/// Runs `schedule` from an arbitrary initial state: sample, tap, evolve by the
/// interval, repeated `count` times, then a final sample.
SearchResult run_schedule(const PhaseSpaceState& initial, const OscillatorParams& params,
                          const TapSchedule& schedule, const RunOptions& options = {});

/// Numeric-only variant for systems outside the natural-unit family
/// (scaled or detuned masses). `options.integrator` is ignored.
SearchResult run_schedule(const PhaseSpaceState& initial, const GeneralizedSystem& system,
                          const TapSchedule& schedule, const RunOptions& options = {});

/// Family-tuned search from the standard initial conditions (uniform for
/// family A, translation-free for family B unless `kind` says otherwise).
SearchResult run_search(Family family, int p, std::size_t n_items,
                        std::vector<std::size_t> targets, double amplitude,
                        std::uint64_t queries, const RunOptions& options = {},
                        std::optional<InitialKind> kind = std::nullopt,
                        TapVariant variant = TapVariant::standard);

/// Starts with all register energy in the target (velocity `amplitude`) and
/// applies the same schedule; the energy spreads back over the register.
Trajectory run_reverse(Family family, int p, std::size_t n_items, std::size_t target,
                       double amplitude, std::uint64_t queries,
                       const RunOptions& options = {});

/// Small-oscillator velocities as a unit amplitude vector. Throws when the
/// register is at rest or, if `tolerance` is finite, when springs are extended.
AmplitudeVector velocity_amplitude_map(
    const PhaseSpaceState& state, bool big_spring_anchored = true,
    double tolerance = std::numeric_limits<double>::infinity());

struct RandomStopResult {
  double mean_fraction = 0.0;
  double max_fraction = 0.0;
  double ratio = 0.0;  // mean / max
  std::uint64_t grid_size = 0;
};

/// Stops the search at a tap instant drawn uniformly from `cycles` full
/// rotation cycles. Trial i draws from its own generator seeded seed + i.
RandomStopResult random_stop_gain(Family family, int p, std::size_t n_items,
                                  std::vector<std::size_t> targets, std::size_t trials,
                                  std::uint64_t seed, std::uint32_t cycles = 100);

/// Debug path: first time in (t_lo, t_hi] where the target spring extension
/// x_t - X crosses zero, by bracketing on a grid then bisection.
std::optional<double> find_zero_displacement_time(const PhaseSpaceState& state,
                                                  const OscillatorParams& params,
                                                  std::size_t target, double t_hi,
                                                  std::uint32_t grid = 256);

}  // namespace wavesearch
