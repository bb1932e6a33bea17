#include "wavesearch/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "wavesearch/error.hpp"

namespace wavesearch {

namespace {

constexpr double kUnchecked = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::invalid_argument, message);
}

// Standard start for a family, with the translation-free big velocity computed
// from the actual momentum so detuned masses stay translation-free too.
PhaseSpaceState family_start(const ExperimentConfig& cfg, const GeneralizedSystem& sys) {
  PhaseSpaceState s;
  s.small_pos.assign(cfg.n_items, 0.0);
  s.small_vel.assign(cfg.n_items, cfg.amplitude);
  if (cfg.family == Family::B) {
    double momentum = 0.0;
    for (std::size_t i = 0; i < cfg.n_items; ++i) momentum += sys.small_masses[i] * cfg.amplitude;
    s.big_vel = -momentum / sys.big_mass;
  }
  return s;
}

double oscillator_energy(const PhaseSpaceState& s, const GeneralizedSystem& sys, std::size_t i) {
  const double v = s.small_vel[i];
  const double d = s.small_pos[i] - s.big_pos;
  return 0.5 * sys.small_masses[i] * v * v + 0.5 * sys.small_springs[i] * d * d;
}

double max_state_difference(const PhaseSpaceState& a, const PhaseSpaceState& b) {
  double m = std::max(std::abs(a.big_pos - b.big_pos), std::abs(a.big_vel - b.big_vel));
  for (std::size_t i = 0; i < a.n_items(); ++i) {
    m = std::max(m, std::abs(a.small_pos[i] - b.small_pos[i]));
    m = std::max(m, std::abs(a.small_vel[i] - b.small_vel[i]));
  }
  return m;
}

}  // namespace

std::string_view to_string(SweepParameter p) noexcept {
  switch (p) {
    case SweepParameter::damping: return "gamma";
    case SweepParameter::scale: return "scale";
    case SweepParameter::detune: return "detune";
    case SweepParameter::family_index: return "p";
    case SweepParameter::n_items: return "n";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  require(n_items >= 2, "n must be >= 2");
  require(p >= 1, "p must be >= 1");
  if (target >= n_items) {
    throw Error(ErrorKind::index_out_of_range, "target out of range");
  }
  require(std::isfinite(amplitude) && amplitude != 0.0, "amplitude must be nonzero");
  require(std::isfinite(step) && step > 0.0, "step must be > 0");
}

void SweepSpec::validate() const {
  base.validate();
  require(!grid.empty(), "sweep grid is empty");
  require(trials >= 1, "trials must be >= 1");
  for (double v : grid) require(std::isfinite(v), "sweep grid contains non-finite values");
}

double fit_relative_mode_frequency(const ExperimentConfig& config, double gamma,
                                   std::uint32_t periods) {
  config.validate();
  require(gamma >= 0.0, "gamma must be >= 0");
  require(periods >= 2, "need at least two periods");
  GeneralizedSystem sys =
      GeneralizedSystem::from(family_params(config.family, config.p, config.n_items));
  sys.damping = gamma;

  // Excite only x_t - xbar: the mean velocity is zero and the big mass rests.
  const double n = static_cast<double>(config.n_items);
  PhaseSpaceState s;
  s.small_pos.assign(config.n_items, 0.0);
  s.small_vel.assign(config.n_items, -config.amplitude / n);
  s.small_vel[config.target] = config.amplitude * (1.0 - 1.0 / n);

  std::vector<double> crossings;
  double prev_t = 0.0;
  double prev_y = 0.0;
  const std::size_t t = config.target;
  integrate_numeric(s, sys, 2.0 * std::numbers::pi * periods, config.step,
                    [&](const PhaseSpaceState& st) {
                      const double y = st.small_pos[t] - st.mean_pos();
                      if (prev_t > 0.0 && std::signbit(y) != std::signbit(prev_y)) {
                        crossings.push_back(prev_t + (st.time - prev_t) * prev_y / (prev_y - y));
                      }
                      prev_t = st.time;
                      prev_y = y;
                    });
  require(crossings.size() >= 3, "too few zero crossings to fit a frequency");

  // Least-squares slope of crossing time against crossing index.
  const double m = static_cast<double>(crossings.size());
  double sk = 0.0, st = 0.0, skk = 0.0, skt = 0.0;
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    const double kk = static_cast<double>(k);
    sk += kk;
    st += crossings[k];
    skk += kk * kk;
    skt += kk * crossings[k];
  }
  const double half_period = (m * skt - sk * st) / (m * skk - sk * sk);
  return std::numbers::pi / half_period;
}

std::vector<DampingRow> damping_sweep(const SweepSpec& sweep) {
  sweep.validate();
  require(sweep.parameter == SweepParameter::damping, "damping_sweep needs a gamma grid");
  for (double g : sweep.grid) require(g >= 0.0, "gamma values must be >= 0");

  const ExperimentConfig& cfg = sweep.base;
  const double undamped_frequency = fit_relative_mode_frequency(cfg, 0.0);

  std::vector<DampingRow> rows;
  rows.reserve(sweep.grid.size());
  for (double gamma : sweep.grid) {
    const OscillatorParams params =
        family_params(cfg.family, cfg.p, cfg.n_items).with_damping(gamma);
    const GeneralizedSystem sys = GeneralizedSystem::from(params);
    RunOptions options;
    options.integrator = Integrator::numeric;
    options.step = cfg.step;
    // Damping moves the zero-displacement instants slightly off the grid.
    options.tap_tolerance = gamma == 0.0 ? kDefaultTapTolerance : kUnchecked;
    const SearchResult run = run_schedule(
        family_start(cfg, sys), params,
        TapSchedule::for_family(cfg.family, {cfg.target}, cfg.queries), options);

    DampingRow row;
    row.gamma = gamma;
    row.realized_gain = run.gain.realized_gain.value_or(0.0);
    row.frequency = fit_relative_mode_frequency(cfg, gamma);
    row.frequency_shift = undamped_frequency - row.frequency;
    rows.push_back(row);
  }
  return rows;
}

ScalingReport scaling_check(double scale, const ExperimentConfig& config) {
  config.validate();
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw Error(ErrorKind::invalid_argument, "scale must be > 0");
  }
  const OscillatorParams params = family_params(config.family, config.p, config.n_items);
  const GeneralizedSystem base = GeneralizedSystem::from(params);
  GeneralizedSystem scaled = base;
  for (double& m : scaled.small_masses) m *= scale;
  for (double& k : scaled.small_springs) k *= scale;
  scaled.big_mass *= scale;
  scaled.big_spring *= scale;

  const TapSchedule schedule =
      TapSchedule::for_family(config.family, {config.target}, config.queries);
  RunOptions options;
  options.integrator = Integrator::numeric;
  options.step = config.step;
  options.samples_per_interval = 8;

  const PhaseSpaceState start = family_start(config, base);
  const SearchResult ref = run_schedule(start, base, schedule, options);
  const SearchResult alt = run_schedule(start, scaled, schedule, options);

  ScalingReport report;
  report.scale = scale;
  for (std::size_t i = 0; i < ref.trajectory.samples.size(); ++i) {
    report.global_max_deviation =
        std::max(report.global_max_deviation,
                 max_state_difference(ref.trajectory.samples[i].state,
                                      alt.trajectory.samples[i].state));
  }

  // Non-uniform factors: reported, not asserted.
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> draw(0.9, 1.1);
  GeneralizedSystem uneven = base;
  report.per_oscillator_scales.resize(config.n_items);
  for (std::size_t i = 0; i < config.n_items; ++i) {
    const double a = draw(rng);
    report.per_oscillator_scales[i] = a;
    uneven.small_masses[i] *= a;
    uneven.small_springs[i] *= a;
  }
  RunOptions loose = options;
  loose.samples_per_interval = 1;
  loose.tap_tolerance = kUnchecked;
  const SearchResult run = run_schedule(family_start(config, uneven), uneven, schedule, loose);
  const PhaseSpaceState& last = run.trajectory.back().state;
  report.per_oscillator_final_energy.resize(config.n_items);
  for (std::size_t i = 0; i < config.n_items; ++i) {
    report.per_oscillator_final_energy[i] = oscillator_energy(last, uneven, i);
  }
  const auto& e = report.per_oscillator_final_energy;
  report.argmax_oscillator =
      static_cast<std::size_t>(std::max_element(e.begin(), e.end()) - e.begin());
  report.target_is_argmax = report.argmax_oscillator == config.target;
  return report;
}

std::vector<DetuningRow> detuning_sweep(const SweepSpec& sweep) {
  sweep.validate();
  require(sweep.parameter == SweepParameter::detune, "detuning_sweep needs a factor grid");
  for (double f : sweep.grid) require(f > 0.0, "detuning factors must be > 0");

  const ExperimentConfig& cfg = sweep.base;
  const GeneralizedSystem tuned =
      GeneralizedSystem::from(family_params(cfg.family, cfg.p, cfg.n_items));
  const TapSchedule schedule = TapSchedule::for_family(cfg.family, {cfg.target}, cfg.queries);
  RunOptions options;
  options.integrator = Integrator::numeric;
  options.step = cfg.step;
  options.tap_tolerance = kUnchecked;

  // Peak target kinetic energy over the run, sampled densely between taps.
  // The coupling spring also stores energy taken from the big oscillator, so
  // only the kinetic part reproduces the N-fold gain of the tuned run.
  options.samples_per_interval = 256;
  const auto gain_for = [&](double factor) {
    GeneralizedSystem sys = tuned;
    sys.small_masses[cfg.target] *= factor;
    // Same initial velocities as the tuned run; only the mass changes.
    const PhaseSpaceState start = family_start(cfg, tuned);
    const SearchResult run = run_schedule(start, sys, schedule, options);
    const double v0 = start.small_vel[cfg.target];
    double peak = 0.0;
    for (const auto& s : run.trajectory.samples) {
      const double v = s.state.small_vel[cfg.target];
      peak = std::max(peak, v * v);
    }
    return peak / (v0 * v0);
  };

  const double baseline = gain_for(1.0);
  std::vector<DetuningRow> rows;
  rows.reserve(sweep.grid.size());
  for (double factor : sweep.grid) {
    DetuningRow row;
    row.factor = factor;
    row.realized_gain = factor == 1.0 ? baseline : gain_for(factor);
    row.gain_fraction = row.realized_gain / baseline;
    rows.push_back(row);
  }
  return rows;
}

void RateInputs::validate() const {
  require(std::isfinite(barrier_energy) && barrier_energy > 0.0, "barrier energy must be > 0");
  require(std::isfinite(thermal_energy) && thermal_energy > 0.0, "thermal energy must be > 0");
  require(std::isfinite(focused_energy) && focused_energy >= 0.0,
          "focused energy must be >= 0");
}

double rate_enhancement(const RateInputs& inputs) {
  inputs.validate();
  return std::exp(std::min(inputs.focused_energy, inputs.barrier_energy) /
                  inputs.thermal_energy);
}

}  // namespace wavesearch
