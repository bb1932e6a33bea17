#include "wavesearch/wave_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "wavesearch/error.hpp"

namespace wavesearch {

namespace {

struct Rotated {
  double q;
  double q_dot;
};

// Harmonic motion q'' = -omega^2 q over time t; omega = 0 is free drift.
Rotated rotate(double q, double q_dot, double omega, double t) {
  if (omega == 0.0) return {q + q_dot * t, q_dot};
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  return {q * c + q_dot * s / omega, -q * omega * s + q_dot * c};
}

void check_targets(std::span<const std::size_t> targets, std::size_t n_items) {
  if (targets.empty()) {
    throw Error(ErrorKind::invalid_argument, "at least one target is required");
  }
  std::vector<bool> seen(n_items, false);
  for (std::size_t t : targets) {
    if (t >= n_items) {
      throw Error(ErrorKind::index_out_of_range,
                  "target " + std::to_string(t) + " out of range [0, " +
                      std::to_string(n_items) + ")");
    }
    if (seen[t]) {
      throw Error(ErrorKind::invalid_argument, "duplicate target " + std::to_string(t));
    }
    seen[t] = true;
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double target_kinetic(const PhaseSpaceState& state, std::span<const std::size_t> targets) {
  double e = 0.0;
  for (std::size_t t : targets) e += state.small_vel[t] * state.small_vel[t];
  return e;
}

double target_fraction(const PhaseSpaceState& state, const EnergyLedger& energy,
                       const GeneralizedSystem& sys, std::span<const std::size_t> targets) {
  const double reg = energy.register_energy();
  if (reg <= 0.0) return 0.0;
  double e = 0.0;
  for (std::size_t t : targets) {
    const double v = state.small_vel[t];
    const double d = state.small_pos[t] - state.big_pos;
    e += 0.5 * sys.small_masses[t] * v * v + 0.5 * sys.small_springs[t] * d * d;
  }
  return e / reg;
}

// Accelerations from the Lagrangian with generalized masses and springs.
void accelerations(const PhaseSpaceState& s, const GeneralizedSystem& sys, double& big_acc,
                   std::vector<double>& acc) {
  double big_force = -sys.big_spring * s.big_pos;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const double f = sys.small_springs[i] * (s.small_pos[i] - s.big_pos);
    big_force += f;
    acc[i] = -f / sys.small_masses[i];
  }
  big_acc = big_force / sys.big_mass;
}

}  // namespace

TapSchedule TapSchedule::for_family(Family family, std::vector<std::size_t> targets,
                                    std::uint64_t count, TapVariant variant) {
  return TapSchedule{tap_interval(family), count, std::move(targets), variant};
}

void TapSchedule::validate(std::size_t n_items) const {
  if (!(interval > 0.0) || !std::isfinite(interval)) {
    throw Error(ErrorKind::invalid_argument, "tap interval must be > 0");
  }
  check_targets(targets, n_items);
}

std::vector<const TrajectorySample*> Trajectory::tap_instants() const {
  std::vector<const TrajectorySample*> out;
  for (const auto& s : samples) {
    if (s.tap_instant) out.push_back(&s);
  }
  return out;
}

PhaseSpaceState evolve_exact(const PhaseSpaceState& state, const OscillatorParams& params,
                             double dt) {
  if (params.damping() != 0.0) {
    throw Error(ErrorKind::unsupported_mode,
                "closed-form evolution is undamped; use evolve_numeric for damping > 0");
  }
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::invalid_argument, "dt must be finite and >= 0");
  }
  const std::size_t n = state.n_items();
  if (n != params.n_items() || state.small_vel.size() != n) {
    throw Error(ErrorKind::invalid_argument, "state size does not match params");
  }
  if (dt == 0.0) return state;

  const SpectralData modes = spectral(params);
  const double sqrt_m = std::sqrt(params.big_mass());
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double xbar = state.mean_pos();
  const double vbar = state.mean_vel();

  // Orthonormal eigenbasis of the (Y, ybar) block. The minus mode is taken as
  // the exact perpendicular of the plus mode.
  const double norm_plus = std::hypot(modes.mode_plus[0], modes.mode_plus[1]);
  const double u0 = modes.mode_plus[0] / norm_plus;
  const double u1 = modes.mode_plus[1] / norm_plus;
  const double w0 = -u1;
  const double w1 = u0;

  const double Y = sqrt_m * state.big_pos;
  const double Yd = sqrt_m * state.big_vel;
  const double yb = sqrt_n * xbar;
  const double ybd = sqrt_n * vbar;

  const Rotated plus = rotate(u0 * Y + u1 * yb, u0 * Yd + u1 * ybd, modes.omega_plus, dt);
  const Rotated minus = rotate(w0 * Y + w1 * yb, w0 * Yd + w1 * ybd, modes.omega_minus, dt);

  const double Y_new = plus.q * u0 + minus.q * w0;
  const double Yd_new = plus.q_dot * u0 + minus.q_dot * w0;
  const double xbar_new = (plus.q * u1 + minus.q * w1) / sqrt_n;
  const double vbar_new = (plus.q_dot * u1 + minus.q_dot * w1) / sqrt_n;

  // Every deviation from the mean is an independent unit-frequency mode.
  const double c = std::cos(modes.omega_t * dt);
  const double s = std::sin(modes.omega_t * dt);
  PhaseSpaceState out;
  out.time = state.time + dt;
  out.big_pos = Y_new / sqrt_m;
  out.big_vel = Yd_new / sqrt_m;
  out.small_pos.resize(n);
  out.small_vel.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = state.small_pos[i] - xbar;
    const double rd = state.small_vel[i] - vbar;
    out.small_pos[i] = xbar_new + r * c + rd * s;
    out.small_vel[i] = vbar_new - r * s + rd * c;
  }
  return out;
}

void integrate_numeric(PhaseSpaceState& state, const GeneralizedSystem& system, double dt,
                       double step,
                       const std::function<void(const PhaseSpaceState&)>& observer) {
  system.validate();
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorKind::invalid_argument, "step_size must be > 0");
  }
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::invalid_argument, "dt must be finite and >= 0");
  }
  const std::size_t n = state.n_items();
  if (n != system.n_items() || state.small_vel.size() != n) {
    throw Error(ErrorKind::invalid_argument, "state size does not match system");
  }
  if (dt == 0.0) return;

  const auto n_steps = static_cast<std::uint64_t>(std::max(1.0, std::ceil(dt / step - 1e-9)));
  const double h = dt / static_cast<double>(n_steps);

  // Fourth-order symmetric (Yoshida) composition of the second-order kernel.
  const double cbrt2 = std::cbrt(2.0);
  const double w1 = 1.0 / (2.0 - cbrt2);
  const double w0 = -cbrt2 / (2.0 - cbrt2);
  const std::array<double, 3> weights{w1, w0, w1};

  std::vector<double> acc(n);
  double big_acc = 0.0;
  accelerations(state, system, big_acc, acc);

  const auto damp = [&](double tau) {
    if (system.damping == 0.0) return;
    const double f = std::exp(-system.damping * tau);
    state.big_vel *= f;
    for (double& v : state.small_vel) v *= f;
  };
  const auto kick = [&](double tau) {
    state.big_vel += big_acc * tau;
    for (std::size_t i = 0; i < n; ++i) state.small_vel[i] += acc[i] * tau;
  };
  const auto drift = [&](double tau) {
    state.big_pos += state.big_vel * tau;
    for (std::size_t i = 0; i < n; ++i) state.small_pos[i] += state.small_vel[i] * tau;
  };

  const double t0 = state.time;
  for (std::uint64_t k = 0; k < n_steps; ++k) {
    for (double w : weights) {
      const double sub = w * h;
      damp(0.5 * sub);
      kick(0.5 * sub);
      drift(sub);
      accelerations(state, system, big_acc, acc);
      kick(0.5 * sub);
      damp(0.5 * sub);
    }
    state.time = t0 + static_cast<double>(k + 1) * h;
    if (observer) observer(state);
  }
  state.time = t0 + dt;
}

PhaseSpaceState evolve_numeric(const PhaseSpaceState& state, const GeneralizedSystem& system,
                               double dt, double step) {
  PhaseSpaceState out = state;
  integrate_numeric(out, system, dt, step, nullptr);
  return out;
}

PhaseSpaceState evolve_numeric(const PhaseSpaceState& state, const OscillatorParams& params,
                               double dt, double step) {
  return evolve_numeric(state, GeneralizedSystem::from(params), dt, step);
}

PhaseSpaceState apply_tap(const PhaseSpaceState& state, TapVariant variant,
                          std::span<const std::size_t> targets, bool big_spring_anchored,
                          double tolerance) {
  const std::size_t n = state.n_items();
  check_targets(targets, n);
  const double extension = max_spring_extension(state, big_spring_anchored);
  if (extension > tolerance) throw MistimedTapError(extension, tolerance);

  PhaseSpaceState out = state;
  if (variant == TapVariant::standard) {
    for (std::size_t t : targets) out.small_vel[t] = -out.small_vel[t];
  } else {
    std::vector<bool> is_target(n, false);
    for (std::size_t t : targets) is_target[t] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_target[i]) out.small_vel[i] = -out.small_vel[i];
    }
  }
  return out;
}

namespace {

template <typename Advance>
SearchResult run_with(const PhaseSpaceState& initial, const GeneralizedSystem& system,
                      const TapSchedule& schedule, const RunOptions& options,
                      Advance&& advance) {
  initial.validate();
  if (initial.n_items() != system.n_items()) {
    throw Error(ErrorKind::invalid_argument, "state size does not match system");
  }
  schedule.validate(system.n_items());
  if (options.samples_per_interval == 0) {
    throw Error(ErrorKind::invalid_argument, "samples_per_interval must be >= 1");
  }

  const bool anchored = system.big_spring > 0.0;
  const std::span<const std::size_t> targets(schedule.targets);
  const double sub_dt = schedule.interval / static_cast<double>(options.samples_per_interval);

  SearchResult result;
  auto& samples = result.trajectory.samples;
  samples.reserve((schedule.count + 1) * options.samples_per_interval);
  const auto record = [&](const PhaseSpaceState& s, bool tap_instant, std::uint64_t q) {
    TrajectorySample sample;
    sample.state = s;
    sample.energy = total_energy(s, system);
    sample.target_fraction = target_fraction(s, sample.energy, system, targets);
    sample.tap_instant = tap_instant;
    sample.tap_index = q;
    samples.push_back(std::move(sample));
  };

  PhaseSpaceState state = initial;
  for (std::uint64_t q = 0;; ++q) {
    record(state, true, q);
    if (q == schedule.count) break;
    const double tol =
        std::isinf(options.tap_tolerance)
            ? options.tap_tolerance
            : options.tap_tolerance * std::max(max_abs(state.small_vel), 1e-300) *
                  schedule.interval;
    state = apply_tap(state, schedule.variant, targets, anchored, tol);
    for (std::uint32_t k = 1; k <= options.samples_per_interval; ++k) {
      state = advance(state, sub_dt);
      if (k < options.samples_per_interval) record(state, false, q + 1);
    }
  }

  GainReport& gain = result.gain;
  const double e0 = target_kinetic(initial, targets);
  try {
    gain.max_gain = max_gain(initial, targets);
  } catch (const Error&) {
    gain.max_gain.reset();
  }
  for (const auto& s : samples) {
    if (!s.tap_instant || !(e0 > 0.0)) continue;
    const double g = target_kinetic(s.state, targets) / e0;
    gain.gain_vs_time.push_back({s.state.time, g});
    if (!gain.peak_gain || g > *gain.peak_gain) {
      gain.peak_gain = g;
      gain.peak_time = s.state.time;
    }
  }
  gain.stop_time = samples.back().state.time;
  if (!gain.gain_vs_time.empty()) gain.realized_gain = gain.gain_vs_time.back().gain;
  return result;
}

void check_step(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorKind::invalid_argument, "step_size must be > 0");
  }
}

}  // namespace

SearchResult run_schedule(const PhaseSpaceState& initial, const OscillatorParams& params,
                          const TapSchedule& schedule, const RunOptions& options) {
  const GeneralizedSystem system = GeneralizedSystem::from(params);
  if (options.integrator == Integrator::exact) {
    if (params.damping() != 0.0) {
      throw Error(ErrorKind::unsupported_mode,
                  "closed-form evolution is undamped; use the numeric integrator");
    }
    return run_with(initial, system, schedule, options,
                    [&](const PhaseSpaceState& s, double dt) {
                      return evolve_exact(s, params, dt);
                    });
  }
  check_step(options.step);
  return run_with(initial, system, schedule, options,
                  [&](const PhaseSpaceState& s, double dt) {
                    return evolve_numeric(s, system, dt, options.step);
                  });
}

SearchResult run_schedule(const PhaseSpaceState& initial, const GeneralizedSystem& system,
                          const TapSchedule& schedule, const RunOptions& options) {
  system.validate();
  check_step(options.step);
  return run_with(initial, system, schedule, options,
                  [&](const PhaseSpaceState& s, double dt) {
                    return evolve_numeric(s, system, dt, options.step);
                  });
}

SearchResult run_search(Family family, int p, std::size_t n_items,
                        std::vector<std::size_t> targets, double amplitude,
                        std::uint64_t queries, const RunOptions& options,
                        std::optional<InitialKind> kind, TapVariant variant) {
  const OscillatorParams params = family_params(family, p, n_items);
  const InitialKind start =
      kind.value_or(family == Family::A ? InitialKind::uniform : InitialKind::translation_free);
  const PhaseSpaceState initial = initial_conditions(start, amplitude, params);
  return run_schedule(initial, params,
                      TapSchedule::for_family(family, std::move(targets), queries, variant),
                      options);
}

Trajectory run_reverse(Family family, int p, std::size_t n_items, std::size_t target,
                       double amplitude, std::uint64_t queries, const RunOptions& options) {
  const OscillatorParams params = family_params(family, p, n_items);
  if (target >= n_items) {
    throw Error(ErrorKind::index_out_of_range, "target out of range");
  }
  PhaseSpaceState initial;
  initial.small_pos.assign(n_items, 0.0);
  initial.small_vel.assign(n_items, 0.0);
  initial.small_vel[target] = amplitude;
  if (params.big_spring() == 0.0) {
    // Zero total momentum keeps the free translation mode unexcited.
    initial.big_vel = -amplitude / params.big_mass();
  }
  return run_schedule(initial, params, TapSchedule::for_family(family, {target}, queries),
                      options)
      .trajectory;
}

AmplitudeVector velocity_amplitude_map(const PhaseSpaceState& state, bool big_spring_anchored,
                                       double tolerance) {
  const double extension = max_spring_extension(state, big_spring_anchored);
  if (extension > tolerance) throw MistimedTapError(extension, tolerance);
  return AmplitudeVector::normalized(state.small_vel);
}

RandomStopResult random_stop_gain(Family family, int p, std::size_t n_items,
                                  std::vector<std::size_t> targets, std::size_t trials,
                                  std::uint64_t seed, std::uint32_t cycles) {
  if (trials == 0) throw Error(ErrorKind::invalid_argument, "trials must be >= 1");
  if (cycles == 0) throw Error(ErrorKind::invalid_argument, "cycles must be >= 1");
  check_targets(targets, n_items);

  // sin^2((2q+1) theta) repeats every pi / (2 theta) queries.
  const double theta = rotation_angle(n_items, targets.size());
  const double span = static_cast<double>(cycles) * std::numbers::pi / (2.0 * theta);
  const auto grid = static_cast<std::uint64_t>(std::max(1.0, std::ceil(span - 1e-9)));

  const SearchResult run =
      run_search(family, p, n_items, std::move(targets), 1.0, grid - 1);
  std::vector<double> fractions;
  fractions.reserve(grid);
  for (const auto& s : run.trajectory.samples) {
    if (s.tap_instant) fractions.push_back(s.target_fraction);
  }

  RandomStopResult out;
  out.grid_size = grid;
  out.max_fraction = *std::max_element(fractions.begin(), fractions.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    std::mt19937_64 rng(seed + i);
    std::uniform_int_distribution<std::size_t> pick(0, fractions.size() - 1);
    sum += fractions[pick(rng)];
  }
  out.mean_fraction = sum / static_cast<double>(trials);
  out.ratio = out.mean_fraction / out.max_fraction;
  return out;
}

std::optional<double> find_zero_displacement_time(const PhaseSpaceState& state,
                                                  const OscillatorParams& params,
                                                  std::size_t target, double t_hi,
                                                  std::uint32_t grid) {
  if (target >= state.n_items()) {
    throw Error(ErrorKind::index_out_of_range, "target out of range");
  }
  if (!(t_hi > 0.0) || grid == 0) {
    throw Error(ErrorKind::invalid_argument, "search window must be positive");
  }
  const auto extension = [&](double t) {
    const PhaseSpaceState s = evolve_exact(state, params, t);
    return s.small_pos[target] - s.big_pos;
  };
  double prev_t = 0.0;
  double prev_f = extension(0.0);
  for (std::uint32_t k = 1; k <= grid; ++k) {
    const double t = t_hi * static_cast<double>(k) / static_cast<double>(grid);
    const double f = extension(t);
    if (f == 0.0) return t;
    if (prev_f != 0.0 && std::signbit(f) != std::signbit(prev_f)) {
      double lo = prev_t;
      double hi = t;
      double f_lo = prev_f;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = extension(mid);
        if (f_mid == 0.0) return mid;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev_t = t;
    prev_f = f;
  }
  return std::nullopt;
}

}  // namespace wavesearch
