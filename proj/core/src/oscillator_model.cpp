#include "wavesearch/oscillator_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "wavesearch/error.hpp"

namespace wavesearch {

namespace {

void require(bool ok, ErrorKind kind, const std::string& message) {
  if (!ok) throw Error(kind, message);
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double tap_interval(Family family) noexcept {
  return family == Family::A ? 2.0 * std::numbers::pi : std::numbers::pi;
}

double free_period(Family family) noexcept {
  return 2.0 * tap_interval(family);
}

OscillatorParams::OscillatorParams(std::size_t n_items, double big_mass,
                                   double big_spring, double damping)
    : n_items_(n_items), big_mass_(big_mass), big_spring_(big_spring), damping_(damping) {
  require(n_items >= 2, ErrorKind::invalid_argument, "n_items must be >= 2");
  require(std::isfinite(big_mass) && big_mass > 0.0, ErrorKind::invalid_argument,
          "big_mass must be > 0");
  require(finite_nonneg(big_spring), ErrorKind::invalid_argument, "big_spring must be >= 0");
  require(finite_nonneg(damping), ErrorKind::invalid_argument, "damping must be >= 0");
}

OscillatorParams OscillatorParams::with_damping(double gamma) const {
  return OscillatorParams(n_items_, big_mass_, big_spring_, gamma);
}

GeneralizedSystem GeneralizedSystem::from(const OscillatorParams& params) {
  GeneralizedSystem sys;
  sys.small_masses.assign(params.n_items(), OscillatorParams::small_mass);
  sys.small_springs.assign(params.n_items(), OscillatorParams::small_spring);
  sys.big_mass = params.big_mass();
  sys.big_spring = params.big_spring();
  sys.damping = params.damping();
  return sys;
}

void GeneralizedSystem::validate() const {
  require(!small_masses.empty(), ErrorKind::invalid_argument, "system has no oscillators");
  require(small_masses.size() == small_springs.size(), ErrorKind::invalid_argument,
          "mass and spring arrays differ in length");
  for (std::size_t i = 0; i < small_masses.size(); ++i) {
    require(std::isfinite(small_masses[i]) && small_masses[i] > 0.0,
            ErrorKind::invalid_argument, "small mass " + std::to_string(i) + " must be > 0");
    require(std::isfinite(small_springs[i]) && small_springs[i] > 0.0,
            ErrorKind::invalid_argument, "small spring " + std::to_string(i) + " must be > 0");
  }
  require(std::isfinite(big_mass) && big_mass > 0.0, ErrorKind::invalid_argument,
          "big_mass must be > 0");
  require(finite_nonneg(big_spring), ErrorKind::invalid_argument, "big_spring must be >= 0");
  require(finite_nonneg(damping), ErrorKind::invalid_argument, "damping must be >= 0");
}

double PhaseSpaceState::mean_pos() const { return mean(small_pos); }
double PhaseSpaceState::mean_vel() const { return mean(small_vel); }

void PhaseSpaceState::validate() const {
  require(!small_pos.empty(), ErrorKind::invalid_argument, "state has no oscillators");
  require(small_pos.size() == small_vel.size(), ErrorKind::invalid_argument,
          "position and velocity arrays differ in length");
  const auto finite = [](double v) { return std::isfinite(v); };
  require(std::isfinite(big_pos) && std::isfinite(big_vel) && std::isfinite(time) &&
              std::all_of(small_pos.begin(), small_pos.end(), finite) &&
              std::all_of(small_vel.begin(), small_vel.end(), finite),
          ErrorKind::invalid_argument, "state contains non-finite values");
}

OscillatorParams family_params(Family family, int p, std::size_t n_items) {
  require(p >= 1, ErrorKind::invalid_argument, "family index p must be >= 1");
  const double n = static_cast<double>(n_items);
  const double pp = static_cast<double>(p);
  if (family == Family::A) {
    const double denom = 3.0 * (2.0 * pp + 3.0) * (2.0 * pp - 1.0);
    return OscillatorParams(n_items, 16.0 * n / denom,
                            (2.0 * pp + 1.0) * (2.0 * pp + 1.0) * n / denom);
  }
  return OscillatorParams(n_items, n / ((2.0 * pp + 1.0) * (2.0 * pp - 1.0)), 0.0);
}

SpectralData spectral(const OscillatorParams& params) {
  const double n = static_cast<double>(params.n_items());
  const double m = params.big_mass();
  const double sum = 1.0 + (params.big_spring() + n) / m;
  const double product = params.big_spring() / m;
  const double half = 0.5 * sum;
  const double root = std::sqrt(std::max(0.0, half * half - product));
  const double w2_plus = half + root;
  const double w2_minus = product / w2_plus;

  SpectralData out;
  out.omega_plus = std::sqrt(w2_plus);
  out.omega_minus = std::sqrt(w2_minus);
  out.omega_t = 1.0;
  const double coupling = std::sqrt(n / m);
  out.mode_plus = {1.0 - w2_plus, coupling};
  out.mode_minus = {1.0 - w2_minus, coupling};
  return out;
}

ModeState to_modes(const PhaseSpaceState& state, const OscillatorParams& params,
                   std::size_t target) {
  const std::size_t n = state.n_items();
  require(n == params.n_items(), ErrorKind::invalid_argument,
          "state size does not match params");
  require(target < n, ErrorKind::index_out_of_range,
          "target " + std::to_string(target) + " out of range");

  const double xbar = state.mean_pos();
  const double vbar = state.mean_vel();
  const double sqrt_m = std::sqrt(params.big_mass());
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  ModeState modes;
  modes.target = target;
  modes.time = state.time;
  modes.Y = sqrt_m * state.big_pos;
  modes.Y_dot = sqrt_m * state.big_vel;
  modes.ybar = sqrt_n * xbar;
  modes.ybar_dot = sqrt_n * vbar;
  modes.y_t = state.small_pos[target] - xbar;
  modes.y_t_dot = state.small_vel[target] - vbar;
  modes.residual_pos.reserve(n - 1);
  modes.residual_vel.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == target) continue;
    modes.residual_pos.push_back(state.small_pos[i] - xbar);
    modes.residual_vel.push_back(state.small_vel[i] - vbar);
  }
  return modes;
}

PhaseSpaceState from_modes(const ModeState& modes, const OscillatorParams& params) {
  const std::size_t n = modes.residual_pos.size() + 1;
  require(n == params.n_items() && modes.residual_vel.size() + 1 == n,
          ErrorKind::invalid_argument, "mode state size does not match params");
  require(modes.target < n, ErrorKind::index_out_of_range, "target out of range");

  const double sqrt_m = std::sqrt(params.big_mass());
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double xbar = modes.ybar / sqrt_n;
  const double vbar = modes.ybar_dot / sqrt_n;

  PhaseSpaceState state;
  state.time = modes.time;
  state.big_pos = modes.Y / sqrt_m;
  state.big_vel = modes.Y_dot / sqrt_m;
  state.small_pos.resize(n);
  state.small_vel.resize(n);
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == modes.target) {
      state.small_pos[i] = xbar + modes.y_t;
      state.small_vel[i] = vbar + modes.y_t_dot;
    } else {
      state.small_pos[i] = xbar + modes.residual_pos[r];
      state.small_vel[i] = vbar + modes.residual_vel[r];
      ++r;
    }
  }
  return state;
}

PhaseSpaceState initial_conditions(InitialKind kind, double amplitude,
                                   const OscillatorParams& params) {
  require(std::isfinite(amplitude), ErrorKind::invalid_argument, "amplitude must be finite");
  PhaseSpaceState state;
  state.small_pos.assign(params.n_items(), 0.0);
  state.small_vel.assign(params.n_items(), amplitude);
  if (kind == InitialKind::translation_free) {
    require(params.big_spring() == 0.0, ErrorKind::invalid_combination,
            "translation_free initial conditions require K = 0");
    state.big_vel = -static_cast<double>(params.n_items()) / params.big_mass() * amplitude;
  }
  return state;
}

double max_gain(const PhaseSpaceState& state, std::size_t target) {
  const std::size_t n = state.n_items();
  require(n >= 2, ErrorKind::invalid_argument, "max_gain needs N >= 2");
  require(target < n, ErrorKind::index_out_of_range, "target out of range");
  const double vt = state.small_vel[target];
  require(vt != 0.0, ErrorKind::undefined_ratio,
          "target velocity is zero; gain ratio undefined (use total_energy)");
  const double vbar = state.mean_vel();
  const double nn = static_cast<double>(n);
  const double rel = vt - vbar;
  return (nn * vbar * vbar + nn / (nn - 1.0) * rel * rel) / (vt * vt);
}

double max_gain(const PhaseSpaceState& state, std::span<const std::size_t> targets) {
  if (targets.size() == 1) return max_gain(state, targets[0]);
  const std::size_t n = state.n_items();
  require(!targets.empty() && targets.size() < n, ErrorKind::invalid_argument,
          "max_gain needs between 1 and N-1 targets");
  std::vector<bool> is_target(n, false);
  double target_energy = 0.0;
  for (std::size_t t : targets) {
    require(t < n, ErrorKind::index_out_of_range, "target out of range");
    require(!is_target[t], ErrorKind::invalid_argument, "duplicate target");
    is_target[t] = true;
    target_energy += state.small_vel[t] * state.small_vel[t];
  }
  require(target_energy != 0.0, ErrorKind::undefined_ratio,
          "target velocities are zero; gain ratio undefined");
  double rest_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_target[i]) rest_sum += state.small_vel[i];
  }
  const double n_rest = static_cast<double>(n - targets.size());
  const double rest_mean = rest_sum / n_rest;
  return (n_rest * rest_mean * rest_mean + target_energy) / target_energy;
}

EnergyLedger total_energy(const PhaseSpaceState& state, const GeneralizedSystem& system) {
  require(state.n_items() == system.n_items() && state.small_vel.size() == state.n_items(),
          ErrorKind::invalid_argument, "state size does not match system");
  EnergyLedger e;
  e.big_kinetic = 0.5 * system.big_mass * state.big_vel * state.big_vel;
  e.big_potential = 0.5 * system.big_spring * state.big_pos * state.big_pos;
  for (std::size_t i = 0; i < state.n_items(); ++i) {
    const double v = state.small_vel[i];
    const double d = state.small_pos[i] - state.big_pos;
    e.register_kinetic += 0.5 * system.small_masses[i] * v * v;
    e.register_potential += 0.5 * system.small_springs[i] * d * d;
  }
  e.total = e.big_kinetic + e.big_potential + e.register_kinetic + e.register_potential;
  return e;
}

EnergyLedger total_energy(const PhaseSpaceState& state, const OscillatorParams& params) {
  return total_energy(state, GeneralizedSystem::from(params));
}

double max_spring_extension(const PhaseSpaceState& state, bool big_spring_anchored) {
  double worst = big_spring_anchored ? std::abs(state.big_pos) : 0.0;
  for (double x : state.small_pos) {
    worst = std::max(worst, std::abs(x - state.big_pos));
  }
  return worst;
}

}  // namespace wavesearch
