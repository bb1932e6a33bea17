#include "wavesearch/quantum_coherent.hpp"

#include <cmath>
#include <numbers>

#include "wavesearch/error.hpp"

namespace wavesearch {

namespace {

using cplx = std::complex<double>;

// Unphased packet of |alpha>, including the constant factor exp(-i x0 p0 / 2 hbar)
// that makes it agree with the number-state expansion.
cplx packet(cplx alpha, const CoherentState& s, double x) {
  const double dx = std::sqrt(s.hbar / (2.0 * s.mass * s.omega));
  const double dp = std::sqrt(s.mass * s.hbar * s.omega / 2.0);
  const double x0 = 2.0 * dx * alpha.real();
  const double p0 = 2.0 * dp * alpha.imag();
  const double amp = std::pow(s.mass * s.omega / (std::numbers::pi * s.hbar), 0.25);
  const double u = (x - x0) / (2.0 * dx);
  return amp * std::exp(cplx(-u * u, (x * p0 - 0.5 * x0 * p0) / s.hbar));
}

std::vector<cplx> coherent_coefficients(cplx alpha) {
  const double a2 = std::norm(alpha);
  std::vector<cplx> out;
  cplx term = std::exp(-0.5 * a2);
  for (std::size_t n = 0; n < 100000; ++n) {
    if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
    out.push_back(term);
    const double raw = std::abs(term) * std::exp(0.5 * a2);  // |a|^n / sqrt(n!)
    if (static_cast<double>(n) > a2 && raw < 1e-16) break;
    if (a2 == 0.0) break;
  }
  return out;
}

}  // namespace

void CoherentState::validate() const {
  const auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!pos(omega) || !pos(mass) || !pos(hbar)) {
    throw Error(ErrorKind::invalid_argument, "omega, mass and hbar must be > 0");
  }
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) ||
      !std::isfinite(global_phase)) {
    throw Error(ErrorKind::invalid_argument, "alpha and phase must be finite");
  }
}

CoherentState evolve_coherent(const CoherentState& state, double dt) {
  state.validate();
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::invalid_argument, "dt must be finite and >= 0");
  }
  CoherentState out = state;
  out.alpha = state.alpha * std::polar(1.0, -state.omega * dt);
  out.global_phase = state.global_phase - 0.5 * state.omega * dt;
  return out;
}

Expectations expectations(const CoherentState& state) {
  state.validate();
  Expectations e;
  e.dx = std::sqrt(state.hbar / (2.0 * state.mass * state.omega));
  e.dp = std::sqrt(state.mass * state.hbar * state.omega / 2.0);
  e.x = 2.0 * e.dx * state.alpha.real();
  e.p = 2.0 * e.dp * state.alpha.imag();
  e.energy = state.hbar * state.omega * (std::norm(state.alpha) + 0.5);
  return e;
}

std::complex<double> wavepacket_at(const CoherentState& state, double x) {
  state.validate();
  return std::polar(1.0, state.global_phase) * packet(state.alpha, state, x);
}

CoherentState tap_coherent(const CoherentState& state) {
  state.validate();
  CoherentState out = state;
  out.alpha = -state.alpha;
  out.global_phase = state.global_phase + std::numbers::pi;
  return out;
}

TappedCoherentState tapped_state(const CoherentState& state) {
  state.validate();
  const double a2 = std::norm(state.alpha);
  if (!(a2 > 0.0)) {
    throw Error(ErrorKind::degenerate_state,
                "alpha = 0: the odd image superposition vanishes");
  }
  return TappedCoherentState{state, 1.0 / std::sqrt(-std::expm1(-2.0 * a2))};
}

TappedCoherentState tapped_state(std::complex<double> alpha) {
  CoherentState s;
  s.alpha = alpha;
  return tapped_state(s);
}

TappedCoherentState evolve_tapped(const TappedCoherentState& state, double dt) {
  return TappedCoherentState{evolve_coherent(state.base, dt), state.normalization};
}

std::complex<double> tapped_wavefunction_at(const TappedCoherentState& state, double x) {
  const CoherentState& s = state.base;
  s.validate();
  return std::polar(state.normalization, s.global_phase) *
         (packet(s.alpha, s, x) - packet(-s.alpha, s, x));
}

std::vector<std::complex<double>> number_coefficients(const CoherentState& state) {
  state.validate();
  std::vector<cplx> c = coherent_coefficients(state.alpha);
  const cplx phase = std::polar(1.0, state.global_phase);
  for (auto& v : c) v *= phase;
  return c;
}

std::vector<std::complex<double>> number_coefficients(const TappedCoherentState& state) {
  std::vector<cplx> c = number_coefficients(state.base);
  for (std::size_t n = 0; n < c.size(); ++n) {
    // (1 - (-1)^n): even terms cancel exactly between |alpha> and |-alpha>.
    c[n] = (n % 2 == 0) ? cplx(0.0, 0.0) : 2.0 * state.normalization * c[n];
  }
  return c;
}

}  // namespace wavesearch
