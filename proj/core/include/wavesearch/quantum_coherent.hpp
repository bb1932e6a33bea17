#pragma once

// Coherent states of a single oscillator, and the tapped (half-oscillator)
// state built by the method of images.

#include <complex>
#include <cstddef>
#include <vector>

namespace wavesearch {

struct CoherentState {
  std::complex<double> alpha{0.0, 0.0};
  double omega = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  /// Accumulated phase: -omega t / 2 from free evolution, +pi per tap.
  double global_phase = 0.0;

  /// Throws unless every oscillator constant is positive and finite.
  void validate() const;
};

struct Expectations {
  double x = 0.0;
  double p = 0.0;
  double dx = 0.0;  // sqrt(hbar / (2 m omega))
  double dp = 0.0;  // sqrt(m hbar omega / 2)
  double energy = 0.0;
};

CoherentState evolve_coherent(const CoherentState& state, double dt);
Expectations expectations(const CoherentState& state);

/// Gaussian packet centred at <x> with plane-wave factor exp(i x <p> / hbar),
/// times exp(i global_phase).
std::complex<double> wavepacket_at(const CoherentState& state, double x);

/// Elastic reflection: alpha -> -alpha and a sign flip of the wavefunction.
CoherentState tap_coherent(const CoherentState& state);

/// C (|alpha> - |-alpha>) with C = (1 - exp(-2|alpha|^2))^(-1/2).
struct TappedCoherentState {
  CoherentState base;
  double normalization = 1.0;
};

TappedCoherentState tapped_state(const CoherentState& state);
TappedCoherentState tapped_state(std::complex<double> alpha);

/// Both image components evolve freely; the node at x = 0 is preserved.
TappedCoherentState evolve_tapped(const TappedCoherentState& state, double dt);

std::complex<double> tapped_wavefunction_at(const TappedCoherentState& state, double x);

/// Number-basis coefficients c_n = C e^{-|a|^2/2} a^n / sqrt(n!) (1 - (-1)^n),
/// truncated once |a|^n / sqrt(n!) has peaked and dropped below 1e-16.
std::vector<std::complex<double>> number_coefficients(const TappedCoherentState& state);

/// Coherent-state coefficients e^{-|a|^2/2} a^n / sqrt(n!), same truncation.
std::vector<std::complex<double>> number_coefficients(const CoherentState& state);

}  // namespace wavesearch
