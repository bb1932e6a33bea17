#pragma once

// N identical unit oscillators coupled through springs to one big oscillator.
// Natural units: small mass m = 1, small spring k = 1.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wavesearch {

enum class Family { A, B };

/// Tuned family A has period 4*pi and is tapped every 2*pi; family B has
/// period 2*pi (translation mode removed) and is tapped every pi.
double tap_interval(Family family) noexcept;
double free_period(Family family) noexcept;

class OscillatorParams {
 public:
  static constexpr double small_mass = 1.0;
  static constexpr double small_spring = 1.0;

  /// Validates N >= 2, M > 0, K >= 0, damping >= 0 (all finite).
  OscillatorParams(std::size_t n_items, double big_mass, double big_spring,
                   double damping = 0.0);

  std::size_t n_items() const noexcept { return n_items_; }
  double big_mass() const noexcept { return big_mass_; }
  double big_spring() const noexcept { return big_spring_; }
  double damping() const noexcept { return damping_; }

  OscillatorParams with_damping(double gamma) const;

  friend bool operator==(const OscillatorParams&, const OscillatorParams&) = default;

 private:
  std::size_t n_items_;
  double big_mass_;
  double big_spring_;
  double damping_;
};

/// Masses and springs without the natural-unit restriction. Used by the
/// numeric integrator for scaled and detuned variants.
struct GeneralizedSystem {
  std::vector<double> small_masses;
  std::vector<double> small_springs;
  double big_mass = 1.0;
  double big_spring = 0.0;
  double damping = 0.0;  // velocity decay rate, same for every degree of freedom

  static GeneralizedSystem from(const OscillatorParams& params);

  std::size_t n_items() const noexcept { return small_masses.size(); }
  /// Throws on length mismatch or non-positive masses/springs.
  void validate() const;
};

struct SpectralData {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double omega_t = 1.0;
  /// Coefficients (c_Y, c_ybar) of e_pm = c_Y * Y + c_ybar * ybar.
  std::array<double, 2> mode_plus{};
  std::array<double, 2> mode_minus{};
};

struct PhaseSpaceState {
  double big_pos = 0.0;
  double big_vel = 0.0;
  std::vector<double> small_pos;
  std::vector<double> small_vel;
  double time = 0.0;

  std::size_t n_items() const noexcept { return small_pos.size(); }
  double mean_pos() const;
  double mean_vel() const;
  /// Length mismatch or non-finite entries throw.
  void validate() const;
};

/// Reduced coordinates: Y = sqrt(M) X, ybar = sqrt(N) xbar, y_t = x_t - xbar,
/// plus the residuals r_i = x_i - xbar for i != t (in index order, N-1 values).
struct ModeState {
  std::size_t target = 0;
  double Y = 0.0, Y_dot = 0.0;
  double ybar = 0.0, ybar_dot = 0.0;
  double y_t = 0.0, y_t_dot = 0.0;
  std::vector<double> residual_pos;
  std::vector<double> residual_vel;
  double time = 0.0;
};

struct EnergyLedger {
  double big_kinetic = 0.0;
  double big_potential = 0.0;
  double register_kinetic = 0.0;
  double register_potential = 0.0;  // coupling springs (x_i - X)
  double total = 0.0;

  double big() const noexcept { return big_kinetic + big_potential; }
  double register_energy() const noexcept { return register_kinetic + register_potential; }
};

enum class InitialKind { uniform, translation_free };

OscillatorParams family_params(Family family, int p, std::size_t n_items);

/// Eigenfrequencies of the (Y, ybar) block. omega_minus is computed from the
/// product identity so K = 0 gives exactly zero.
SpectralData spectral(const OscillatorParams& params);

ModeState to_modes(const PhaseSpaceState& state, const OscillatorParams& params,
                   std::size_t target);
PhaseSpaceState from_modes(const ModeState& modes, const OscillatorParams& params);

/// Zero displacements, all small velocities A. translation_free additionally
/// sets the big velocity to -(N/M) A and requires K = 0.
PhaseSpaceState initial_conditions(InitialKind kind, double amplitude,
                                   const OscillatorParams& params);

/// Upper bound on target energy amplification,
/// [N xbar_dot^2 + N/(N-1) (x_t_dot - xbar_dot)^2] / x_t_dot^2.
double max_gain(const PhaseSpaceState& state, std::size_t target);

/// Same bound for a set of simultaneously tapped targets: the energy held by
/// the span of {targets, uniform-over-rest} over the initial target energy.
/// Reduces to the single-target formula for one target.
double max_gain(const PhaseSpaceState& state, std::span<const std::size_t> targets);

EnergyLedger total_energy(const PhaseSpaceState& state, const OscillatorParams& params);
EnergyLedger total_energy(const PhaseSpaceState& state, const GeneralizedSystem& system);

/// Largest spring extension: |x_i - X| over i, and |X| when the big oscillator
/// is anchored (K > 0). Taps are only defined where this vanishes.
double max_spring_extension(const PhaseSpaceState& state, bool big_spring_anchored);

}  // namespace wavesearch
