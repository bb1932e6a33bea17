#pragma once

// Abstract amplitude-amplification search on a real N-dimensional state.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wavesearch {

/// Real amplitudes over N items, kept at unit norm.
class AmplitudeVector {
 public:
  /// Takes ownership of `amplitudes`; throws if empty or not unit norm
  /// (tolerance 1e-12).
  explicit AmplitudeVector(std::vector<double> amplitudes);

  /// Rescales arbitrary nonzero values to unit norm.
  static AmplitudeVector normalized(std::vector<double> values);

  /// Basis vector |i> of an N-item space.
  static AmplitudeVector basis(std::size_t n_items, std::size_t index);

  std::size_t n_items() const noexcept { return amplitudes_.size(); }
  std::span<const double> amplitudes() const noexcept { return amplitudes_; }
  double operator[](std::size_t i) const { return amplitudes_[i]; }

  /// |<t|state>|^2 summed over `targets`.
  double probability(std::span<const std::size_t> targets) const;
  double probability(std::size_t target) const;

  double norm_squared() const noexcept;

  friend bool operator==(const AmplitudeVector&, const AmplitudeVector&) = default;

 private:
  AmplitudeVector() = default;
  std::vector<double> amplitudes_;
};

struct QueryPlan {
  std::size_t n_items = 0;
  double theta = 0.0;              // arcsin(1/sqrt(N)), radians
  std::uint64_t q_optimal = 0;
  double predicted_overlap = 0.0;  // sin^2((2q+1) theta)
  bool exact = false;              // (2q+1) theta == pi/2 within 1e-12
};

struct GroverRun {
  AmplitudeVector state;
  /// Target probability measured on the state after q' iterations, q' = 0..q.
  std::vector<double> overlap_trace;
};

AmplitudeVector uniform_state(std::size_t n_items);

/// Oracle U_t: negates the target amplitude.
AmplitudeVector reflect_target(const AmplitudeVector& state, std::size_t target);
/// Multi-target oracle: negates every listed amplitude. Duplicates are rejected.
AmplitudeVector reflect_targets(const AmplitudeVector& state,
                                std::span<const std::size_t> targets);

/// Reflection in the mean, a_i -> 2*mean - a_i (the operator -U_s).
AmplitudeVector reflect_mean(const AmplitudeVector& state);

/// (-U_s U_t)^q applied to the uniform state.
GroverRun grover_iterate(std::size_t n_items, std::size_t target, std::uint64_t q);
GroverRun grover_iterate(std::size_t n_items, std::span<const std::size_t> targets,
                         std::uint64_t q);

/// Closed-form overlap sin^2((2q+1) theta) with theta = arcsin(sqrt(k/N)).
double closed_form_overlap(std::size_t n_items, std::uint64_t q,
                           std::size_t n_targets = 1);

/// Rotation angle per half-step, arcsin(sqrt(k/N)).
double rotation_angle(std::size_t n_items, std::size_t n_targets = 1);

/// Integer query count maximizing the final overlap; ties go to the smaller count.
QueryPlan optimal_queries(std::size_t n_items);

/// Expected classical query count: N without memory, (N+1)/2 with memory.
double classical_baseline(std::size_t n_items, bool with_memory);

/// Brute-force random-probe search; returns the mean number of probes needed
/// to hit a uniformly drawn target. Deterministic for a fixed seed.
double simulate_classical_search(std::size_t n_items, bool with_memory,
                                 std::size_t trials, std::uint64_t seed);

}  // namespace wavesearch
