#include "wavesearch/search_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "wavesearch/error.hpp"

namespace wavesearch {

namespace {

constexpr double kNormTolerance = 1e-12;

void check_size(std::size_t n_items) {
  if (n_items == 0) {
    throw Error(ErrorKind::invalid_argument, "n_items must be >= 1");
  }
}

void check_index(std::size_t index, std::size_t n_items) {
  if (index >= n_items) {
    throw Error(ErrorKind::index_out_of_range,
                "target " + std::to_string(index) + " out of range [0, " +
                    std::to_string(n_items) + ")");
  }
}

// Neumaier-compensated sum; plain summation drifts past the 1e-12 norm
// tolerance for registers of ~10^4 items.
template <typename F>
double compensated_sum(std::span<const double> v, F term) {
  double sum = 0.0;
  double carry = 0.0;
  for (double x : v) {
    const double t = term(x);
    const double next = sum + t;
    carry += std::abs(sum) >= std::abs(t) ? (sum - next) + t : (t - next) + sum;
    sum = next;
  }
  return sum + carry;
}

double sum_of_squares(std::span<const double> v) {
  return compensated_sum(v, [](double a) { return a * a; });
}

}  // namespace

AmplitudeVector::AmplitudeVector(std::vector<double> amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  check_size(amplitudes_.size());
  const double n2 = sum_of_squares(amplitudes_);
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kNormTolerance) {
    throw Error(ErrorKind::invalid_argument,
                "amplitudes are not unit norm (sum of squares " +
                    std::to_string(n2) + ")");
  }
}

AmplitudeVector AmplitudeVector::normalized(std::vector<double> values) {
  check_size(values.size());
  const double n2 = sum_of_squares(values);
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw Error(ErrorKind::degenerate_state, "cannot normalize a zero vector");
  }
  const double scale = 1.0 / std::sqrt(n2);
  for (double& a : values) a *= scale;
  return AmplitudeVector(std::move(values));
}

AmplitudeVector AmplitudeVector::basis(std::size_t n_items, std::size_t index) {
  check_size(n_items);
  check_index(index, n_items);
  std::vector<double> v(n_items, 0.0);
  v[index] = 1.0;
  return AmplitudeVector(std::move(v));
}

double AmplitudeVector::probability(std::span<const std::size_t> targets) const {
  double p = 0.0;
  for (std::size_t t : targets) {
    check_index(t, n_items());
    p += amplitudes_[t] * amplitudes_[t];
  }
  return p;
}

double AmplitudeVector::probability(std::size_t target) const {
  return probability(std::span<const std::size_t>(&target, 1));
}

double AmplitudeVector::norm_squared() const noexcept {
  return sum_of_squares(amplitudes_);
}

AmplitudeVector uniform_state(std::size_t n_items) {
  check_size(n_items);
  return AmplitudeVector(
      std::vector<double>(n_items, 1.0 / std::sqrt(static_cast<double>(n_items))));
}

AmplitudeVector reflect_targets(const AmplitudeVector& state,
                                std::span<const std::size_t> targets) {
  std::vector<double> a(state.amplitudes().begin(), state.amplitudes().end());
  std::vector<bool> seen(a.size(), false);
  for (std::size_t t : targets) {
    check_index(t, a.size());
    if (seen[t]) {
      throw Error(ErrorKind::invalid_argument,
                  "duplicate target " + std::to_string(t));
    }
    seen[t] = true;
    a[t] = -a[t];
  }
  return AmplitudeVector(std::move(a));
}

AmplitudeVector reflect_target(const AmplitudeVector& state, std::size_t target) {
  return reflect_targets(state, std::span<const std::size_t>(&target, 1));
}

AmplitudeVector reflect_mean(const AmplitudeVector& state) {
  const auto in = state.amplitudes();
  const double twice_mean =
      2.0 * compensated_sum(in, [](double a) { return a; }) / static_cast<double>(in.size());
  std::vector<double> out(in.size());
  std::transform(in.begin(), in.end(), out.begin(),
                 [twice_mean](double a) { return twice_mean - a; });
  return AmplitudeVector(std::move(out));
}

GroverRun grover_iterate(std::size_t n_items, std::span<const std::size_t> targets,
                         std::uint64_t q) {
  if (targets.empty()) {
    throw Error(ErrorKind::invalid_argument, "at least one target is required");
  }
  GroverRun run{uniform_state(n_items), {}};
  run.overlap_trace.reserve(q + 1);
  run.overlap_trace.push_back(run.state.probability(targets));
  for (std::uint64_t i = 0; i < q; ++i) {
    run.state = reflect_mean(reflect_targets(run.state, targets));
    run.overlap_trace.push_back(run.state.probability(targets));
  }
  return run;
}

GroverRun grover_iterate(std::size_t n_items, std::size_t target, std::uint64_t q) {
  check_size(n_items);
  check_index(target, n_items);
  return grover_iterate(n_items, std::span<const std::size_t>(&target, 1), q);
}

double rotation_angle(std::size_t n_items, std::size_t n_targets) {
  check_size(n_items);
  if (n_targets == 0 || n_targets > n_items) {
    throw Error(ErrorKind::invalid_argument, "target count must be in [1, N]");
  }
  return std::asin(std::sqrt(static_cast<double>(n_targets) /
                             static_cast<double>(n_items)));
}

double closed_form_overlap(std::size_t n_items, std::uint64_t q, std::size_t n_targets) {
  const double s = std::sin((2.0 * static_cast<double>(q) + 1.0) *
                            rotation_angle(n_items, n_targets));
  return s * s;
}

QueryPlan optimal_queries(std::size_t n_items) {
  check_size(n_items);
  QueryPlan plan;
  plan.n_items = n_items;
  plan.theta = rotation_angle(n_items);

  const double q_real = (std::numbers::pi / (2.0 * plan.theta) - 1.0) / 2.0;
  const auto lo = static_cast<std::uint64_t>(std::max(0.0, std::floor(q_real)));
  const auto hi = static_cast<std::uint64_t>(std::max(0.0, std::ceil(q_real)));
  const double p_lo = closed_form_overlap(n_items, lo);
  const double p_hi = closed_form_overlap(n_items, hi);
  // Ties resolve toward fewer oracle calls.
  if (p_hi > p_lo) {
    plan.q_optimal = hi;
    plan.predicted_overlap = p_hi;
  } else {
    plan.q_optimal = lo;
    plan.predicted_overlap = p_lo;
  }
  const double angle = (2.0 * static_cast<double>(plan.q_optimal) + 1.0) * plan.theta;
  plan.exact = std::abs(angle - std::numbers::pi / 2.0) <= 1e-12;
  if (plan.exact) plan.predicted_overlap = 1.0;
  return plan;
}

double classical_baseline(std::size_t n_items, bool with_memory) {
  check_size(n_items);
  const double n = static_cast<double>(n_items);
  return with_memory ? (n + 1.0) / 2.0 : n;
}

double simulate_classical_search(std::size_t n_items, bool with_memory,
                                 std::size_t trials, std::uint64_t seed) {
  check_size(n_items);
  if (trials == 0) {
    throw Error(ErrorKind::invalid_argument, "trials must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n_items - 1);
  std::vector<std::size_t> pool(n_items);

  std::uint64_t total = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t target = pick(rng);
    std::uint64_t probes = 0;
    if (!with_memory) {
      do {
        ++probes;
      } while (pick(rng) != target);
    } else {
      // Partial Fisher-Yates: each probe draws from the items not yet inspected.
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      for (std::size_t remaining = n_items; remaining > 0; --remaining) {
        ++probes;
        std::uniform_int_distribution<std::size_t> draw(0, remaining - 1);
        const std::size_t k = draw(rng);
        if (pool[k] == target) break;
        pool[k] = pool[remaining - 1];
      }
    }
    total += probes;
  }
  return static_cast<double>(total) / static_cast<double>(trials);
}

}  // namespace wavesearch
