#include "wavesearch/wave_engine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wavesearch/error.hpp"

namespace wavesearch {
namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const PhaseSpaceState& a, const PhaseSpaceState& b) {
  double m = std::max(std::abs(a.big_pos - b.big_pos), std::abs(a.big_vel - b.big_vel));
  for (std::size_t i = 0; i < a.n_items(); ++i) {
    m = std::max({m, std::abs(a.small_pos[i] - b.small_pos[i]),
                  std::abs(a.small_vel[i] - b.small_vel[i])});
  }
  return m;
}

PhaseSpaceState random_state(std::size_t n, std::mt19937_64& rng, bool at_rest_springs) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PhaseSpaceState s;
  s.big_vel = u(rng);
  if (!at_rest_springs) s.big_pos = u(rng);
  for (std::size_t i = 0; i < n; ++i) {
    s.small_pos.push_back(at_rest_springs ? 0.0 : u(rng));
    s.small_vel.push_back(u(rng));
  }
  return s;
}

TEST(EvolveExact, FreePeriods) {
  const auto a = family_params(Family::A, 1, 6);
  const auto s_a = initial_conditions(InitialKind::uniform, 1.0, a);
  EXPECT_LT(max_diff(evolve_exact(s_a, a, 4.0 * kPi), s_a), 1e-9);

  const auto b = family_params(Family::B, 1, 6);
  const auto s_b = initial_conditions(InitialKind::translation_free, 1.0, b);
  EXPECT_LT(max_diff(evolve_exact(s_b, b, 2.0 * kPi), s_b), 1e-9);

  EXPECT_EQ(max_diff(evolve_exact(s_b, b, 0.0), s_b), 0.0);
  EXPECT_NEAR(evolve_exact(s_b, b, 1.25).time, 1.25, 1e-15);
}

TEST(EvolveExact, RejectsDamping) {
  const auto p = family_params(Family::B, 1, 4).with_damping(1e-3);
  const auto s = initial_conditions(InitialKind::uniform, 1.0, p);
  try {
    evolve_exact(s, p, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unsupported_mode);
  }
}

TEST(EvolveExact, HalfPeriodActsAsReflection) {
  std::mt19937_64 rng(21);
  for (int p = 1; p <= 3; ++p) {
    for (std::size_t n : {2u, 5u, 16u}) {
      // Family A: 2*pi negates the mean velocity, keeps x_t_dot - xbar_dot,
      // and returns the big oscillator to rest.
      const auto pa = family_params(Family::A, p, n);
      auto s = random_state(n, rng, true);
      s.big_vel = 0.0;
      const auto a = evolve_exact(s, pa, 2.0 * kPi);
      EXPECT_NEAR(a.mean_vel(), -s.mean_vel(), 1e-9);
      EXPECT_NEAR(a.big_pos, 0.0, 1e-9);
      EXPECT_NEAR(a.big_vel, 0.0, 1e-9);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(a.small_vel[i] - a.mean_vel(), s.small_vel[i] - s.mean_vel(), 1e-9);
        EXPECT_NEAR(a.small_pos[i], 0.0, 1e-9);
      }
      // Family B: pi keeps the mean velocity and negates deviations.
      const auto pb = family_params(Family::B, p, n);
      const auto tf = random_state(n, rng, true);
      const auto b = evolve_exact(tf, pb, kPi);
      EXPECT_NEAR(b.mean_vel(), tf.mean_vel(), 1e-9);
      EXPECT_NEAR(b.big_vel, tf.big_vel, 1e-9);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(b.small_vel[i] - b.mean_vel(), -(tf.small_vel[i] - tf.mean_vel()), 1e-9);
        EXPECT_NEAR(b.small_pos[i] - b.big_pos, 0.0, 1e-9);
      }
    }
  }
}

TEST(EvolveNumeric, AgreesWithExactOnRandomParams) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mass(0.3, 20.0);
  std::uniform_real_distribution<double> spring(0.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 12;
    const OscillatorParams p(n, mass(rng), trial % 4 == 0 ? 0.0 : spring(rng));
    const auto s = random_state(n, rng, false);
    const auto exact = evolve_exact(s, p, 4.0 * kPi);
    const auto numeric = evolve_numeric(s, p, 4.0 * kPi, 1e-3);
    EXPECT_LT(max_diff(exact, numeric), 1e-6) << "trial " << trial;
    EXPECT_NEAR(numeric.time, exact.time, 1e-12);
  }
}

TEST(EvolveNumeric, EnergyDriftBounded) {
  for (Family f : {Family::A, Family::B}) {
    const auto p = family_params(f, 2, 8);
    std::mt19937_64 rng(4);
    auto s = random_state(8, rng, false);
    const double e0 = total_energy(s, p).total;
    double worst = 0.0;
    integrate_numeric(s, GeneralizedSystem::from(p), 16.0 * kPi, 1e-3,
                      [&](const PhaseSpaceState& st) {
                        worst = std::max(worst, std::abs(total_energy(st, p).total - e0) / e0);
                      });
    EXPECT_LT(worst, 1e-6);
  }
}

TEST(EvolveNumeric, DampedRelativeModeEnvelopeAndFrequency) {
  // Only x_t - xbar is excited: a single uncoupled unit oscillator.
  const double gamma = 1e-3;
  const auto p = family_params(Family::B, 1, 4).with_damping(gamma);
  PhaseSpaceState s;
  s.small_pos.assign(4, 0.0);
  s.small_vel = {0.75, -0.25, -0.25, -0.25};
  for (int k = 1; k <= 10; ++k) {
    const double t = 2.0 * kPi * k;
    const auto out = evolve_numeric(s, p, t, 1e-3);
    const double vt = out.small_vel[0] - out.mean_vel();
    // omega_d = sqrt(1 - gamma^2/4): phase lag at 2 pi k is below 1e-5 rad.
    EXPECT_NEAR(vt, 0.75 * std::exp(-0.5 * gamma * t), 1e-6);
    EXPECT_NEAR(out.mean_vel(), 0.0, 1e-12);
  }
  EXPECT_LT(1.0 - std::sqrt(1.0 - gamma * gamma / 4.0), 1e-5);
}

TEST(EvolveNumeric, Errors) {
  const auto p = family_params(Family::B, 1, 4);
  const auto s = initial_conditions(InitialKind::uniform, 1.0, p);
  EXPECT_THROW(evolve_numeric(s, p, 1.0, 0.0), Error);
  EXPECT_THROW(evolve_numeric(s, p, 1.0, -1e-3), Error);
  EXPECT_EQ(max_diff(evolve_numeric(s, p, 0.0, 1e-3), s), 0.0);
}

TEST(ApplyTap, Examples) {
  PhaseSpaceState s;
  s.small_pos.assign(4, 0.0);
  s.small_vel = {1.0, 1.0, 1.0, 1.0};
  const std::vector<std::size_t> t{2};
  const auto once = apply_tap(s, TapVariant::standard, t, true, 1e-9);
  EXPECT_EQ(once.small_vel, (std::vector<double>{1.0, 1.0, -1.0, 1.0}));
  EXPECT_EQ(apply_tap(once, TapVariant::standard, t, true, 1e-9).small_vel, s.small_vel);
  const auto comp = apply_tap(s, TapVariant::complement, t, true, 1e-9);
  EXPECT_EQ(comp.small_vel, (std::vector<double>{-1.0, -1.0, 1.0, -1.0}));
  const auto p = family_params(Family::A, 1, 4);
  EXPECT_EQ(total_energy(once, p).total, total_energy(s, p).total);
}

TEST(ApplyTap, MistimedCarriesDisplacement) {
  PhaseSpaceState s;
  s.small_pos = {0.0, 0.25, 0.0};
  s.small_vel = {1.0, 1.0, 1.0};
  const std::vector<std::size_t> t{0};
  try {
    apply_tap(s, TapVariant::standard, t, true, 1e-6);
    FAIL();
  } catch (const MistimedTapError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::mistimed_tap);
    EXPECT_DOUBLE_EQ(e.displacement(), 0.25);
  }
  const std::vector<std::size_t> bad{3};
  EXPECT_THROW(apply_tap(s, TapVariant::standard, bad, true), Error);
}

TEST(RunSearch, Examples) {
  const auto four = run_search(Family::B, 1, 4, {2}, 1.0, 1);
  EXPECT_NEAR(four.trajectory.back().target_fraction, 1.0, 1e-6);
  EXPECT_NEAR(four.trajectory.back().state.time, kPi, 1e-15);

  // sin^2(7 asin(1/4)) = 0.9613189697265625
  const auto sixteen = run_search(Family::B, 1, 16, {5}, 1.0, 3);
  EXPECT_NEAR(sixteen.trajectory.back().target_fraction, 0.9613189697265625, 1e-9);

  const auto none = run_search(Family::A, 1, 16, {5}, 1.0, 0);
  ASSERT_EQ(none.trajectory.samples.size(), 1u);
  EXPECT_NEAR(none.trajectory.back().target_fraction, 1.0 / 16.0, 1e-15);
}

TEST(RunSearch, NumericCrossValidation) {
  RunOptions numeric;
  numeric.integrator = Integrator::numeric;
  for (Family f : {Family::A, Family::B}) {
    const auto ex = run_search(f, 1, 16, {1}, 1.0, 3);
    const auto nu = run_search(f, 1, 16, {1}, 1.0, 3, numeric);
    for (std::size_t i = 0; i < ex.trajectory.samples.size(); ++i) {
      EXPECT_NEAR(ex.trajectory.samples[i].target_fraction,
                  nu.trajectory.samples[i].target_fraction, 1e-6);
      EXPECT_LT(max_diff(ex.trajectory.samples[i].state, nu.trajectory.samples[i].state), 1e-6);
    }
  }
}

TEST(RunSearch, FractionsFollowClosedFormAndEnergyIsConserved) {
  for (Family f : {Family::A, Family::B}) {
    for (std::size_t n : {2u, 3u, 8u, 50u}) {
      RunOptions opts;
      opts.samples_per_interval = 5;
      const auto run = run_search(f, 1, n, {n - 1}, 0.8, 20, opts);
      const double e0 = run.trajectory.samples.front().energy.total;
      for (const auto& s : run.trajectory.samples) {
        EXPECT_NEAR(s.energy.total, e0, 1e-9 * e0);
        if (s.tap_instant) {
          EXPECT_NEAR(s.target_fraction, closed_form_overlap(n, s.tap_index), 1e-9);
        }
      }
      for (std::size_t i = 1; i < run.trajectory.samples.size(); ++i) {
        EXPECT_GT(run.trajectory.samples[i].state.time, run.trajectory.samples[i - 1].state.time);
      }
      ASSERT_TRUE(run.gain.max_gain && run.gain.realized_gain && run.gain.peak_gain);
      EXPECT_LE(*run.gain.peak_gain, *run.gain.max_gain + 1e-9);
      EXPECT_NEAR(*run.gain.max_gain, static_cast<double>(n), 1e-12);
    }
  }
}

TEST(RunSearch, FamilyAStaysSynchronizedOverManyPeriods) {
  for (int p = 1; p <= 3; ++p) {
    const auto run = run_search(Family::A, p, 16, {3}, 1.0, 64);
    for (const auto& s : run.trajectory.samples) {
      EXPECT_LT(max_spring_extension(s.state, true), 1e-9);
    }
  }
}

TEST(RunSearch, MultiTargetWithUnchangedFamilyParams) {
  const std::vector<std::size_t> targets{0, 3, 7};
  for (Family f : {Family::A, Family::B}) {
    const auto run = run_search(f, 1, 24, targets, 1.0, 6);
    for (const auto* s : run.trajectory.tap_instants()) {
      EXPECT_NEAR(s->target_fraction, closed_form_overlap(24, s->tap_index, 3), 1e-9);
    }
  }
}

TEST(RunSearch, ComplementVariantFocusesOnUnobstructedOscillator) {
  const auto run = run_search(Family::B, 1, 4, {1}, 1.0, 1, {}, std::nullopt,
                              TapVariant::complement);
  EXPECT_NEAR(run.trajectory.back().target_fraction, 1.0, 1e-9);
}

TEST(RunSearch, WrongScheduleIsMistimed) {
  const auto p = family_params(Family::A, 1, 4);
  TapSchedule sched{kPi, 3, {0}, TapVariant::standard};
  EXPECT_THROW(run_schedule(initial_conditions(InitialKind::uniform, 1.0, p), p, sched),
               MistimedTapError);
}

TEST(VelocityAmplitudeMap, Examples) {
  PhaseSpaceState s;
  s.small_pos.assign(4, 0.0);
  s.small_vel.assign(4, 3.0);
  EXPECT_EQ(velocity_amplitude_map(s), uniform_state(4));
  s.small_vel = {0.0, 0.0, -2.0, 0.0};
  EXPECT_EQ(velocity_amplitude_map(s), AmplitudeVector({0.0, 0.0, -1.0, 0.0}));
  s.small_vel.assign(4, 0.0);
  try {
    velocity_amplitude_map(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_state);
  }
}

TEST(VelocityAmplitudeMap, MatchesAbstractSearchAtEveryTap) {
  for (Family f : {Family::A, Family::B}) {
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
      const std::size_t t = n / 2;
      const auto run = run_search(f, 1, n, {t}, 1.0, 10);
      const auto ref = grover_iterate(n, t, 0);
      AmplitudeVector abstract = uniform_state(n);
      for (const auto* s : run.trajectory.tap_instants()) {
        const auto wave = velocity_amplitude_map(s->state);
        const double sign = wave[t] * abstract[t] >= 0.0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          EXPECT_NEAR(sign * wave[i], abstract[i], 1e-6);
        }
        abstract = reflect_mean(reflect_target(abstract, t));
      }
    }
  }
}

TEST(RunReverse, SpreadsEnergyUniformly) {
  const auto rev = run_reverse(Family::B, 1, 4, 2, 1.0, 1);
  const auto& last = rev.back().state;
  double ke = 0.0;
  for (double v : last.small_vel) ke += v * v;
  for (double v : last.small_vel) EXPECT_NEAR(v * v / ke, 0.25, 1e-6);

  const auto none = run_reverse(Family::A, 1, 4, 2, 1.0, 0);
  EXPECT_NEAR(none.back().target_fraction, 1.0, 1e-15);
}

TEST(RunReverse, RoundTripAfterSearch) {
  const auto params = family_params(Family::B, 1, 4);
  const auto forward = run_search(Family::B, 1, 4, {2}, 1.0, 1);
  const auto back = run_schedule(forward.trajectory.back().state, params,
                                 TapSchedule::for_family(Family::B, {2}, 1));
  const auto& v = back.trajectory.back().state.small_vel;
  double ke = 0.0;
  for (double x : v) ke += x * x;
  for (double x : v) EXPECT_NEAR(x * x / ke, 0.25, 1e-6);
}

TEST(ModeIndependence, ResidualsDoNotTouchReducedCoordinates) {
  std::mt19937_64 rng(17);
  for (Family f : {Family::A, Family::B}) {
    const std::size_t n = 10;
    const std::size_t t = 4;
    const auto params = family_params(f, 1, n);
    for (int trial = 0; trial < 10; ++trial) {
      auto with = random_state(n, rng, true);
      auto without = with;
      // Same xbar_dot and x_t_dot, residuals of the non-targets removed.
      const double rest = (with.mean_vel() * n - with.small_vel[t]) / (n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        if (i != t) without.small_vel[i] = rest;
      }
      const auto sched = TapSchedule::for_family(f, {t}, 12);
      const auto a = run_schedule(with, params, sched);
      const auto b = run_schedule(without, params, sched);
      for (std::size_t k = 0; k < a.trajectory.samples.size(); ++k) {
        const auto& sa = a.trajectory.samples[k].state;
        const auto& sb = b.trajectory.samples[k].state;
        EXPECT_NEAR(sa.big_pos, sb.big_pos, 1e-9);
        EXPECT_NEAR(sa.big_vel, sb.big_vel, 1e-9);
        EXPECT_NEAR(sa.mean_vel(), sb.mean_vel(), 1e-9);
        EXPECT_NEAR(sa.small_vel[t], sb.small_vel[t], 1e-9);
        EXPECT_NEAR(sa.small_pos[t], sb.small_pos[t], 1e-9);
      }
      ASSERT_TRUE(a.gain.peak_gain && a.gain.max_gain);
      EXPECT_LE(*a.gain.peak_gain, *a.gain.max_gain + 1e-9);
    }
  }
}

TEST(RandomStop, AveragesToHalf) {
  const auto r = random_stop_gain(Family::B, 1, 4, {0}, 100000, 2024);
  EXPECT_NEAR(r.ratio, 0.5, 0.01);
  EXPECT_EQ(r.grid_size, 300u);
  EXPECT_EQ(r.ratio, random_stop_gain(Family::B, 1, 4, {0}, 100000, 2024).ratio);

  const auto whole = random_stop_gain(Family::A, 1, 3, {0, 1, 2}, 1000, 1);
  EXPECT_NEAR(whole.ratio, 1.0, 1e-12);
}

TEST(EventDetection, FindsTapInstant) {
  const auto p = family_params(Family::B, 1, 4);
  auto s = initial_conditions(InitialKind::translation_free, 1.0, p);
  const std::vector<std::size_t> t{1};
  s = apply_tap(s, TapVariant::standard, t, false, 1e-12);
  const auto hit = find_zero_displacement_time(s, p, 1, 1.2 * kPi);
  ASSERT_TRUE(hit.has_value());
  const auto at = evolve_exact(s, p, *hit);
  EXPECT_NEAR(at.small_pos[1] - at.big_pos, 0.0, 1e-12);
  EXPECT_LE(*hit, kPi + 1e-9);
}

}  // namespace
}  // namespace wavesearch
