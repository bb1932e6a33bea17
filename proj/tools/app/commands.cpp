#include "app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <system_error>

#include "app/output.hpp"
#include "wavesearch/error.hpp"
#include "wavesearch/experiments.hpp"
#include "wavesearch/quantum_coherent.hpp"
#include "wavesearch/search_core.hpp"

namespace wavesearch::app {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Writer {
  fs::path dir;
  std::string stem;
  CommandResult result;

  void table(const Table& t, const std::string& suffix = "") {
    const fs::path path = dir / (stem + suffix + ".csv");
    write_file(path, t.to_csv());
    result.files.push_back(path);
  }

  CommandResult finish(const RunConfig& config, json results) {
    json echo = to_json(config);
    echo.erase("output_dir");
    const fs::path path = dir / (stem + "_summary.json");
    result.summary = {{"command", config.command},
                      {"action", config.action},
                      {"seed", config.seed},
                      {"config", echo},
                      {"results", std::move(results)}};
    json outputs = json::array();
    for (const auto& f : result.files) outputs.push_back(f.filename().string());
    outputs.push_back(path.filename().string());
    result.summary["outputs"] = outputs;
    write_file(path, format_json(result.summary));
    result.files.push_back(path);
    return std::move(result);
  }
};

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::size_t n_of(const RunConfig& c) { return static_cast<std::size_t>(*c.n); }

std::uint64_t queries_of(const RunConfig& c) {
  return c.q ? *c.q : default_queries(n_of(c), c.target.size());
}

CommandResult run_grover(const RunConfig& c, Writer w) {
  const std::size_t n = n_of(c);
  const std::uint64_t q = queries_of(c);
  const GroverRun run = grover_iterate(n, c.target, q);

  Table t{{"q", "overlap", "closed_form"}, {}};
  for (std::size_t i = 0; i < run.overlap_trace.size(); ++i) {
    t.rows.push_back({static_cast<double>(i), run.overlap_trace[i],
                      closed_form_overlap(n, i, c.target.size())});
  }
  w.table(t);

  json results = {{"n_items", n},
                  {"n_targets", c.target.size()},
                  {"theta", rotation_angle(n, c.target.size())},
                  {"queries", q},
                  {"final_overlap", run.overlap_trace.back()}};
  if (c.target.size() == 1) {
    const QueryPlan plan = optimal_queries(n);
    results["q_optimal"] = plan.q_optimal;
    results["predicted_overlap"] = plan.predicted_overlap;
    results["exact"] = plan.exact;
    const auto trials = static_cast<std::size_t>(c.trials);
    results["classical"] = {
        {"trials", c.trials},
        {"memoryless_expected", classical_baseline(n, false)},
        {"memoryless_simulated", simulate_classical_search(n, false, trials, c.seed)},
        {"with_memory_expected", classical_baseline(n, true)},
        {"with_memory_simulated", simulate_classical_search(n, true, trials, c.seed)}};
  } else {
    results["q_optimal"] = default_queries(n, c.target.size());
  }
  return w.finish(c, std::move(results));
}

RunOptions run_options(const RunConfig& c) {
  RunOptions o;
  o.integrator = c.integrator;
  o.step = c.step;
  o.samples_per_interval = c.samples_per_interval;
  if (c.gamma > 0.0) o.tap_tolerance = std::numeric_limits<double>::infinity();
  return o;
}

json gain_json(const GainReport& g) {
  return {{"max_gain", optional_number(g.max_gain)},
          {"realized_gain", optional_number(g.realized_gain)},
          {"peak_gain", optional_number(g.peak_gain)},
          {"peak_time", g.peak_time},
          {"stop_time", g.stop_time}};
}

double max_energy_drift(const Trajectory& t) {
  if (t.empty()) return 0.0;
  const double e0 = t.samples.front().energy.total;
  double worst = 0.0;
  for (const auto& s : t.samples) worst = std::max(worst, std::abs(s.energy.total - e0));
  return e0 > 0.0 ? worst / e0 : worst;
}

CommandResult run_wave(const RunConfig& c, Writer w) {
  const std::size_t n = n_of(c);
  const std::uint64_t q = queries_of(c);

  if (c.action == "random-stop") {
    const RandomStopResult r = random_stop_gain(c.family, c.p, n, c.target,
                                                static_cast<std::size_t>(c.trials), c.seed,
                                                c.cycles);
    return w.finish(c, {{"mean_fraction", r.mean_fraction},
                        {"max_fraction", r.max_fraction},
                        {"ratio", r.ratio},
                        {"grid_size", r.grid_size},
                        {"trials", c.trials}});
  }

  if (c.action == "reverse") {
    const Trajectory t = run_reverse(c.family, c.p, n, c.target.front(), c.amplitude, q,
                                     run_options(c));
    w.table(trajectory_table(t, n));
    std::vector<double> fractions;
    double ke = 0.0;
    for (double v : t.back().state.small_vel) ke += v * v;
    for (double v : t.back().state.small_vel) fractions.push_back(ke > 0.0 ? v * v / ke : 0.0);
    return w.finish(c, {{"queries", q},
                        {"final_target_fraction", t.back().target_fraction},
                        {"final_kinetic_fractions", fractions},
                        {"max_energy_drift", max_energy_drift(t)}});
  }

  const OscillatorParams params = family_params(c.family, c.p, n).with_damping(c.gamma);
  const InitialKind kind = c.initial.value_or(
      c.family == Family::A ? InitialKind::uniform : InitialKind::translation_free);
  const PhaseSpaceState start = initial_conditions(kind, c.amplitude, params);
  const TapSchedule schedule = TapSchedule::for_family(c.family, c.target, q, c.variant);
  const SearchResult run = run_schedule(start, params, schedule, run_options(c));
  w.table(trajectory_table(run.trajectory, n));
  return w.finish(c, {{"queries", q},
                      {"final_time", run.trajectory.back().state.time},
                      {"final_target_fraction", run.trajectory.back().target_fraction},
                      {"predicted_fraction", closed_form_overlap(n, q, c.target.size())},
                      {"gain", gain_json(run.gain)},
                      {"max_energy_drift", max_energy_drift(run.trajectory)}});
}

CoherentState coherent_of(const RunConfig& c) {
  CoherentState s{{c.alpha_re, c.alpha_im}, c.omega, c.mass, c.hbar};
  s.validate();
  return s;
}

double frame_step(const RunConfig& c) {
  return c.dt ? *c.dt : 2.0 * std::numbers::pi / c.omega / static_cast<double>(c.frames);
}

CommandResult run_quantum(const RunConfig& c, Writer w) {
  const CoherentState base = coherent_of(c);
  const double dt = frame_step(c);

  if (c.action == "evolve") {
    Table t{{"t", "alpha_re", "alpha_im", "global_phase", "x", "p", "energy"}, {}};
    for (std::uint32_t k = 0; k <= c.frames; ++k) {
      const double time = dt * k;
      const CoherentState s = evolve_coherent(base, time);
      const Expectations e = expectations(s);
      t.rows.push_back({time, s.alpha.real(), s.alpha.imag(), s.global_phase, e.x, e.p, e.energy});
    }
    w.table(t);
    const Expectations e0 = expectations(base);
    return w.finish(c, {{"dx", e0.dx}, {"dp", e0.dp}, {"energy", e0.energy}, {"dt", dt}});
  }

  const Expectations e0 = expectations(base);
  const double reach = 2.0 * e0.dx * std::abs(base.alpha) + 10.0 * e0.dx;
  const double lo = c.x_min.value_or(-reach);
  const double hi = c.x_max.value_or(reach);
  const std::optional<TappedCoherentState> tapped =
      c.tapped ? std::optional(tapped_state(base)) : std::nullopt;

  Table t{{"frame", "t", "x", "re_psi", "im_psi", "abs2_psi"}, {}};
  double node = 0.0;
  for (std::uint32_t k = 0; k <= c.frames; ++k) {
    const double time = dt * k;
    const auto psi_at = [&](double x) {
      return tapped ? tapped_wavefunction_at(evolve_tapped(*tapped, time), x)
                    : wavepacket_at(evolve_coherent(base, time), x);
    };
    node = std::max(node, std::abs(psi_at(0.0)));
    for (std::uint32_t i = 0; i < c.points; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / (c.points - 1);
      const std::complex<double> psi = psi_at(x);
      t.rows.push_back({static_cast<double>(k), time, x, psi.real(), psi.imag(), std::norm(psi)});
    }
  }
  w.table(t);
  json results = {{"dt", dt}, {"frames", c.frames}, {"x_min", lo}, {"x_max", hi},
                  {"dx", e0.dx}, {"max_abs_psi_at_0", node}};
  if (tapped) results["normalization"] = tapped->normalization;
  return w.finish(c, std::move(results));
}

ExperimentConfig experiment_base(const RunConfig& c) {
  ExperimentConfig e;
  e.n_items = n_of(c);
  e.family = c.family;
  e.p = c.p;
  e.target = c.target.front();
  e.amplitude = c.amplitude;
  e.queries = queries_of(c);
  e.step = c.step;
  e.seed = c.seed;
  return e;
}

CommandResult run_experiment(const RunConfig& c, Writer w) {
  if (c.action == "rate") {
    const std::vector<double> focused = c.grid.empty() ? std::vector{c.focused_energy} : c.grid;
    Table t{{"focused_energy", "enhancement"}, {}};
    for (double f : focused) {
      t.rows.push_back({f, rate_enhancement({c.barrier_energy, c.thermal_energy, f})});
    }
    w.table(t);
    return w.finish(c, {{"barrier_energy", c.barrier_energy},
                        {"thermal_energy", c.thermal_energy},
                        {"enhancement", t.rows.back().back()}});
  }

  SweepSpec sweep;
  sweep.base = experiment_base(c);

  if (c.action == "damping") {
    sweep.parameter = SweepParameter::damping;
    sweep.grid = c.grid.empty() ? std::vector{0.0, 1e-3, 1e-2, 2e-2} : c.grid;
    Table t{{"gamma", "realized_gain", "frequency", "frequency_shift"}, {}};
    for (const auto& r : damping_sweep(sweep)) {
      t.rows.push_back({r.gamma, r.realized_gain, r.frequency, r.frequency_shift});
    }
    w.table(t);
    return w.finish(c, {{"rows", t.rows.size()}, {"queries", sweep.base.queries}});
  }

  if (c.action == "detuning") {
    sweep.parameter = SweepParameter::detune;
    sweep.grid = c.grid.empty() ? std::vector{1.0, 1.1, 1.5, 2.0, 4.0, 8.0} : c.grid;
    Table t{{"factor", "realized_gain", "gain_fraction"}, {}};
    for (const auto& r : detuning_sweep(sweep)) {
      t.rows.push_back({r.factor, r.realized_gain, r.gain_fraction});
    }
    w.table(t);
    return w.finish(c, {{"rows", t.rows.size()}, {"queries", sweep.base.queries}});
  }

  const ScalingReport r = scaling_check(c.scale, sweep.base);
  Table t{{"oscillator", "scale", "final_energy"}, {}};
  for (std::size_t i = 0; i < r.per_oscillator_scales.size(); ++i) {
    t.rows.push_back({static_cast<double>(i), r.per_oscillator_scales[i],
                      r.per_oscillator_final_energy[i]});
  }
  w.table(t);
  return w.finish(c, {{"scale", r.scale},
                      {"global_max_deviation", r.global_max_deviation},
                      {"argmax_oscillator", r.argmax_oscillator},
                      {"target_is_argmax", r.target_is_argmax}});
}

}  // namespace

std::uint64_t default_queries(std::size_t n_items, std::size_t n_targets) {
  if (n_targets == 1) return optimal_queries(n_items).q_optimal;
  const double theta = rotation_angle(n_items, n_targets);
  const double star = std::max(0.0, (std::numbers::pi / (2.0 * theta) - 1.0) / 2.0);
  const auto lo = static_cast<std::uint64_t>(std::floor(star));
  const auto hi = static_cast<std::uint64_t>(std::ceil(star));
  return closed_form_overlap(n_items, hi, n_targets) > closed_form_overlap(n_items, lo, n_targets)
             ? hi
             : lo;
}

CommandResult run_command(const RunConfig& config, const fs::path& output_dir) {
  validate(config);
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw Error(ErrorKind::io, output_dir.string() + ": " + ec.message());

  std::string stem = config.command;
  if (!config.action.empty()) stem += "_" + config.action;
  std::replace(stem.begin(), stem.end(), '-', '_');
  Writer w{output_dir, stem, {}};

  if (config.command == "grover") return run_grover(config, std::move(w));
  if (config.command == "wave") return run_wave(config, std::move(w));
  if (config.command == "quantum") return run_quantum(config, std::move(w));
  return run_experiment(config, std::move(w));
}

}  // namespace wavesearch::app
