#include "app/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "wavesearch/error.hpp"

namespace wavesearch::app {
namespace {

using nlohmann::json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::mistimed_tap:
    case ErrorKind::undefined_ratio:
    case ErrorKind::degenerate_state:
      return kExitNumerical;
    case ErrorKind::io:
      return kExitIo;
    default:
      return kExitValidation;
  }
}

const char* category(int code) {
  switch (code) {
    case kExitUsage: return "usage";
    case kExitNumerical: return "numerical";
    case kExitIo: return "io";
    default: return "validation";
  }
}

int report(std::ostream& err, int code, const std::string& kind, const std::string& message) {
  err << json{{"error", category(code)}, {"kind", kind}, {"message", message}}.dump() << '\n';
  return code;
}

// Typed flag storage; only flags that were given are copied into the config
// document, so they override file values and nothing else.
struct Flags {
  std::optional<std::uint64_t> n, q, seed, trials;
  std::optional<std::string> family, integrator, initial, variant, output_dir;
  std::optional<std::uint64_t> p, samples_per_interval, cycles, frames, points;
  std::vector<std::size_t> target;
  std::optional<double> amplitude, gamma, step, alpha_re, alpha_im, omega, mass, hbar, dt;
  std::optional<double> x_min, x_max, scale, barrier_energy, thermal_energy, focused_energy;
  std::optional<bool> tapped;
  std::vector<double> grid;

  void add_to(CLI::App& app) {
    app.add_option("--n", n, "Number of items / small oscillators");
    app.add_option("--family", family, "Parameter family: A or B (default B)");
    app.add_option("--p", p, "Family index p >= 1 (default 1)");
    app.add_option("--target", target, "Target index (repeat or comma-separate for several)")
        ->delimiter(',')
        ->allow_extra_args(false);
    app.add_option("--amplitude,-A", amplitude, "Initial velocity amplitude (default 1)");
    app.add_option("--q", q, "Number of queries/taps (default: optimal)");
    app.add_option("--gamma", gamma, "Velocity damping rate for wave run (default 0)");
    app.add_option("--step", step, "Numeric integrator step (default 1e-3)");
    app.add_option("--seed", seed, "Random seed (default 0)");
    app.add_option("--trials", trials, "Monte-Carlo trials (default 10000)");
    app.add_option("--integrator", integrator, "exact or numeric (default exact)");
    app.add_option("--samples-per-interval", samples_per_interval,
                   "Trajectory samples per tap interval (default 1)");
    app.add_option("--initial", initial, "uniform or translation_free");
    app.add_option("--variant", variant, "standard or complement tap");
    app.add_option("--cycles", cycles, "Rotation cycles for random-stop (default 100)");
    app.add_option("--alpha-re", alpha_re, "Re alpha (default -2)");
    app.add_option("--alpha-im", alpha_im, "Im alpha (default 0)");
    app.add_option("--omega", omega, "Oscillator frequency (default 1)");
    app.add_option("--mass", mass, "Oscillator mass (default 1)");
    app.add_option("--hbar", hbar, "Reduced Planck constant (default 1)");
    app.add_option("--tapped", tapped, "Use the tapped (half-oscillator) state (default true)");
    app.add_option("--frames", frames, "Number of frame intervals (default 64)");
    app.add_option("--dt", dt, "Time between frames (default one period / frames)");
    app.add_option("--points", points, "Spatial grid points per frame (default 201)");
    app.add_option("--x-min", x_min, "Left end of the spatial grid");
    app.add_option("--x-max", x_max, "Right end of the spatial grid");
    app.add_option("--grid", grid, "Sweep values, comma-separated")
        ->delimiter(',')
        ->allow_extra_args(false);
    app.add_option("--scale", scale, "Global mass/spring scale for scaling (default 2)");
    app.add_option("--barrier-energy", barrier_energy, "Barrier height for rate (default 1)");
    app.add_option("--thermal-energy", thermal_energy, "kT for rate (default 1)");
    app.add_option("--focused-energy", focused_energy, "Focused energy for rate (default 0)");
    app.add_option("--output-dir,-o", output_dir,
                   std::string("Output directory (default $") + kOutputDirEnv + " or .)");
  }

  template <typename T>
  static void put(json& doc, const char* key, const std::optional<T>& v) {
    if (v) doc[key] = *v;
  }

  void overlay(json& doc) const {
    put(doc, "n", n);
    put(doc, "family", family);
    put(doc, "p", p);
    if (target.size() == 1) doc["target"] = target.front();
    if (target.size() > 1) doc["target"] = target;
    put(doc, "amplitude", amplitude);
    put(doc, "q", q);
    put(doc, "gamma", gamma);
    put(doc, "step", step);
    put(doc, "seed", seed);
    put(doc, "trials", trials);
    put(doc, "integrator", integrator);
    put(doc, "samples_per_interval", samples_per_interval);
    put(doc, "initial", initial);
    put(doc, "variant", variant);
    put(doc, "cycles", cycles);
    put(doc, "alpha_re", alpha_re);
    put(doc, "alpha_im", alpha_im);
    put(doc, "omega", omega);
    put(doc, "mass", mass);
    put(doc, "hbar", hbar);
    put(doc, "tapped", tapped);
    put(doc, "frames", frames);
    put(doc, "dt", dt);
    put(doc, "points", points);
    put(doc, "x_min", x_min);
    put(doc, "x_max", x_max);
    if (!grid.empty()) doc["grid"] = grid;
    put(doc, "scale", scale);
    put(doc, "barrier_energy", barrier_energy);
    put(doc, "thermal_energy", thermal_energy);
    put(doc, "focused_energy", focused_energy);
    put(doc, "output_dir", output_dir);
  }
};

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, path + ": cannot open config file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_argument, path + ": malformed JSON (" + e.what() + ")");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grover search and its coupled-oscillator analogue"};
  app.name("wavesearch");
  app.fallthrough();
  app.require_subcommand(0, 1);

  std::string config_path;
  Flags flags;
  app.add_option("--config,-c", config_path, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  flags.add_to(app);

  auto* grover = app.add_subcommand("grover", "Abstract amplitude amplification");
  auto* wave = app.add_subcommand("wave", "Coupled-oscillator search");
  auto* quantum = app.add_subcommand("quantum", "Coherent and tapped oscillator states");
  auto* experiment = app.add_subcommand("experiment", "Robustness and catalysis sweeps");
  for (const char* a : {"run", "reverse", "random-stop"}) wave->add_subcommand(a);
  for (const char* a : {"evolve", "frames"}) quantum->add_subcommand(a);
  for (const char* a : {"damping", "scaling", "detuning", "rate"}) experiment->add_subcommand(a);
  for (auto* sub : {wave, quantum, experiment}) sub->require_subcommand(0, 1);
  (void)grover;

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report(err, kExitUsage, e.get_name(), e.what());
  }

  try {
    json doc = config_path.empty() ? json::object() : read_json_file(config_path);
    if (!doc.is_object()) throw Error(ErrorKind::invalid_argument, "config: expected a JSON object");

    std::string command;
    std::string action;
    for (const auto* sub : app.get_subcommands()) {
      command = sub->get_name();
      for (const auto* leaf : sub->get_subcommands()) action = leaf->get_name();
    }
    if (!command.empty()) {
      const bool same = doc.contains("command") && doc["command"] == command;
      doc["command"] = command;
      if (!action.empty()) {
        doc["action"] = action;
      } else if (!same) {
        doc.erase("action");
      }
    }
    if (!doc.contains("command")) {
      return report(err, kExitUsage, "missing_command",
                    "give a command (grover, wave, quantum, experiment) or a config with one");
    }
    flags.overlay(doc);

    const RunConfig config = parse_config(doc);
    std::string dir = config.output_dir;
    if (dir.empty()) {
      const char* env = std::getenv(kOutputDirEnv);
      dir = env && *env ? env : ".";
    }

    const auto started = std::chrono::steady_clock::now();
    const CommandResult result = run_command(config, dir);
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - started;

    for (const auto& f : result.files) out << "wrote " << f.string() << '\n';
    out << "wall_time_s " << wall.count() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    return report(err, code, std::string(to_string(e.kind())), e.what());
  } catch (const std::exception& e) {
    return report(err, kExitValidation, "internal", e.what());
  }
}

}  // namespace wavesearch::app
