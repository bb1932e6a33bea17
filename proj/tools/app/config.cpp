#include "app/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "wavesearch/error.hpp"

namespace wavesearch::app {
namespace {

using nlohmann::json;

[[noreturn]] void fail(ErrorKind kind, const std::string& key, const std::string& what) {
  throw Error(kind, key + ": " + what);
}

std::string show(const json& value) { return value.dump(); }

std::uint64_t as_unsigned(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    fail(ErrorKind::invalid_argument, key, "must be >= 0 (got " + show(v) + ")");
  }
  fail(ErrorKind::invalid_argument, key, "expected a non-negative integer (got " + show(v) + ")");
}

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) {
    fail(ErrorKind::invalid_argument, key, "expected a number (got " + show(v) + ")");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(ErrorKind::invalid_argument, key, "must be finite");
  return d;
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) {
    fail(ErrorKind::invalid_argument, key, "expected a string (got " + show(v) + ")");
  }
  return v.get<std::string>();
}

std::uint32_t as_u32(const json& v, const std::string& key) {
  const std::uint64_t u = as_unsigned(v, key);
  if (u > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorKind::invalid_argument, key, "must be <= 4294967295 (got " + show(v) + ")");
  }
  return static_cast<std::uint32_t>(u);
}

void require_positive(double v, const std::string& key) {
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << "must be > 0 (got " << v << ")";
    fail(ErrorKind::invalid_argument, key, os.str());
  }
}

void require_at_least(std::uint64_t v, std::uint64_t bound, const std::string& key) {
  if (v < bound) {
    fail(ErrorKind::invalid_argument, key,
         "must be >= " + std::to_string(bound) + " (got " + std::to_string(v) + ")");
  }
}

Family parse_family(const std::string& s) {
  if (s == "A") return Family::A;
  if (s == "B") return Family::B;
  fail(ErrorKind::invalid_argument, "family", "expected \"A\" or \"B\" (got \"" + s + "\")");
}

Integrator parse_integrator(const std::string& s) {
  if (s == "exact") return Integrator::exact;
  if (s == "numeric") return Integrator::numeric;
  fail(ErrorKind::invalid_argument, "integrator",
       "expected \"exact\" or \"numeric\" (got \"" + s + "\")");
}

InitialKind parse_initial(const std::string& s) {
  if (s == "uniform") return InitialKind::uniform;
  if (s == "translation_free") return InitialKind::translation_free;
  fail(ErrorKind::invalid_argument, "initial",
       "expected \"uniform\" or \"translation_free\" (got \"" + s + "\")");
}

TapVariant parse_variant(const std::string& s) {
  if (s == "standard") return TapVariant::standard;
  if (s == "complement") return TapVariant::complement;
  fail(ErrorKind::invalid_argument, "variant",
       "expected \"standard\" or \"complement\" (got \"" + s + "\")");
}

const char* name(Family f) { return f == Family::A ? "A" : "B"; }
const char* name(Integrator i) { return i == Integrator::exact ? "exact" : "numeric"; }
const char* name(InitialKind k) {
  return k == InitialKind::uniform ? "uniform" : "translation_free";
}
const char* name(TapVariant v) { return v == TapVariant::standard ? "standard" : "complement"; }

using Setter = std::function<void(RunConfig&, const json&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"command", [](RunConfig& c, const json& v) { c.command = as_string(v, "command"); }},
      {"action", [](RunConfig& c, const json& v) { c.action = as_string(v, "action"); }},
      {"n", [](RunConfig& c, const json& v) { c.n = as_unsigned(v, "n"); }},
      {"family",
       [](RunConfig& c, const json& v) { c.family = parse_family(as_string(v, "family")); }},
      {"p",
       [](RunConfig& c, const json& v) {
         const std::uint64_t p = as_unsigned(v, "p");
         require_at_least(p, 1, "p");
         if (p > 1000000) fail(ErrorKind::invalid_argument, "p", "must be <= 1000000");
         c.p = static_cast<int>(p);
       }},
      {"target",
       [](RunConfig& c, const json& v) {
         c.target.clear();
         if (v.is_array()) {
           for (const auto& t : v) c.target.push_back(as_unsigned(t, "target"));
           if (c.target.empty()) fail(ErrorKind::invalid_argument, "target", "must not be empty");
         } else {
           c.target.push_back(as_unsigned(v, "target"));
         }
       }},
      {"amplitude", [](RunConfig& c, const json& v) { c.amplitude = as_double(v, "amplitude"); }},
      {"q", [](RunConfig& c, const json& v) { c.q = as_unsigned(v, "q"); }},
      {"gamma", [](RunConfig& c, const json& v) { c.gamma = as_double(v, "gamma"); }},
      {"step", [](RunConfig& c, const json& v) { c.step = as_double(v, "step"); }},
      {"seed", [](RunConfig& c, const json& v) { c.seed = as_unsigned(v, "seed"); }},
      {"trials", [](RunConfig& c, const json& v) { c.trials = as_unsigned(v, "trials"); }},
      {"integrator",
       [](RunConfig& c, const json& v) {
         c.integrator = parse_integrator(as_string(v, "integrator"));
       }},
      {"samples_per_interval",
       [](RunConfig& c, const json& v) {
         c.samples_per_interval = as_u32(v, "samples_per_interval");
       }},
      {"initial",
       [](RunConfig& c, const json& v) { c.initial = parse_initial(as_string(v, "initial")); }},
      {"variant",
       [](RunConfig& c, const json& v) { c.variant = parse_variant(as_string(v, "variant")); }},
      {"cycles", [](RunConfig& c, const json& v) { c.cycles = as_u32(v, "cycles"); }},
      {"alpha_re", [](RunConfig& c, const json& v) { c.alpha_re = as_double(v, "alpha_re"); }},
      {"alpha_im", [](RunConfig& c, const json& v) { c.alpha_im = as_double(v, "alpha_im"); }},
      {"omega", [](RunConfig& c, const json& v) { c.omega = as_double(v, "omega"); }},
      {"mass", [](RunConfig& c, const json& v) { c.mass = as_double(v, "mass"); }},
      {"hbar", [](RunConfig& c, const json& v) { c.hbar = as_double(v, "hbar"); }},
      {"tapped",
       [](RunConfig& c, const json& v) {
         if (!v.is_boolean()) {
           fail(ErrorKind::invalid_argument, "tapped", "expected true or false (got " + show(v) + ")");
         }
         c.tapped = v.get<bool>();
       }},
      {"frames", [](RunConfig& c, const json& v) { c.frames = as_u32(v, "frames"); }},
      {"dt", [](RunConfig& c, const json& v) { c.dt = as_double(v, "dt"); }},
      {"points", [](RunConfig& c, const json& v) { c.points = as_u32(v, "points"); }},
      {"x_min", [](RunConfig& c, const json& v) { c.x_min = as_double(v, "x_min"); }},
      {"x_max", [](RunConfig& c, const json& v) { c.x_max = as_double(v, "x_max"); }},
      {"grid",
       [](RunConfig& c, const json& v) {
         if (!v.is_array()) {
           fail(ErrorKind::invalid_argument, "grid", "expected an array of numbers");
         }
         c.grid.clear();
         for (const auto& g : v) c.grid.push_back(as_double(g, "grid"));
       }},
      {"scale", [](RunConfig& c, const json& v) { c.scale = as_double(v, "scale"); }},
      {"barrier_energy",
       [](RunConfig& c, const json& v) { c.barrier_energy = as_double(v, "barrier_energy"); }},
      {"thermal_energy",
       [](RunConfig& c, const json& v) { c.thermal_energy = as_double(v, "thermal_energy"); }},
      {"focused_energy",
       [](RunConfig& c, const json& v) { c.focused_energy = as_double(v, "focused_energy"); }},
      {"output_dir",
       [](RunConfig& c, const json& v) { c.output_dir = as_string(v, "output_dir"); }},
  };
  return table;
}

bool needs_register(const RunConfig& c) {
  return c.command == "grover" || c.command == "wave" ||
         (c.command == "experiment" && c.action != "rate");
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) {
    throw Error(ErrorKind::invalid_argument, "config: expected a JSON object");
  }
  RunConfig config;
  const auto& table = setters();
  for (const auto& [key, value] : doc.items()) {
    const auto it = table.find(key);
    if (it == table.end()) fail(ErrorKind::invalid_argument, key, "unknown key");
    it->second(config, value);
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, path + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::invalid_argument, path + ": malformed JSON (" + e.what() + ")");
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  if (!c.action.empty()) j["action"] = c.action;
  if (c.n) j["n"] = *c.n;
  j["family"] = name(c.family);
  j["p"] = c.p;
  if (c.target.size() == 1) {
    j["target"] = c.target.front();
  } else if (!c.target.empty()) {
    j["target"] = c.target;
  }
  j["amplitude"] = c.amplitude;
  if (c.q) j["q"] = *c.q;
  j["gamma"] = c.gamma;
  j["step"] = c.step;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["integrator"] = name(c.integrator);
  j["samples_per_interval"] = c.samples_per_interval;
  if (c.initial) j["initial"] = name(*c.initial);
  j["variant"] = name(c.variant);
  j["cycles"] = c.cycles;
  j["alpha_re"] = c.alpha_re;
  j["alpha_im"] = c.alpha_im;
  j["omega"] = c.omega;
  j["mass"] = c.mass;
  j["hbar"] = c.hbar;
  j["tapped"] = c.tapped;
  j["frames"] = c.frames;
  if (c.dt) j["dt"] = *c.dt;
  j["points"] = c.points;
  if (c.x_min) j["x_min"] = *c.x_min;
  if (c.x_max) j["x_max"] = *c.x_max;
  j["grid"] = c.grid;
  j["scale"] = c.scale;
  j["barrier_energy"] = c.barrier_energy;
  j["thermal_energy"] = c.thermal_energy;
  j["focused_energy"] = c.focused_energy;
  if (!c.output_dir.empty()) j["output_dir"] = c.output_dir;
  return j;
}

void validate(const RunConfig& c) {
  static const std::map<std::string, std::vector<std::string>> actions = {
      {"grover", {""}},
      {"wave", {"run", "reverse", "random-stop"}},
      {"quantum", {"evolve", "frames"}},
      {"experiment", {"damping", "scaling", "detuning", "rate"}},
  };
  if (c.command.empty()) fail(ErrorKind::invalid_argument, "command", "missing required field");
  const auto it = actions.find(c.command);
  if (it == actions.end()) {
    fail(ErrorKind::invalid_argument, "command",
         "expected grover, wave, quantum or experiment (got \"" + c.command + "\")");
  }
  bool known = false;
  for (const auto& a : it->second) known = known || a == c.action;
  if (!known) {
    std::string list;
    for (const auto& a : it->second) list += (list.empty() ? "" : ", ") + a;
    fail(ErrorKind::invalid_argument, "action",
         c.action.empty() ? "missing required field for " + c.command + " (one of " + list + ")"
                          : "\"" + c.action + "\" is not valid for " + c.command);
  }

  if (needs_register(c)) {
    if (!c.n) fail(ErrorKind::invalid_argument, "n", "missing required field");
    if (c.target.empty()) fail(ErrorKind::invalid_argument, "target", "missing required field");
  }
  if (c.n) {
    require_at_least(*c.n, 2, "n");
    if (*c.n > 100000000) fail(ErrorKind::invalid_argument, "n", "must be <= 100000000");
    for (std::size_t t : c.target) {
      if (t >= *c.n) {
        fail(ErrorKind::index_out_of_range, "target",
             "must be < n = " + std::to_string(*c.n) + " (got " + std::to_string(t) + ")");
      }
    }
  }
  const bool single = c.command == "experiment" || (c.command == "wave" && c.action == "reverse");
  if (single && c.target.size() > 1) {
    fail(ErrorKind::invalid_combination, "target",
         "exactly one target allowed for " + c.command + " " + c.action);
  }

  require_positive(c.amplitude, "amplitude");
  require_positive(c.step, "step");
  if (c.gamma < 0.0) fail(ErrorKind::invalid_argument, "gamma", "must be >= 0");
  if (c.gamma > 0.0 && !(c.command == "wave" && c.action == "run")) {
    fail(ErrorKind::invalid_combination, "gamma", "only used by wave run");
  }
  require_at_least(c.samples_per_interval, 1, "samples_per_interval");
  require_at_least(c.cycles, 1, "cycles");
  if ((c.command == "wave" && c.action == "random-stop") || c.command == "grover") {
    require_at_least(c.trials, 1, "trials");
  }

  require_positive(c.omega, "omega");
  require_positive(c.mass, "mass");
  require_positive(c.hbar, "hbar");
  require_at_least(c.frames, 1, "frames");
  if (c.dt) require_positive(*c.dt, "dt");
  require_at_least(c.points, 2, "points");
  if (c.x_min.has_value() != c.x_max.has_value()) {
    fail(ErrorKind::invalid_argument, c.x_min ? "x_max" : "x_min", "x_min and x_max go together");
  }
  if (c.x_min && !(*c.x_min < *c.x_max)) {
    fail(ErrorKind::invalid_argument, "x_max", "must be > x_min");
  }
  if (c.command == "quantum" && c.tapped && c.alpha_re == 0.0 && c.alpha_im == 0.0) {
    fail(ErrorKind::degenerate_state, "alpha", "tapped state needs alpha != 0");
  }

  require_positive(c.scale, "scale");
  require_positive(c.barrier_energy, "barrier_energy");
  require_positive(c.thermal_energy, "thermal_energy");
  if (c.focused_energy < 0.0) fail(ErrorKind::invalid_argument, "focused_energy", "must be >= 0");
}

}  // namespace wavesearch::app
