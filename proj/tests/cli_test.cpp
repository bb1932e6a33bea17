#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "app/cli.hpp"
#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/output.hpp"
#include "wavesearch/error.hpp"

namespace wavesearch::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wavesearch_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ErrorKind parse_error_kind(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error for " << doc.dump();
  return ErrorKind::io;
}

int cli(const std::vector<std::string>& args, std::string* err_out = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (err_out) *err_out = err.str();
  return code;
}

TEST(ParseConfig, FillsDefaults) {
  const RunConfig c = parse_config(json::parse(R"({"command":"wave","action":"run","n":4,"target":2,"q":1})"));
  EXPECT_EQ(c.family, Family::B);
  EXPECT_EQ(c.p, 1);
  EXPECT_EQ(c.amplitude, 1.0);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.step, 1e-3);
  EXPECT_EQ(c.target, std::vector<std::size_t>{2});
  EXPECT_EQ(c.q, 1u);
}

TEST(ParseConfig, RejectsBadInput) {
  EXPECT_EQ(parse_error_kind(json::parse(R"({"command":"wave","action":"run","n":4,"target":9})")),
            ErrorKind::index_out_of_range);
  try {
    parse_config(json::parse(R"({"command":"wave","action":"run","n":4,"target":2,"frobnicate":1})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("frobnicate"), std::string::npos);
  }
  EXPECT_EQ(parse_error_kind(json::parse(R"({"command":"wave","action":"run","target":2})")),
            ErrorKind::invalid_argument);
  EXPECT_EQ(parse_error_kind(json::parse(R"({"command":"wave","action":"run","n":4})")),
            ErrorKind::invalid_argument);
  EXPECT_EQ(parse_error_kind(json::parse(R"({"command":"wave","action":"fly","n":4,"target":0})")),
            ErrorKind::invalid_argument);
  EXPECT_EQ(parse_error_kind(json::parse(R"({"command":"grover","n":4,"target":0,"step":-1})")),
            ErrorKind::invalid_argument);
  EXPECT_EQ(parse_error_kind(json::parse(R"({"command":"grover","n":"4","target":0})")),
            ErrorKind::invalid_argument);
  EXPECT_EQ(parse_error_kind(json::parse(R"({"command":"grover","n":1,"target":0})")),
            ErrorKind::invalid_argument);
  EXPECT_EQ(parse_error_kind(json::parse(R"([1,2])")), ErrorKind::invalid_argument);
}

TEST(ParseConfig, RoundTrip) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    RunConfig c;
    c.command = "wave";
    c.action = trial % 2 ? "run" : "random-stop";
    c.n = 2 + rng() % 100;
    c.target = {static_cast<std::size_t>(rng() % *c.n)};
    c.family = trial % 3 ? Family::A : Family::B;
    c.p = 1 + static_cast<int>(rng() % 4);
    c.amplitude = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
    c.step = std::uniform_real_distribution<double>(1e-4, 1e-2)(rng);
    if (trial % 4 == 0) c.q = rng() % 20;
    c.seed = rng();
    c.grid = {0.1 * trial, 1.0 / 3.0};
    if (trial % 5 == 0) c.dt = 0.7;
    const json doc = to_json(c);
    EXPECT_EQ(parse_config(doc), c);
    EXPECT_EQ(parse_config(json::parse(doc.dump())), c);
  }
}

TEST(Output, FloatFormatAndEmptyTrajectory) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  const Table t = trajectory_table(Trajectory{}, 2);
  EXPECT_EQ(t.to_csv(), "t,X,Xdot,x_1,x_2,xdot_1,xdot_2,E_total,E_big,E_register,target_fraction\n");
}

TEST(RunCommand, GroverSummary) {
  const fs::path dir = fresh_dir("grover");
  RunConfig c = parse_config(json::parse(R"({"command":"grover","n":100,"target":7})"));
  const CommandResult r = run_command(c, dir);
  EXPECT_EQ(r.summary["results"]["q_optimal"], 7);
  EXPECT_NEAR(r.summary["results"]["predicted_overlap"].get<double>(), 0.9953, 1e-3);
  EXPECT_EQ(r.summary["seed"], 0);
  EXPECT_EQ(r.files.size(), 2u);
}

TEST(RunCommand, WaveAndFrames) {
  const fs::path dir = fresh_dir("wave");
  const CommandResult w = run_command(
      parse_config(json::parse(R"({"command":"wave","action":"run","n":4,"target":1,"q":1})")),
      dir);
  EXPECT_NEAR(w.summary["results"]["final_target_fraction"].get<double>(), 1.0, 1e-9);

  const CommandResult f = run_command(
      parse_config(json::parse(R"({"command":"quantum","action":"frames","alpha_re":-2})")), dir);
  std::istringstream csv(slurp(f.files.front()));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "frame,t,x,re_psi,im_psi,abs2_psi");
  std::size_t zero_rows = 0;
  while (std::getline(csv, line)) {
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
    if (v[2] == 0.0) {
      ++zero_rows;
      EXPECT_LT(std::hypot(v[3], v[4]), 1e-12);
    }
  }
  EXPECT_EQ(zero_rows, 65u);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = fresh_dir("codes");
  std::string err;
  EXPECT_EQ(cli({"--definitely-not-a-flag"}, &err), kExitUsage);
  EXPECT_EQ(err.find('\n'), err.size() - 1);
  EXPECT_EQ(json::parse(err)["error"], "usage");
  EXPECT_EQ(cli({}), kExitUsage);
  EXPECT_EQ(cli({"wave", "run", "--n", "4", "--target", "9", "-o", dir.string()}, &err),
            kExitValidation);
  EXPECT_EQ(json::parse(err)["kind"], "index_out_of_range");
  const fs::path cfg = dir.parent_path() / "wavesearch_cli_test_bad.json";
  {
    std::ofstream(cfg) << R"({"command":"wave","action":"run","n":4,"target":0,"q":2,"family":"A","samples_per_interval":1})";
  }
  EXPECT_EQ(cli({"--config", cfg.string(), "-o", dir.string()}), kExitOk);
  EXPECT_EQ(cli({"quantum", "frames", "--alpha-re", "0", "-o", dir.string()}, &err),
            kExitNumerical);
  EXPECT_EQ(json::parse(err)["kind"], "degenerate_state");
  const std::string blocker = (dir / "blocker").string();
  fs::create_directories(dir);
  std::ofstream(blocker) << "x";
  EXPECT_EQ(cli({"grover", "--n", "4", "--target", "0", "-o", blocker + "/sub"}, &err), kExitIo);
}

TEST(Cli, FlagsOverrideFile) {
  const fs::path dir = fresh_dir("override");
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"command":"grover","n":16,"target":3,"seed":9})";
  ASSERT_EQ(cli({"--config", cfg.string(), "--n", "64", "-o", dir.string()}), kExitOk);
  const json s = json::parse(slurp(dir / "grover_summary.json"));
  EXPECT_EQ(s["config"]["n"], 64);
  EXPECT_EQ(s["config"]["seed"], 9);
  EXPECT_EQ(s["results"]["q_optimal"], 6);
}

TEST(Cli, OutputDirFromEnvironment) {
  const fs::path dir = fresh_dir("env");
  ::setenv(kOutputDirEnv, dir.c_str(), 1);
  EXPECT_EQ(cli({"experiment", "rate", "--barrier-energy", "5", "--focused-energy", "2"}), kExitOk);
  ::unsetenv(kOutputDirEnv);
  EXPECT_TRUE(fs::exists(dir / "experiment_rate.csv"));
  EXPECT_EQ(slurp(dir / "experiment_rate.csv"),
            "focused_energy,enhancement\n2,7.3890560989306504\n");
}

TEST(Cli, BinaryRerunsAreByteIdentical) {
  const fs::path a = fresh_dir("rerun_a");
  const fs::path b = fresh_dir("rerun_b");
  const std::string base = std::string(WAVESEARCH_CLI_PATH) +
                           " wave random-stop --n 4 --target 0 --trials 2000 --seed 11 -o ";
  ASSERT_EQ(std::system((base + a.string() + " > /dev/null").c_str()), 0);
  ASSERT_EQ(std::system((base + b.string() + " > /dev/null").c_str()), 0);
  EXPECT_EQ(slurp(a / "wave_random_stop_summary.json"), slurp(b / "wave_random_stop_summary.json"));
}

}  // namespace
}  // namespace wavesearch::app
