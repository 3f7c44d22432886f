#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zemtwist/errors.hpp"
#include "zemtwist_cli/commands.hpp"
#include "zemtwist_cli/scenario_io.hpp"

using namespace zemtwist;
using namespace zemtwist::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "zemtwist_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_json(const fs::path& dir, const json& doc) {
  const fs::path p = dir / "scenario.json";
  std::ofstream(p) << doc.dump(2);
  return p;
}

int invoke(std::vector<std::string> args, std::string* stdoutText = nullptr) {
  args.insert(args.begin(), "zemtwist");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (stdoutText) *stdoutText = out.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> data_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  return cells;
}

}  // namespace

TEST(ScenarioIo, EmptyDocumentGivesDefaults) {
  EXPECT_EQ(parse_scenario(json::object()), ScenarioConfig{});
}

TEST(ScenarioIo, ZeroAmplitudeDisablesManeuver) {
  const ScenarioConfig sc = parse_scenario(json::parse(R"({"maneuver": {"amplitude_g": 0}})"));
  EXPECT_EQ(sc.maneuver.amplitude, 0.0);
  EXPECT_EQ(target_command(0.2, sc.maneuver), 0.0);
}

TEST(ScenarioIo, NegativeStepNamesDt) {
  try {
    parse_scenario(json::parse(R"({"integrator": {"dt": -1}})"));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("dt"), std::string::npos);
  }
}

TEST(ScenarioIo, UnknownKeysAreErrors) {
  EXPECT_THROW(parse_scenario(json::parse(R"({"integrater": {}})")), ConfigError);
  EXPECT_THROW(parse_scenario(json::parse(R"({"uav": {"speed": 380}})")), ConfigError);
  EXPECT_THROW(parse_scenario(json::parse(R"({"uav": {"speed_mps": "fast"}})")), ConfigError);
  try {
    parse_scenario(json::parse(R"({"uav": {"sped_mps": 1}, "integrator": {"dt": -1}})"));
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("uav.sped_mps"), std::string::npos);
    EXPECT_NE(msg.find("dt"), std::string::npos);
  }
}

TEST(ScenarioIo, EmitParseRoundTrip) {
  EXPECT_EQ(parse_scenario(emit_scenario(ScenarioConfig{})), ScenarioConfig{});
  EXPECT_EQ(emit_scenario(ScenarioConfig{})["uav"]["delta_max_deg"], 30.0);

  // Random documents in boundary units; whatever parse produces must survive
  // emit and parse again unchanged.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    json doc;
    doc["geometry"] = {{"range_m", 1000.0 + 4000.0 * u(rng)},
                       {"los_deg", 20.0 * u(rng)},
                       {"heading_error_deg", 10.0 * u(rng)}};
    doc["uav"] = {{"L_alpha_mps2", 1000.0 + 300.0 * u(rng)},
                  {"delta_max_deg", 20.0 + 10.0 * u(rng)},
                  {"delta_rate_max_dps", 20.0 + 30.0 * u(rng)},
                  {"accel_max_g", 30.0 + 10.0 * u(rng)}};
    doc["target"] = {{"tau_s", 0.05 + 0.15 * u(rng)}};
    doc["controller"] = {{"mode", "tsmc"}, {"gamma", 0.1 + u(rng)}, {"omega_bar", 100.0 * u(rng)}};
    doc["maneuver"] = {{"period_s", 1.0 + u(rng)}, {"phase_s", u(rng)}, {"amplitude_g", 20.0 * u(rng)}};
    doc["uncertainty"] = {{"seed", rng()}};
    doc["integrator"] = {{"dt", 1e-4 + 1e-3 * u(rng)}};
    doc["plant"] = {{"uav", {{"M_alpha_ps2", -200.0 - 60.0 * u(rng)}}},
                    {"target", {{"tau_s", 0.05 + 0.15 * u(rng)}}}};
    const ScenarioConfig sc = parse_scenario(doc);
    ASSERT_TRUE(sc.plantCoeffs);
    EXPECT_EQ(parse_scenario(emit_scenario(sc)), sc) << doc.dump();
  }
}

TEST(ScenarioIo, ManifestHashIgnoresWallClock) {
  json a = {{"tool", "zemtwist"}, {"wall_clock_s", 1.0}};
  json b = {{"tool", "zemtwist"}, {"wall_clock_s", 2.0}, {"manifest_hash", "x"}};
  EXPECT_EQ(manifest_hash(a), manifest_hash(b));
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Cli, RunWritesTraceAndManifest) {
  const fs::path dir = scratch("run");
  std::string text;
  ASSERT_EQ(invoke({"run", "--mode", "atsmc", "--out", dir.string()}, &text), kExitOk);
  EXPECT_NE(text.find("miss_distance_m"), std::string::npos);
  const auto rows = data_lines(dir / "trace_atsmc.csv");
  ASSERT_GE(rows.size(), 1001u);
  EXPECT_EQ(split(rows[0]).size(), 25u);
  EXPECT_EQ(split(rows[0])[0], "t_s");
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["schema_version"], kManifestSchemaVersion);
  EXPECT_EQ(manifest["manifest_hash"], manifest_hash(manifest));
  EXPECT_NE(slurp(dir / "trace_atsmc.csv").find(manifest["manifest_hash"].get<std::string>()),
            std::string::npos);
}

TEST(Cli, BadConfigExitsOne) {
  const fs::path dir = scratch("bad");
  const fs::path cfg = write_json(dir, json::parse(R"({"integrator": {"dt": -1}})"));
  EXPECT_EQ(invoke({"run", "--scenario", cfg.string(), "--out", (dir / "o").string()}), kExitConfig);
  EXPECT_EQ(invoke({"validate", "--scenario", (dir / "missing.json").string()}), kExitConfig);
  EXPECT_EQ(invoke({"run", "--mode", "fast"}), kExitConfig);
}

TEST(Cli, ValidateAcceptsDefaults) {
  const fs::path dir = scratch("validate");
  const fs::path cfg = write_json(dir, json::object());
  EXPECT_EQ(invoke({"validate", "--scenario", cfg.string()}), kExitOk);
}

TEST(Cli, CoarseStepDivergesWithExitTwo) {
  const fs::path dir = scratch("diverge");
  EXPECT_EQ(invoke({"run", "--dt", "0.5", "--out", dir.string()}), kExitDiverged);
  EXPECT_TRUE(fs::exists(dir / "trace_atsmc.csv"));
}

TEST(Cli, CompareWritesThreeTracesAndSummary) {
  const fs::path dir = scratch("compare");
  ASSERT_EQ(invoke({"compare", "--out", dir.string()}), kExitOk);
  for (const char* m : {"smc", "tsmc", "atsmc"})
    EXPECT_TRUE(fs::exists(dir / (std::string("trace_") + m + ".csv"))) << m;
  const auto rows = data_lines(dir / "compare_summary.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0],
            "mode,miss_m,intercept_time_s,terminal_zem_overshoot_m,canard_reversals,"
            "max_abs_delta_deg,beta_integral_rad_s,termination");
  const auto tsmc = split(rows[2]);
  const auto atsmc = split(rows[3]);
  ASSERT_EQ(tsmc[0], "tsmc");
  ASSERT_EQ(atsmc[0], "atsmc");
  EXPECT_LE(std::stod(atsmc[3]), std::stod(tsmc[3]));
}

TEST(Cli, MonteCarloIsReproducible) {
  const fs::path a = scratch("mc_a");
  const fs::path b = scratch("mc_b");
  const fs::path cfg = write_json(a, json::parse(R"({"geometry": {"range_m": 1500}})"));
  const std::vector<std::string> common = {"montecarlo", "--scenario", cfg.string(),
                                           "--n", "4", "--seed", "5"};
  auto with_out = [&](const fs::path& out) {
    auto args = common;
    args.push_back("--out");
    args.push_back(out.string());
    return args;
  };
  ASSERT_EQ(invoke(with_out(a / "out")), kExitOk);
  ASSERT_EQ(invoke(with_out(b / "out")), kExitOk);
  for (const char* f : {"mc_runs.csv", "mc_stats.csv", "mc_coefficients.csv"}) {
    EXPECT_EQ(slurp(a / "out" / f), slurp(b / "out" / f)) << f;
  }

  const auto coeffs = data_lines(a / "out" / "mc_coefficients.csv");
  ASSERT_EQ(coeffs.size(), 5u);
  EXPECT_EQ(split(coeffs[0]).size(), 7u);
  for (std::size_t i = 1; i < coeffs.size(); ++i) {
    const auto cells = split(coeffs[i]);
    ASSERT_EQ(cells.size(), 7u);
    for (const auto& c : cells) EXPECT_TRUE(std::isfinite(std::stod(c))) << c;
  }
  const auto stats = data_lines(a / "out" / "mc_stats.csv");
  EXPECT_EQ(stats.size(), 4u);
  EXPECT_NE(slurp(a / "out" / "mc_stats.csv").find("# manifest_hash"), std::string::npos);
}
