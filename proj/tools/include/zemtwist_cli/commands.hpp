// Command-line verbs. Each returns the process exit code.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "zemtwist/sim.hpp"

namespace zemtwist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDiverged = 2;

inline constexpr int kManifestSchemaVersion = 1;

struct Options {
  std::optional<std::filesystem::path> scenario;  ///< defaults when absent
  std::optional<Mode> mode;
  std::size_t n = 100;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
  std::optional<double> dt;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Scenario file plus command-line overrides, validated.
ScenarioConfig load_scenario(const Options& opt);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

/// Manifest hash over everything except the hash itself and the wall-clock
/// duration.
std::string manifest_hash(const nlohmann::json& manifest);

void write_trace_csv(const std::filesystem::path& path, const Trace& trace,
                     const std::string& manifestHash);

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_run(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_compare(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_montecarlo(const Options& opt, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a verb.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zemtwist::cli
