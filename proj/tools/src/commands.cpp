#include "zemtwist_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"

#include "zemtwist/errors.hpp"
#include "zemtwist_cli/scenario_io.hpp"

#ifndef ZEMTWIST_VERSION
#define ZEMTWIST_VERSION "0.0.0"
#endif

namespace zemtwist::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError({"cannot write " + path.string()});
  return f;
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError({"cannot create output directory " + dir.string()});
}

json base_manifest(const char* command, const ScenarioConfig& sc) {
  json m;
  m["schema_version"] = kManifestSchemaVersion;
  m["tool"] = "zemtwist";
  m["tool_version"] = ZEMTWIST_VERSION;
  m["command"] = command;
  m["scenario"] = emit_scenario(sc);
  return m;
}

std::string finalize_manifest(json& m, const fs::path& dir, double wallClock) {
  const std::string hash = manifest_hash(m);
  m["manifest_hash"] = hash;
  m["wall_clock_s"] = wallClock;
  std::ofstream f = open_output(dir / "manifest.json");
  f << m.dump(2) << '\n';
  return hash;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_delta(const Trace& tr) {
  double worst = 0.0;
  for (const auto& s : tr.samples) worst = std::max(worst, std::abs(s.delta));
  return worst;
}

std::string trace_name(Mode mode) { return "trace_" + std::string(to_string(mode)) + ".csv"; }

void report_warnings(const ScenarioConfig& sc, std::ostream& err) {
  for (const auto& w : sc.warnings()) err << "warning: " << w << '\n';
}

// Shared error mapping for every verb.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputDomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

const char* kTraceColumns =
    "t_s,xM_m,zM_m,xT_m,zT_m,gammaM_rad,gammaT_rad,alpha_rad,q_radps,theta_rad,delta_rad,aT_mps2,"
    "r_m,lambda_rad,Vr_mps,Vlambda_mps,tgo_s,zem_m,sigma_dot_mps,beta_rad,delta_cmd_rad,"
    "aT_cmd_mps2,u_eq_rad,u_D_rad,aMN_mps2";

const char* kTraceUnits = "s,m,m,m,m,rad,rad,rad,rad/s,rad,rad,m/s^2,m,rad,m/s,m/s,s,m,m/s,rad,rad,"
                          "m/s^2,rad,rad,m/s^2";

}  // namespace

ScenarioConfig load_scenario(const Options& opt) {
  ScenarioConfig sc = opt.scenario ? parse_scenario_file(*opt.scenario)
                                   : parse_scenario(json::object());
  if (opt.dt) sc.integrator.dt = *opt.dt;
  if (opt.mode) sc.mode = *opt.mode;
  if (opt.seed) sc.uncertainty.seed = *opt.seed;
  sc.validate();
  return sc;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string manifest_hash(const json& manifest) {
  json copy = manifest;
  copy.erase("manifest_hash");
  copy.erase("wall_clock_s");
  return fnv1a_hex(copy.dump());
}

void write_trace_csv(const fs::path& path, const Trace& trace, const std::string& manifestHash) {
  std::ofstream f = open_output(path);
  f << "# zemtwist trace\n";
  f << "# manifest_hash: " << manifestHash << '\n';
  f << "# mode: " << to_string(trace.mode) << '\n';
  f << "# dt_s: " << num(trace.dt) << '\n';
  f << "# termination: " << to_string(trace.terminal.reason) << '\n';
  f << "# miss_distance_m: " << num(trace.terminal.missDistance) << '\n';
  f << "# intercept_time_s: " << num(trace.terminal.interceptTime) << '\n';
  f << "# units: " << kTraceUnits << '\n';
  f << kTraceColumns << '\n';
  for (const auto& s : trace.samples) {
    const EngagementState& x = s.state;
    const double row[] = {s.t,        x.xM,       x.zM,          x.xT,       x.zT,
                          x.gammaM,   x.gammaT,   x.alpha,       x.q,        x.theta,
                          x.delta,    x.aT,       s.geom.r,      s.geom.lambda,
                          s.geom.Vr,  s.geom.Vlambda, s.geom.tgo, s.zem,     s.sigmaDot,
                          s.beta,     s.deltaCmd, s.aTcmd,       s.uEq,      s.uD,
                          s.aMN};
    bool first = true;
    for (double v : row) {
      if (!first) f << ',';
      f << num(v);
      first = false;
    }
    f << '\n';
  }
}

int cmd_validate(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig sc = load_scenario(opt);
    report_warnings(sc, err);
    out << "scenario valid\n";
    return kExitOk;
  });
}

int cmd_run(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig sc = load_scenario(opt);
    report_warnings(sc, err);
    prepare_out_dir(opt.out);

    const Trace tr = run_engagement(sc);
    const std::string file = trace_name(sc.mode);

    json m = base_manifest("run", sc);
    m["modes"] = {std::string(to_string(sc.mode))};
    m["seed"] = sc.uncertainty.seed;
    m["outputs"] = {file};
    const std::string hash = finalize_manifest(m, opt.out, seconds_since(t0));
    write_trace_csv(opt.out / file, tr, hash);

    const double terminalSigma = tr.samples.empty() ? 0.0 : tr.samples.back().zem;
    out << "mode               " << to_string(sc.mode) << '\n';
    out << "termination        " << to_string(tr.terminal.reason) << " (" << tr.terminal.detail
        << ")\n";
    out << "miss_distance_m    " << num(tr.terminal.missDistance) << '\n';
    out << "intercept_time_s   " << num(tr.terminal.interceptTime) << '\n';
    out << "max_abs_delta_deg  " << num(max_abs_delta(tr) / kDegToRad) << '\n';
    out << "terminal_sigma_m   " << num(terminalSigma) << '\n';
    out << "samples            " << tr.samples.size() << '\n';
    out << "trace              " << (opt.out / file).string() << '\n';
    out << "manifest_hash      " << hash << '\n';
    if (tr.alphaWarning) err << "warning: |alpha| exceeded 0.5 rad\n";
    if (tr.terminal.reason == TerminationReason::Diverged) {
      err << "error: numerical divergence: " << tr.terminal.detail << '\n';
      return kExitDiverged;
    }
    return kExitOk;
  });
}

int cmd_compare(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig sc = load_scenario(opt);
    report_warnings(sc, err);
    prepare_out_dir(opt.out);

    const std::vector<Mode> modes{Mode::Smc, Mode::Tsmc, Mode::Atsmc};
    std::vector<Trace> traces;
    for (Mode mode : modes) traces.push_back(run_engagement(sc, mode));

    json m = base_manifest("compare", sc);
    m["seed"] = sc.uncertainty.seed;
    json files = json::array();
    for (Mode mode : modes) {
      m["modes"].push_back(std::string(to_string(mode)));
      files.push_back(trace_name(mode));
    }
    files.push_back("compare_summary.csv");
    m["outputs"] = files;
    const std::string hash = finalize_manifest(m, opt.out, seconds_since(t0));

    std::ofstream summary = open_output(opt.out / "compare_summary.csv");
    summary << "# zemtwist compare summary\n";
    summary << "# manifest_hash: " << hash << '\n';
    summary << "# units: -,m,s,m,count,deg,rad*s,-\n";
    const char* header =
        "mode,miss_m,intercept_time_s,terminal_zem_overshoot_m,canard_reversals,"
        "max_abs_delta_deg,beta_integral_rad_s,termination";
    summary << header << '\n';
    out << header << '\n';

    bool diverged = false;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const Trace& tr = traces[i];
      write_trace_csv(opt.out / trace_name(modes[i]), tr, hash);
      const std::string row = std::string(to_string(modes[i])) + ',' +
                              num(tr.terminal.missDistance) + ',' +
                              num(tr.terminal.interceptTime) + ',' +
                              num(terminal_zem_overshoot(tr)) + ',' +
                              std::to_string(canard_reversal_count(tr)) + ',' +
                              num(max_abs_delta(tr) / kDegToRad) + ',' + num(beta_integral(tr)) +
                              ',' + std::string(to_string(tr.terminal.reason));
      summary << row << '\n';
      out << row << '\n';
      diverged = diverged || tr.terminal.reason == TerminationReason::Diverged;
    }
    if (diverged) {
      err << "error: numerical divergence in at least one mode\n";
      return kExitDiverged;
    }
    return kExitOk;
  });
}

int cmd_montecarlo(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig sc = load_scenario(opt);
    report_warnings(sc, err);
    if (opt.n == 0) throw ConfigError({"n must be >= 1"});
    prepare_out_dir(opt.out);

    std::vector<Mode> modes{Mode::Smc, Mode::Tsmc, Mode::Atsmc};
    if (opt.mode) modes = {*opt.mode};
    const std::uint64_t seed = sc.uncertainty.seed;
    const Campaign c = monte_carlo(sc, opt.n, seed, modes, opt.threads);

    json m = base_manifest("montecarlo", sc);
    m["seed"] = seed;
    m["n"] = opt.n;
    for (Mode mode : modes) m["modes"].push_back(std::string(to_string(mode)));
    m["outputs"] = {"mc_runs.csv", "mc_stats.csv", "mc_coefficients.csv"};
    const std::string hash = finalize_manifest(m, opt.out, seconds_since(t0));

    std::ofstream runs = open_output(opt.out / "mc_runs.csv");
    runs << "# zemtwist monte carlo runs\n# manifest_hash: " << hash << '\n';
    runs << "# units: -,-,-,s,m,s,-,m,deg,count,rad*s,-\n";
    runs << "mode,index,seed,phase_s,miss_m,intercept_time_s,termination,"
            "terminal_zem_overshoot_m,max_abs_delta_deg,canard_reversals,beta_integral_rad_s,"
            "alpha_warning\n";
    for (const auto& mc : c.modes) {
      for (const auto& r : mc.runs) {
        runs << to_string(mc.mode) << ',' << r.index << ',' << c.draws[r.index].seed << ','
             << num(c.draws[r.index].phase) << ',' << num(r.missDistance) << ','
             << num(r.interceptTime) << ',' << to_string(r.reason) << ',' << num(r.zemOvershoot)
             << ',' << num(r.maxAbsDelta / kDegToRad) << ',' << r.canardReversals << ','
             << num(r.betaIntegral) << ',' << (r.alphaWarning ? 1 : 0) << '\n';
      }
    }

    std::ofstream stats = open_output(opt.out / "mc_stats.csv");
    stats << "# zemtwist monte carlo statistics (diverged runs excluded)\n# manifest_hash: "
          << hash << '\n';
    stats << "# units: -,count,count,count,m,m,m,m,m,m,m,m,count\n";
    const char* header =
        "mode,runs,completed,diverged,mean_miss_m,median_miss_m,std_miss_m,max_miss_m,q90_miss_m,"
        "q95_miss_m,mean_terminal_zem_overshoot_m,completion_rate,mean_canard_reversals";
    stats << header << '\n';
    out << header << '\n';
    for (const auto& mc : c.modes) {
      const CampaignStats& s = mc.stats;
      const std::string row =
          std::string(to_string(mc.mode)) + ',' + std::to_string(s.runs) + ',' +
          std::to_string(s.completed) + ',' + std::to_string(s.diverged) + ',' + num(s.meanMiss) +
          ',' + num(s.medianMiss) + ',' + num(s.stdMiss) + ',' + num(s.maxMiss) + ',' +
          num(s.q90) + ',' + num(s.q95) + ',' + num(s.meanZemOvershoot) + ',' +
          num(s.completion_rate()) + ',' + num(s.meanReversals);
      stats << row << '\n';
      out << row << '\n';
    }

    std::ofstream coeffs = open_output(opt.out / "mc_coefficients.csv");
    coeffs << "# zemtwist sampled plant coefficients\n# manifest_hash: " << hash << '\n';
    coeffs << "# units: -,m/s^2,m/s^2,1/s^2,1/s,1/s^2,s\n";
    coeffs << "index,L_alpha_mps2,L_delta_mps2,M_alpha_ps2,M_q_ps,M_delta_ps2,tau_T_s\n";
    for (std::size_t i = 0; i < c.draws.size(); ++i) {
      const VehicleCoeffs& p = c.draws[i].plant;
      coeffs << i << ',' << num(p.Lalpha) << ',' << num(p.Ldelta) << ',' << num(p.Malpha) << ','
             << num(p.Mq) << ',' << num(p.Mdelta) << ',' << num(p.tauT) << '\n';
    }
    return kExitOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planar UAV/target integrated guidance and control simulator"};
  app.require_subcommand(1);

  Options opt;
  std::string scenario;
  std::string mode;
  std::string outDir = opt.out.string();
  double dt = 0.0;
  std::uint64_t seed = 0;

  std::vector<CLI::Option*> dtFlags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "Scenario JSON file (defaults when omitted)");
    dtFlags.push_back(sub->add_option("--dt", dt, "Integration step override, s"));
    sub->add_option("--mode", mode, "Controller: smc, tsmc or atsmc");
  };
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  add_common(validate);
  auto* run = app.add_subcommand("run", "Single engagement");
  add_common(run);
  run->add_option("--out", outDir, "Output directory");
  auto* compare = app.add_subcommand("compare", "SMC, TSMC and ATSMC on the same scenario");
  add_common(compare);
  compare->add_option("--out", outDir, "Output directory");
  auto* mc = app.add_subcommand("montecarlo", "Paired Monte Carlo campaign");
  add_common(mc);
  mc->add_option("--out", outDir, "Output directory");
  mc->add_option("--n", opt.n, "Runs per mode");
  CLI::Option* seedFlag = mc->add_option("--seed", seed, "Campaign seed (defaults to the scenario seed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* active = app.get_subcommands().front();
  if (!scenario.empty()) opt.scenario = scenario;
  for (const CLI::Option* flag : dtFlags) {
    if (flag->count() > 0) opt.dt = dt;
  }
  if (seedFlag->count() > 0) opt.seed = seed;
  opt.out = outDir;
  if (!mode.empty()) {
    opt.mode = parse_mode(mode);
    if (!opt.mode) {
      err << "error: --mode must be one of smc, tsmc, atsmc\n";
      return kExitConfig;
    }
  }
  if (const char* env = std::getenv("ZEMTWIST_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') opt.threads = static_cast<unsigned>(v);
  }

  if (active == validate) return cmd_validate(opt, out, err);
  if (active == run) return cmd_run(opt, out, err);
  if (active == compare) return cmd_compare(opt, out, err);
  return cmd_montecarlo(opt, out, err);
}

}  // namespace zemtwist::cli
