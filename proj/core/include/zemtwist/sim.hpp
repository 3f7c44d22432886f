// Engagement execution: scenario description, fixed-step RK4 propagation,
// the closed guidance/control loop, miss-distance extraction and Monte Carlo
// campaigns.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "zemtwist/control.hpp"
#include "zemtwist/dynamics.hpp"
#include "zemtwist/linmodel.hpp"
#include "zemtwist/zem.hpp"

namespace zemtwist {

struct GeometryConfig {
  double range = 3000.0;         ///< initial range, m
  double lambda0 = 0.0;          ///< initial LOS angle, rad
  double headingError = 5.0 * kDegToRad;  ///< UAV heading offset from the collision course, rad
  double gammaT0 = 0.0;          ///< initial target flight-path angle, rad (0 = head-on)

  friend bool operator==(const GeometryConfig&, const GeometryConfig&) = default;
};

/// Square-wave target acceleration command.
struct ManeuverConfig {
  double period = 1.0;                          ///< Delta T, s
  double phase = 0.0;                           ///< Delta phi, s
  double amplitude = 20.0 * kStandardGravity;   ///< m/s^2

  friend bool operator==(const ManeuverConfig&, const ManeuverConfig&) = default;
};

struct UncertaintyConfig {
  double fraction = 0.2;     ///< 1-sigma relative spread of the aero coefficients
  double clipSigma = 3.0;    ///< draws clamped to +-clipSigma standard deviations
  std::uint64_t seed = 1;
  bool sampleTauT = true;    ///< draw the plant tauT uniformly from [tauTMin, tauTMax]
  double tauTMin = 0.05;
  double tauTMax = 0.2;
  bool randomizePhase = true;  ///< Monte Carlo draws Delta phi uniformly from [0, period]

  friend bool operator==(const UncertaintyConfig&, const UncertaintyConfig&) = default;
};

struct IntegratorConfig {
  double dt = 1e-3;   ///< s
  double tMax = 20.0; ///< s

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct ModelOptions {
  bool transitionTable = false;  ///< interpolate exp(A_I tgo) from a precomputed grid
  double tableStep = 1e-3;       ///< s
  bool accelFromDerivative = false;  ///< report a_MN = C_M dx_M/dt in traces

  friend bool operator==(const ModelOptions&, const ModelOptions&) = default;
};

struct ScenarioConfig {
  GeometryConfig geometry;
  VehicleCoeffs coeffs;  ///< nominal coefficients; the controller always sees these
  std::optional<VehicleCoeffs> plantCoeffs;  ///< perturbed plant, nominal when empty
  AtsmcParams control;
  ManeuverConfig maneuver;
  UncertaintyConfig uncertainty;
  PitchDisturbance disturbance;
  LyapunovBounds lyapunov;
  IntegratorConfig integrator;
  ModelOptions model;
  Mode mode = Mode::Atsmc;

  const VehicleCoeffs& plant() const { return plantCoeffs ? *plantCoeffs : coeffs; }

  /// Every violated invariant, by field path.
  std::vector<std::string> violations() const;
  /// Soft findings that do not block a run (e.g. dt coarser than tauS/10).
  std::vector<std::string> warnings() const;
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

enum class TerminationReason { RangeMinimum, Timeout, Diverged };
std::string_view to_string(TerminationReason reason);

struct TraceSample {
  double t = 0.0;
  EngagementState state;
  RelGeometry geom;
  double zem = 0.0;
  double sigmaDot = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double deltaCmd = 0.0;
  double aTcmd = 0.0;
  double uEq = 0.0;
  double uD = 0.0;
  double aMN = 0.0;  ///< linear-model normal acceleration, m/s^2
};

struct TerminalRecord {
  double missDistance = 0.0;
  double interceptTime = 0.0;
  TerminationReason reason = TerminationReason::Timeout;
  std::string detail;
  EngagementState finalState;  ///< last propagated state (not part of the sampled trace)
};

struct Trace {
  Mode mode = Mode::Atsmc;
  double dt = 0.0;
  std::vector<TraceSample> samples;
  TerminalRecord terminal;
  bool alphaWarning = false;  ///< |alpha| exceeded 0.5 rad somewhere
};

/// Square wave of the given amplitude: +A for (t - phase) mod period < period/2.
double target_command(double t, const ManeuverConfig& m);

/// Plant coefficients drawn around the nominal set. Only the aero derivatives
/// (and optionally tauT) are perturbed.
VehicleCoeffs sample_coeffs(const VehicleCoeffs& nominal, const UncertaintyConfig& u,
                            std::mt19937_64& rng);

/// Heading of the collision course for the scenario geometry, rad.
/// Throws ConfigError when the UAV is too slow for one to exist.
double collision_course_heading(const GeometryConfig& g, const VehicleCoeffs& c);

/// UAV at the origin, target at `range` along the initial LOS.
EngagementState initial_state(const ScenarioConfig& sc);

/// One classical RK4 step with zero-order-held commands.
/// Throws NumericalDivergence on a non-finite state or a canard outside its
/// reachable range.
EngagementState step(const EngagementState& s, double deltaCmd, double aTcmd,
                     const VehicleCoeffs& c, double dt, const AeroShape& aero = {},
                     const PitchDisturbance& dist = {});

/// Closed-loop engagement under the scenario's own mode.
Trace run_engagement(const ScenarioConfig& sc);
Trace run_engagement(const ScenarioConfig& sc, Mode mode);

/// Closest approach from a uniformly sampled state history. The relative
/// position is interpolated quadratically across the three samples bracketing
/// the sampled minimum. With `extrapolate` the quadratic through the last
/// three states is continued forward (run stopped inside kTerminalRange).
double extract_miss_distance(const std::vector<EngagementState>& states, bool extrapolate);

/// max |Z| over the final `window` seconds of a trace, counting only samples
/// where the closing speed dominates (|Vr| >= |Vlambda|).
double terminal_zem_overshoot(const Trace& trace, double window = 0.5);
/// Sign changes of the canard command increments.
int canard_reversal_count(const Trace& trace);
/// Time integral of the applied gain.
double beta_integral(const Trace& trace);

// Monte Carlo -----------------------------------------------------------

/// Per-run random draw shared across controller modes.
struct RunDraw {
  std::uint64_t seed = 0;
  VehicleCoeffs plant;
  double phase = 0.0;
};

struct RunResult {
  std::size_t index = 0;
  double missDistance = 0.0;
  double interceptTime = 0.0;
  TerminationReason reason = TerminationReason::Timeout;
  double zemOvershoot = 0.0;
  double maxAbsDelta = 0.0;
  int canardReversals = 0;
  double betaIntegral = 0.0;
  bool alphaWarning = false;
};

struct CampaignStats {
  std::size_t runs = 0;
  std::size_t completed = 0;
  std::size_t diverged = 0;
  double meanMiss = 0.0;
  double medianMiss = 0.0;
  double stdMiss = 0.0;
  double maxMiss = 0.0;
  double q50 = 0.0;  ///< CEP-style quantiles of the miss distance
  double q90 = 0.0;
  double q95 = 0.0;
  double meanZemOvershoot = 0.0;
  double meanReversals = 0.0;

  double completion_rate() const {
    return runs == 0 ? 0.0 : static_cast<double>(completed) / static_cast<double>(runs);
  }
};

struct ModeCampaign {
  Mode mode = Mode::Atsmc;
  std::vector<RunResult> runs;  ///< sorted by run index
  CampaignStats stats;
};

struct Campaign {
  std::uint64_t seed = 0;
  std::vector<RunDraw> draws;
  std::vector<ModeCampaign> modes;
};

/// splitmix64 finalizer used to derive independent per-run streams.
std::uint64_t splitmix64(std::uint64_t x);

/// Draws for run `index` of a campaign seeded with `seed`.
RunDraw draw_run(const ScenarioConfig& sc, std::uint64_t seed, std::size_t index);

/// Statistics over completed (non-diverged) runs.
CampaignStats summarize(const std::vector<RunResult>& runs);

/// n paired runs per mode. threads == 0 picks the hardware concurrency.
Campaign monte_carlo(const ScenarioConfig& sc, std::size_t n, std::uint64_t seed,
                     const std::vector<Mode>& modes, unsigned threads = 1);

}  // namespace zemtwist
