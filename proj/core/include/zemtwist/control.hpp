// Sliding-mode controllers on the ZEM surface: first-order SMC, twisting
// (TSMC) and adaptive twisting (ATSMC), plus actuator limiting and the
// Lyapunov diagnostic.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zemtwist/dynamics.hpp"
#include "zemtwist/linmodel.hpp"
#include "zemtwist/zem.hpp"

namespace zemtwist {

enum class Mode { Smc, Tsmc, Atsmc };

std::string_view to_string(Mode mode);
/// Accepts "smc", "tsmc", "atsmc" (case-sensitive).
std::optional<Mode> parse_mode(std::string_view text);

/// Controller gains. Defaults reproduce the published control-parameter table;
/// rho and betaStar are not given there and use 0.5 and 0.005.
struct AtsmcParams {
  double mu = 0.7;          ///< twisting ratio applied when sigma * sigma-dot <= 0
  double muI = 0.7;         ///< reaching bound used only by the Lyapunov diagnostic, m/s
  double gamma = 0.25;
  double rho = 0.5;
  double epsilon = 0.6;
  double omegaBar = 80.65;  ///< adaptation rate
  double eta = 0.05;        ///< recovery rate below betaMin, 1/s
  double betaStar = 0.005;  ///< floor of the accelerated gain
  double betaMin = 0.01;    ///< adaptation threshold beta_m
  double betaMax = 1.57;    ///< gain cap beta_M
  double beta0 = 1.57;
  double boundaryLayer = 0.0;     ///< SMC boundary layer width, m (0 = pure sign)
  int sigmaDotFilterSteps = 5;    ///< low-pass time constant of the sigma-dot estimate, in steps
  bool acceleratedFloor = false;  ///< ATSMC applies max(beta, accelerated_gain(sigma))

  std::vector<std::string> violations() const;
  void validate() const;

  friend bool operator==(const AtsmcParams&, const AtsmcParams&) = default;
};

struct ControllerState {
  Mode mode = Mode::Atsmc;
  double beta = 0.0;
  double sigmaPrev = 0.0;
  double sigmaDotEst = 0.0;
  bool primed = false;  ///< sigmaPrev holds a real sample
  double lastUeq = 0.0;
  double direction = -1.0;  ///< sign of the control gain, held when authority is lost
  double deltaPrev = 0.0;   ///< previous canard command, rad
};

/// sign with sign(0) = 0.
inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Command that zeroes sigma-dot on the nominal model with no target
/// command; nullopt without control authority.
std::optional<double> equivalent_control(const SigmaDotTerms& terms);
std::optional<double> equivalent_control(const EngagementState& s, const RelGeometry& g,
                                         const LinearModels& m);

/// -mu beta sign(sigma) when sigma * sigmaDot <= 0, else -beta sign(sigma).
double twisting(double sigma, double sigmaDot, double beta, double mu);

/// max(betaStar, gamma |sigma|^rho).
double accelerated_gain(double sigma, const AtsmcParams& p);

/// One forward-Euler step of the adaptive gain law, projected onto
/// [betaMin, betaMax].
double adapt_gain(double beta, double sigma, double dt, const AtsmcParams& p);

/// Rate of the adaptive gain law before projection.
double adapt_gain_rate(double beta, double sigma, const AtsmcParams& p);

/// Magnitude then rate limiting of u_eq + u_D.
double compose_command(double uEq, double uD, double deltaPrev, double dt,
                       const VehicleCoeffs& c);

/// -beta sign(sigma), linear inside a boundary layer of half-width `layer`.
double baseline_smc(double sigma, double beta, double layer = 0.0);

struct LyapunovBounds {
  double targetCommand = 0.0;  ///< bound on |tauT a_TN^c psi|
  double targetLag = 0.0;      ///< bound on |tauT a_TN psi|
  double integrated = 0.0;     ///< bound on |Delta_I|

  double sum() const { return targetCommand + targetLag + integrated; }

  friend bool operator==(const LyapunovBounds&, const LyapunovBounds&) = default;
};

struct LyapunovDiag {
  double V = 0.0;
  double VdotBound = 0.0;
  bool conditionSatisfied = false;
};

/// V = sigma^2/2 + (beta - betaMax)^2/(2 gamma) and its decrease bound for the
/// sigma * sigma-dot <= 0 branch. Diagnostic only.
LyapunovDiag lyapunov_diag(double sigma, double beta, const AtsmcParams& p,
                           const LyapunovBounds& bounds);

struct ControlOutput {
  double deltaCmd = 0.0;
  double uEq = 0.0;
  double uD = 0.0;
  double sigma = 0.0;
  double sigmaDot = 0.0;  ///< filtered backward-difference estimate
  double beta = 0.0;      ///< gain applied this step
  bool authority = false;
  ZemBreakdown zem;
  SigmaDotTerms terms;
};

/// Integrated guidance/autopilot controller running at the integration rate.
/// Sees only the nominal models and the measured state.
class IntegratedController {
 public:
  IntegratedController(Mode mode, const AtsmcParams& params, LinearModels models,
                       std::optional<TransitionMatrix> transition = std::nullopt);

  ControlOutput update(const EngagementState& s, const RelGeometry& g, double dt);

  const ControllerState& state() const { return state_; }
  const LinearModels& models() const { return models_; }
  const AtsmcParams& params() const { return params_; }

 private:
  AtsmcParams params_;
  LinearModels models_;
  TransitionMatrix transition_;
  ControllerState state_;
};

}  // namespace zemtwist
