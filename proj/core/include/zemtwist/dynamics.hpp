// Planar UAV/target engagement: relative kinematics, target lag and the UAV
// short-period airframe.
//
// Frame and angle conventions. Positions live in the inertial (x, z) plane.
// The LOS angle is lambda = atan2(zT - zM, xT - xM). The UAV velocity is
// VM * (cos gammaM, sin gammaM). The target flight-path angle is measured
// from the reversed reference axis, so its velocity is
// VT * (-cos gammaT, sin gammaT) and gammaT = 0 with lambda = 0 is a head-on
// target. With these conventions the closing-rate and LOS-normal expressions
//   Vr      = -[VM cos(gammaM - lambda) + VT cos(gammaT + lambda)]
//   Vlambda = -VM sin(gammaM - lambda) + VT sin(gammaT + lambda)
// are exact time derivatives of r and r * lambda-dot.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace zemtwist {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kStandardGravity = 9.81;

/// Below this range the kinematic rates are ill-conditioned and the run is
/// handed over to miss-distance extraction.
inline constexpr double kTerminalRange = 0.5;

/// Mass- and inertia-normalized vehicle description.
///
/// Defaults are the nominal interceptor/target values used throughout the
/// reference scenario.
struct VehicleCoeffs {
  double VM = 380.0;          ///< UAV speed, m/s
  double VT = 380.0;          ///< target speed, m/s (0 = stationary target)
  double Lalpha = 1190.0;     ///< lift per unit alpha, m/s^2/rad
  double Ldelta = 80.0;       ///< lift per unit canard, m/s^2/rad
  double Malpha = -234.0;     ///< pitch moment per unit alpha, 1/s^2
  double Mq = -5.0;           ///< pitch damping, 1/s
  double Mdelta = 160.0;      ///< pitch moment per unit canard, 1/s^2
  double tauS = 0.02;         ///< canard servo time constant, s
  double tauT = 0.1;          ///< target acceleration lag, s
  double tauM = 0.1;          ///< UAV acceleration lag (guidance-only model), s
  double aMmax = 40.0 * kStandardGravity;
  double aTmax = 20.0 * kStandardGravity;
  double deltaMax = 30.0 * kDegToRad;      ///< rad
  double deltaRateMax = 30.0 * kDegToRad;  ///< rad/s

  /// Names of every field violating its invariant; empty when valid.
  std::vector<std::string> violations() const;
  /// Throws ConfigError listing all violations.
  void validate() const;

  friend bool operator==(const VehicleCoeffs&, const VehicleCoeffs&) = default;
};

/// Injectable aerodynamic shape functions f1..f4. Identity by default
/// (linear aerodynamics).
struct AeroShape {
  using Fn = std::function<double(double)>;
  Fn liftAlpha;    ///< f1(alpha)
  Fn liftDelta;    ///< f2(delta)
  Fn momentAlpha;  ///< f3(alpha)
  Fn momentDelta;  ///< f4(delta)

  double f1(double x) const { return liftAlpha ? liftAlpha(x) : x; }
  double f2(double x) const { return liftDelta ? liftDelta(x) : x; }
  double f3(double x) const { return momentAlpha ? momentAlpha(x) : x; }
  double f4(double x) const { return momentDelta ? momentDelta(x) : x; }
};

/// Bounded additive airframe disturbances.
struct PitchDisturbance {
  double deltaQ = 0.0;       ///< pitch acceleration disturbance, rad/s^2
  double deltaQBound = 0.0;  ///< declared bound on |deltaQ|
  double deltaA = 0.0;       ///< lift acceleration disturbance, m/s^2
  double deltaABound = 0.0;  ///< declared bound on |deltaA|

  /// Throws ConfigError when a disturbance exceeds its declared bound.
  void validate() const;

  friend bool operator==(const PitchDisturbance&, const PitchDisturbance&) = default;
};

struct EngagementState {
  double xM = 0.0, zM = 0.0;  ///< UAV position, m
  double xT = 0.0, zT = 0.0;  ///< target position, m
  double gammaM = 0.0;        ///< UAV flight-path angle, rad
  double gammaT = 0.0;        ///< target flight-path angle, rad
  double alpha = 0.0;         ///< angle of attack, rad
  double q = 0.0;             ///< pitch rate, rad/s
  double theta = 0.0;         ///< pitch angle, rad
  double delta = 0.0;         ///< canard deflection, rad
  double aT = 0.0;            ///< target normal acceleration, m/s^2
  double t = 0.0;             ///< time, s

  static constexpr std::size_t kSize = 11;
  using Array = std::array<double, kSize>;

  /// Integrated components in a fixed order (time excluded).
  Array to_array() const;
  static EngagementState from_array(const Array& a, double t);

  friend bool operator==(const EngagementState&, const EngagementState&) = default;
};

struct RelGeometry {
  double r = 0.0;        ///< range, m
  double lambda = 0.0;   ///< LOS angle, rad
  double Vr = 0.0;       ///< range rate, m/s
  double Vlambda = 0.0;  ///< LOS-normal relative speed, m/s
  double tgo = 0.0;      ///< time to go, s (0 when not closing)

  double lambda_dot() const { return Vlambda / r; }
};

/// Range, LOS angle, closing rates and time to go.
/// Returns nullopt (engagement-terminal) when r <= kTerminalRange.
std::optional<RelGeometry> rel_geometry(const EngagementState& s, const VehicleCoeffs& c);

struct TargetRates {
  double aTDot = 0.0;
  double gammaTDot = 0.0;
};

/// First-order target acceleration lag and the resulting turn rate.
TargetRates target_derivs(double aT, double aTcmd, const VehicleCoeffs& c);

struct UavRates {
  double alphaDot = 0.0;
  double qDot = 0.0;
  double thetaDot = 0.0;
  double deltaDot = 0.0;
  double gammaMDot = 0.0;
  double aM = 0.0;  ///< normal acceleration including the lift disturbance, m/s^2
};

/// Short-period airframe plus canard servo. The disturbance must respect its
/// declared bounds (ConfigError otherwise).
UavRates uav_derivs(const EngagementState& s, double deltaCmd, const VehicleCoeffs& c,
                    const AeroShape& aero = {}, const PitchDisturbance& dist = {});

/// Normal acceleration produced by the airframe, excluding disturbances.
double uav_lift_accel(const EngagementState& s, const VehicleCoeffs& c, const AeroShape& aero = {});

struct LosRates {
  double lambdaDDot = 0.0;
  double VrDot = 0.0;
  double VlambdaDot = 0.0;
  double tgoDot = 0.0;
};

/// Second-order LOS kinematics. Returns nullopt (degenerate closing) when
/// Vr == 0 and tgo-dot is undefined.
std::optional<LosRates> los_rates(const EngagementState& s, const RelGeometry& g, double aM,
                                  double aT);

/// Full state derivative for integration, ordered as EngagementState::Array.
EngagementState::Array state_derivative(const EngagementState& s, double deltaCmd, double aTcmd,
                                        const VehicleCoeffs& c, const AeroShape& aero = {},
                                        const PitchDisturbance& dist = {});

}  // namespace zemtwist
