#include "zemtwist/dynamics.hpp"

#include <cmath>

#include "zemtwist/errors.hpp"

namespace zemtwist {

std::vector<std::string> VehicleCoeffs::violations() const {
  std::vector<std::string> bad;
  auto positive = [&](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) bad.emplace_back(std::string(name) + " must be > 0");
  };
  auto finite = [&](double v, const char* name) {
    if (!std::isfinite(v)) bad.emplace_back(std::string(name) + " must be finite");
  };
  positive(VM, "VM");
  if (!(std::isfinite(VT) && VT >= 0.0)) bad.emplace_back("VT must be >= 0");
  finite(Lalpha, "Lalpha");
  finite(Ldelta, "Ldelta");
  finite(Malpha, "Malpha");
  finite(Mq, "Mq");
  finite(Mdelta, "Mdelta");
  positive(tauS, "tauS");
  positive(tauT, "tauT");
  positive(tauM, "tauM");
  positive(aMmax, "aMmax");
  positive(aTmax, "aTmax");
  positive(deltaMax, "deltaMax");
  positive(deltaRateMax, "deltaRateMax");
  return bad;
}

void VehicleCoeffs::validate() const {
  if (auto bad = violations(); !bad.empty()) throw ConfigError(std::move(bad));
}

void PitchDisturbance::validate() const {
  std::vector<std::string> bad;
  if (!(deltaQBound >= 0.0) || std::abs(deltaQ) > deltaQBound) {
    bad.emplace_back("deltaQ exceeds declared bound deltaQBound");
  }
  if (!(deltaABound >= 0.0) || std::abs(deltaA) > deltaABound) {
    bad.emplace_back("deltaA exceeds declared bound deltaABound");
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

EngagementState::Array EngagementState::to_array() const {
  return {xM, zM, xT, zT, gammaM, gammaT, alpha, q, theta, delta, aT};
}

EngagementState EngagementState::from_array(const Array& a, double time) {
  EngagementState s;
  s.xM = a[0];
  s.zM = a[1];
  s.xT = a[2];
  s.zT = a[3];
  s.gammaM = a[4];
  s.gammaT = a[5];
  s.alpha = a[6];
  s.q = a[7];
  s.theta = a[8];
  s.delta = a[9];
  s.aT = a[10];
  s.t = time;
  return s;
}

std::optional<RelGeometry> rel_geometry(const EngagementState& s, const VehicleCoeffs& c) {
  const double dx = s.xT - s.xM;
  const double dz = s.zT - s.zM;
  const double r = std::hypot(dx, dz);
  if (!(r > kTerminalRange)) return std::nullopt;

  RelGeometry g;
  g.r = r;
  g.lambda = std::atan2(dz, dx);
  g.Vr = -(c.VM * std::cos(s.gammaM - g.lambda) + c.VT * std::cos(s.gammaT + g.lambda));
  g.Vlambda = -c.VM * std::sin(s.gammaM - g.lambda) + c.VT * std::sin(s.gammaT + g.lambda);
  g.tgo = g.Vr < 0.0 ? -r / g.Vr : 0.0;
  return g;
}

TargetRates target_derivs(double aT, double aTcmd, const VehicleCoeffs& c) {
  TargetRates out;
  out.aTDot = (aTcmd - aT) / c.tauT;
  out.gammaTDot = c.VT > 0.0 ? aT / c.VT : 0.0;
  return out;
}

double uav_lift_accel(const EngagementState& s, const VehicleCoeffs& c, const AeroShape& aero) {
  return c.Lalpha * aero.f1(s.alpha) + c.Ldelta * aero.f2(s.delta);
}

UavRates uav_derivs(const EngagementState& s, double deltaCmd, const VehicleCoeffs& c,
                    const AeroShape& aero, const PitchDisturbance& dist) {
  dist.validate();
  UavRates out;
  out.aM = uav_lift_accel(s, c, aero) + dist.deltaA;
  out.alphaDot = s.q - out.aM / c.VM;
  out.qDot = c.Malpha * aero.f3(s.alpha) + c.Mq * s.q + c.Mdelta * aero.f4(s.delta) + dist.deltaQ;
  out.thetaDot = s.q;
  out.deltaDot = (deltaCmd - s.delta) / c.tauS;
  out.gammaMDot = out.aM / c.VM;
  return out;
}

std::optional<LosRates> los_rates(const EngagementState& s, const RelGeometry& g, double aM,
                                  double aT) {
  if (g.Vr == 0.0) return std::nullopt;
  const double offM = s.gammaM - g.lambda;
  const double offT = s.gammaT + g.lambda;

  LosRates out;
  out.VrDot = g.Vlambda * g.Vlambda / g.r + aM * std::sin(offM) + aT * std::sin(offT);
  out.VlambdaDot = -g.Vlambda * g.Vr / g.r - aM * std::cos(offM) + aT * std::cos(offT);
  out.lambdaDDot = out.VlambdaDot / g.r - g.Vlambda * g.Vr / (g.r * g.r);
  out.tgoDot = -1.0 + out.VrDot * g.r / (g.Vr * g.Vr);
  return out;
}

EngagementState::Array state_derivative(const EngagementState& s, double deltaCmd, double aTcmd,
                                        const VehicleCoeffs& c, const AeroShape& aero,
                                        const PitchDisturbance& dist) {
  const UavRates uav = uav_derivs(s, deltaCmd, c, aero, dist);
  const TargetRates tgt = target_derivs(s.aT, aTcmd, c);
  return {
      c.VM * std::cos(s.gammaM),
      c.VM * std::sin(s.gammaM),
      -c.VT * std::cos(s.gammaT),
      c.VT * std::sin(s.gammaT),
      uav.gammaMDot,
      tgt.gammaTDot,
      uav.alphaDot,
      uav.qDot,
      uav.thetaDot,
      uav.deltaDot,
      tgt.aTDot,
  };
}

}  // namespace zemtwist
