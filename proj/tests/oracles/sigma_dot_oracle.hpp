// Chain-rule time derivative of the integrated ZEM, built from Cartesian
// relative position/velocity/acceleration rather than the polar rate
// equations used by the library.
//
// Z = tgo * Vlambda + a_TN tauT^2 psi(tgo) + row0(exp(A_I tgo)) . xbar
// (the kinematic term -Vr tgo^2 lambda-dot equals tgo * Vlambda).
//
// The airframe derivative uses the linear aerodynamics, so the oracle is the
// true dZ/dt of the nominal plant.

#pragma once

#include <cmath>
#include <random>

#include "taylor_expm.hpp"
#include "zemtwist/dynamics.hpp"
#include "zemtwist/linmodel.hpp"

namespace oracle {

struct Cartesian {
  double r, lambda, Vr, Vlambda, VrDot, VlambdaDot;
};

inline Cartesian cartesian_kinematics(const zemtwist::EngagementState& s,
                                      const zemtwist::VehicleCoeffs& c, double aM) {
  const double px = s.xT - s.xM;
  const double pz = s.zT - s.zM;
  const double vx = -c.VT * std::cos(s.gammaT) - c.VM * std::cos(s.gammaM);
  const double vz = c.VT * std::sin(s.gammaT) - c.VM * std::sin(s.gammaM);
  // Normal accelerations rotate each velocity vector.
  const double ax = s.aT * std::sin(s.gammaT) + aM * std::sin(s.gammaM);
  const double az = s.aT * std::cos(s.gammaT) - aM * std::cos(s.gammaM);

  Cartesian k{};
  k.r = std::hypot(px, pz);
  k.lambda = std::atan2(pz, px);
  const double erx = px / k.r, erz = pz / k.r;
  const double elx = -erz, elz = erx;
  k.Vr = vx * erx + vz * erz;
  k.Vlambda = vx * elx + vz * elz;
  k.VrDot = ax * erx + az * erz + k.Vlambda * k.Vlambda / k.r;
  k.VlambdaDot = ax * elx + az * elz - k.Vr * k.Vlambda / k.r;
  return k;
}

/// dZ/dt with commands held at (deltaCmd, aTcmd). `m` must be linearized at
/// the state's own geometry for this to equal the library's reconstruction.
inline double sigma_dot(const zemtwist::EngagementState& s, const zemtwist::LinearModels& m,
                        double deltaCmd, double aTcmd) {
  const zemtwist::VehicleCoeffs& c = m.coeffs;
  const double aM = c.Lalpha * s.alpha + c.Ldelta * s.delta;
  const Cartesian k = cartesian_kinematics(s, c, aM);

  const double tgo = -k.r / k.Vr;
  const double tgoDot = -1.0 + k.r * k.VrDot / (k.Vr * k.Vr);

  const double x = tgo / c.tauT;
  const double psi = std::exp(-x) + x - 1.0;
  const double psiPrime = (1.0 - std::exp(-x)) / c.tauT;

  const double proj = std::cos(s.gammaT + m.lambda0);
  const double aTN = s.aT * proj;
  const double aTDot = (aTcmd - s.aT) / c.tauT;
  const double gammaTDot = c.VT > 0.0 ? s.aT / c.VT : 0.0;
  const double aTNDot = aTDot * proj - s.aT * std::sin(s.gammaT + m.lambda0) * gammaTDot;

  const auto Phi = scaled_taylor_expm(m.AI, tgo);
  const double xbar[6] = {0.0, 0.0, 0.0, s.alpha, s.q, s.delta};
  const double xbarDot[6] = {0.0,
                             0.0,
                             0.0,
                             s.q - aM / c.VM,
                             c.Malpha * s.alpha + c.Mq * s.q + c.Mdelta * s.delta,
                             (deltaCmd - s.delta) / c.tauS};
  // d/dtgo row0(Phi) = row0(A_I Phi)
  double airframe = 0.0;
  for (int j = 0; j < 6; ++j) {
    double dPhi = 0.0;
    for (int l = 0; l < 6; ++l) dPhi += m.AI(0, l) * Phi(l, j);
    airframe += dPhi * tgoDot * xbar[j] + Phi(0, j) * xbarDot[j];
  }

  return tgoDot * k.Vlambda + tgo * k.VlambdaDot + aTNDot * c.tauT * c.tauT * psi +
         aTN * c.tauT * c.tauT * psiPrime * tgoDot + airframe;
}

/// Random state compatible with the oracle: the models are rebuilt at the
/// state's own (gammaM, lambda) and gammaT = -lambda, so the linear-model
/// projections coincide with the exact geometry.
struct OracleCase {
  zemtwist::EngagementState state;
  zemtwist::LinearModels models;
};

inline OracleCase random_case(std::mt19937_64& rng, const zemtwist::VehicleCoeffs& c,
                              double tgoMin, double tgoMax) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> tgoDist(tgoMin, tgoMax);
  OracleCase oc;
  zemtwist::EngagementState& s = oc.state;
  const double lambda = 0.3 * u(rng);
  s.gammaM = lambda + 0.2 * u(rng);
  s.gammaT = -lambda;
  s.alpha = 0.05 * u(rng);
  s.q = 0.5 * u(rng);
  s.delta = 0.3 * u(rng);
  s.theta = s.gammaM + s.alpha;
  s.aT = 196.2 * u(rng);
  const double Vr = -(c.VM * std::cos(s.gammaM - lambda) + c.VT * std::cos(s.gammaT + lambda));
  const double r = tgoDist(rng) * -Vr;
  s.xM = 100.0 * u(rng);
  s.zM = 100.0 * u(rng);
  s.xT = s.xM + r * std::cos(lambda);
  s.zT = s.zM + r * std::sin(lambda);
  oc.models = zemtwist::build_models(c, s.gammaM, lambda);
  return oc;
}

}  // namespace oracle
