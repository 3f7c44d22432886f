// Linearized models frozen at the scenario's initial geometry.
//
//   guidance:   x_G = [z, z', a_TN, a_MN]        (A_G, B_G, G_G)
//   airframe:   x_M = [alpha, q, delta]          (A_M, B_M, C_M)
//   integrated: x_I = [z, z', a_TN, alpha, q, delta]  (A_I, B_I, G_I)
//
// z is the target-minus-UAV displacement normal to the initial LOS.

#pragma once

#include "zemtwist/dynamics.hpp"
#include "zemtwist/smallmat.hpp"

namespace zemtwist {

struct LinearModels {
  Mat4 AG;
  Vec4 BG;
  Vec4 GG;
  Mat3 AM;
  Vec3 BM;
  Vec3 CM;  ///< row vector, includes the cos(gammaM0 - lambda0) projection
  Mat6 AI;
  Vec6 BI;
  Vec6 GI;
  double gammaM0 = 0.0;
  double lambda0 = 0.0;
  double tauS = 0.0;
  double tauT = 0.0;
  double tauM = 0.0;
  /// Coefficients the models were built from (the controller's nominal view).
  VehicleCoeffs coeffs;

  friend bool operator==(const LinearModels&, const LinearModels&) = default;
};

/// Builds every linear model from validated coefficients and the
/// linearization point. Throws ConfigError on invalid coefficients.
LinearModels build_models(const VehicleCoeffs& coeffs, double gammaM0, double lambda0);

/// a_MN = C_M x_M with x_M = [alpha, q, delta].
double uav_normal_accel(const Vec3& xM, const LinearModels& m);

/// Literal variant a_MN = C_M dx_M/dt with dx_M/dt = A_M x_M + B_M deltaCmd.
/// Kept for comparison only; the integrated model couples through C_M x_M.
double uav_normal_accel_from_derivative(const Vec3& xM, double deltaCmd, const LinearModels& m);

}  // namespace zemtwist
