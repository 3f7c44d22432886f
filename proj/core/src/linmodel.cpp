#include "zemtwist/linmodel.hpp"

#include <cmath>

namespace zemtwist {

LinearModels build_models(const VehicleCoeffs& c, double gammaM0, double lambda0) {
  c.validate();
  LinearModels m;
  m.coeffs = c;
  m.gammaM0 = gammaM0;
  m.lambda0 = lambda0;
  m.tauS = c.tauS;
  m.tauT = c.tauT;
  m.tauM = c.tauM;

  // Guidance-only model: z'' = a_TN - a_MN with first-order lags on both.
  m.AG(0, 1) = 1.0;
  m.AG(1, 2) = 1.0;
  m.AG(1, 3) = -1.0;
  m.AG(2, 2) = -1.0 / c.tauT;
  m.AG(3, 3) = -1.0 / c.tauM;
  m.BG[3] = 1.0 / c.tauM;
  m.GG[2] = 1.0 / c.tauT;

  // Airframe. Entry (0, 2) is the canard lift term -L_delta / V_M.
  m.AM(0, 0) = -c.Lalpha / c.VM;
  m.AM(0, 1) = 1.0;
  m.AM(0, 2) = -c.Ldelta / c.VM;
  m.AM(1, 0) = c.Malpha;
  m.AM(1, 1) = c.Mq;
  m.AM(1, 2) = c.Mdelta;
  m.AM(2, 2) = -1.0 / c.tauS;
  m.BM[2] = 1.0 / c.tauS;

  const double proj = std::cos(gammaM0 - lambda0);
  m.CM[0] = c.Lalpha * proj;
  m.CM[1] = 0.0;
  m.CM[2] = c.Ldelta * proj;

  // Integrated: [A_G11, A_12; 0, A_M], A_12 row 1 = -C_M.
  m.AI(0, 1) = 1.0;
  m.AI(1, 2) = 1.0;
  m.AI(2, 2) = -1.0 / c.tauT;
  for (std::size_t j = 0; j < 3; ++j) {
    m.AI(1, 3 + j) = -m.CM[j];
    for (std::size_t i = 0; i < 3; ++i) m.AI(3 + i, 3 + j) = m.AM(i, j);
  }
  m.BI[5] = 1.0 / c.tauS;
  m.GI[2] = 1.0 / c.tauT;
  return m;
}

double uav_normal_accel(const Vec3& xM, const LinearModels& m) { return dot(m.CM, xM); }

double uav_normal_accel_from_derivative(const Vec3& xM, double deltaCmd, const LinearModels& m) {
  const Vec3 xdot = mat_vec(m.AM, xM) + deltaCmd * m.BM;
  return dot(m.CM, xdot);
}

}  // namespace zemtwist
