#include "zemtwist/zem.hpp"

#include <cmath>

#include "zemtwist/errors.hpp"

namespace zemtwist {

double psi(double tgo, double tauT) {
  const double x = tgo / tauT;
  return std::expm1(-x) + x;
}

double psi_prime(double tgo, double tauT) {
  // (tgo/tauT - psi) / tauT = (1 - e^-x) / tauT
  return -std::expm1(-tgo / tauT) / tauT;
}

TransitionMatrix::TransitionMatrix(const Mat6& AI, double tgoMax, double step) : AI_(AI) {
  if (!(step > 0.0) || !(tgoMax > 0.0)) {
    throw InputDomainError("TransitionMatrix: grid step and extent must be positive");
  }
  step_ = step;
  const auto count = static_cast<std::size_t>(std::ceil(tgoMax / step)) + 1;
  table_.reserve(count);
  for (std::size_t i = 0; i < count; ++i) table_.push_back(mat_exp(AI_, step * static_cast<double>(i)));
}

Mat6 TransitionMatrix::at(double tgo) const {
  if (table_.empty()) return mat_exp(AI_, tgo);
  const double pos = tgo / step_;
  if (!(pos >= 0.0) || pos >= static_cast<double>(table_.size() - 1)) return mat_exp(AI_, tgo);
  const auto i = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(i);
  if (w == 0.0) return table_[i];
  return (1.0 - w) * table_[i] + w * table_[i + 1];
}

double zem_linear(const Vec6& xI, const Mat6& AI, double tgo) {
  const Mat6 Phi = mat_exp(AI, tgo);
  return dot(Phi.row(0), xI);
}

double target_normal_accel(const EngagementState& s, const LinearModels& m) {
  return s.aT * std::cos(s.gammaT + m.lambda0);
}

Vec6 airframe_state(const EngagementState& s) {
  Vec6 x;
  x[3] = s.alpha;
  x[4] = s.q;
  x[5] = s.delta;
  return x;
}

ZemBreakdown zem_integrated(const EngagementState& s, const RelGeometry& g, const LinearModels& m,
                            const Mat6& Phi) {
  ZemBreakdown z;
  z.aTN = target_normal_accel(s, m);
  z.psi = psi(g.tgo, m.tauT);
  z.kinematicTerm = -g.Vr * g.tgo * g.tgo * g.lambda_dot();
  z.targetLagTerm = z.aTN * m.tauT * m.tauT * z.psi;
  z.airframeTerm = dot(Phi.row(0), airframe_state(s));
  z.Z = z.kinematicTerm + z.targetLagTerm + z.airframeTerm;
  z.Phi16 = Phi(0, 5);
  if (auto terms = sigma_dot_terms(s, g, m, Phi, 0.0)) z.driftNoControl = terms->drift;
  return z;
}

ZemBreakdown zem_integrated(const EngagementState& s, const RelGeometry& g,
                            const LinearModels& m) {
  return zem_integrated(s, g, m, mat_exp(m.AI, g.tgo));
}

std::optional<SigmaDotTerms> sigma_dot_terms(const EngagementState& s, const RelGeometry& g,
                                             const LinearModels& m, const Mat6& Phi,
                                             double aTcmd) {
  if (g.Vr == 0.0) return std::nullopt;
  const VehicleCoeffs& c = m.coeffs;
  const double aMNominal = c.Lalpha * s.alpha + c.Ldelta * s.delta;
  const double offM = s.gammaM - g.lambda;
  const double offT = s.gammaT + g.lambda;
  const double VrDot =
      g.Vlambda * g.Vlambda / g.r + aMNominal * std::sin(offM) + s.aT * std::sin(offT);

  const double aTN = target_normal_accel(s, m);
  const Vec6 ybar = mat_vec(m.AI, airframe_state(s));

  SigmaDotTerms out;
  out.kappa = VrDot * g.r / (g.Vr * g.Vr);
  out.bracket = g.Vlambda - aTN * m.tauT * std::expm1(-g.tgo / m.tauT) + dot(Phi.row(0), ybar);
  out.drift = out.bracket * out.kappa;
  out.Phi16 = Phi(0, 5);
  out.controlGain = out.Phi16 / m.tauS;
  out.targetTerm = m.tauT * aTcmd * std::cos(s.gammaT + m.lambda0) * psi(g.tgo, m.tauT);
  out.authority = std::abs(out.Phi16) >= kMinPhi16;
  return out;
}

std::optional<SigmaDotTerms> sigma_dot_terms(const EngagementState& s, const RelGeometry& g,
                                             const LinearModels& m, double aTcmd) {
  return sigma_dot_terms(s, g, m, mat_exp(m.AI, g.tgo), aTcmd);
}

}  // namespace zemtwist
