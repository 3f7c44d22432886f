// Zero-effort miss of the integrated model and the sliding-surface rate.
//
// The ZEM is the miss that would remain if the canard command were zeroed
// from now on. It is used directly as the sliding surface sigma.

#pragma once

#include <optional>
#include <vector>

#include "zemtwist/dynamics.hpp"
#include "zemtwist/linmodel.hpp"
#include "zemtwist/smallmat.hpp"

namespace zemtwist {

/// psi(tgo) = exp(-tgo/tauT) + tgo/tauT - 1, evaluated without cancellation.
double psi(double tgo, double tauT);
/// d psi / d tgo = (tgo/tauT - psi) / tauT.
double psi_prime(double tgo, double tauT);

/// State transition matrix exp(A_I tgo). Either evaluated directly every call
/// or linearly interpolated from a precomputed uniform tgo grid.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(const Mat6& AI) : AI_(AI) {}
  /// Grid on [0, tgoMax] with spacing `step`; queries past tgoMax fall back
  /// to direct evaluation.
  TransitionMatrix(const Mat6& AI, double tgoMax, double step);

  Mat6 at(double tgo) const;
  bool tabulated() const { return !table_.empty(); }

 private:
  Mat6 AI_;
  double step_ = 0.0;
  std::vector<Mat6> table_;
};

/// C_I exp(A_I tgo) x_I with C_I selecting z.
double zem_linear(const Vec6& xI, const Mat6& AI, double tgo);

struct ZemBreakdown {
  double Z = 0.0;              ///< sliding surface value, m
  double kinematicTerm = 0.0;  ///< -Vr tgo^2 lambda-dot, m
  double targetLagTerm = 0.0;  ///< a_TN tauT^2 psi, m
  double airframeTerm = 0.0;   ///< C_I Phi_I(tgo) xbar_I, m
  double psi = 0.0;
  double Phi16 = 0.0;           ///< Phi_I(tgo) entry (row 1, column 6)
  double driftNoControl = 0.0;  ///< sigma-dot with zero command and zero disturbances, m/s
  double aTN = 0.0;             ///< target acceleration normal to the initial LOS, m/s^2
};

/// Target acceleration projected onto the initial-LOS normal.
double target_normal_accel(const EngagementState& s, const LinearModels& m);

/// xbar_I = [0, 0, 0, alpha, q, delta].
Vec6 airframe_state(const EngagementState& s);

/// Integrated ZEM. Phi must equal exp(A_I * geom.tgo).
ZemBreakdown zem_integrated(const EngagementState& s, const RelGeometry& geom,
                            const LinearModels& m, const Mat6& Phi);
ZemBreakdown zem_integrated(const EngagementState& s, const RelGeometry& geom,
                            const LinearModels& m);

/// |Phi_I(1,6)| below this has no usable control authority.
inline constexpr double kMinPhi16 = 1e-6;

/// sigma-dot = drift + controlGain * deltaCmd + targetTerm + Delta_I.
struct SigmaDotTerms {
  double drift = 0.0;        ///< [Vlambda + a_TN tauT (1 - e^-tgo/tauT) + C_I Phi ybar] * kappa, m/s
  double controlGain = 0.0;  ///< Phi16 / tauS, m/s per rad
  double targetTerm = 0.0;   ///< tauT a_TN^c psi, m/s (diagnostic)
  double bracket = 0.0;      ///< the drift bracket before multiplication by kappa, m/s
  double kappa = 0.0;        ///< Vr-dot r / Vr^2
  double Phi16 = 0.0;
  bool authority = false;    ///< |Phi16| >= kMinPhi16

  double total(double deltaCmd) const { return drift + controlGain * deltaCmd + targetTerm; }
};

/// Drift/gain decomposition of the sliding-surface rate at one instant.
/// The UAV acceleration in Vr-dot is the nominal-model lift estimate.
/// Returns nullopt when the closing rate is degenerate (Vr == 0).
std::optional<SigmaDotTerms> sigma_dot_terms(const EngagementState& s, const RelGeometry& geom,
                                             const LinearModels& m, const Mat6& Phi,
                                             double aTcmd);
std::optional<SigmaDotTerms> sigma_dot_terms(const EngagementState& s, const RelGeometry& geom,
                                             const LinearModels& m, double aTcmd);

}  // namespace zemtwist
