#include "zemtwist/control.hpp"

#include <algorithm>
#include <cmath>

#include "zemtwist/errors.hpp"

namespace zemtwist {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Smc:
      return "smc";
    case Mode::Tsmc:
      return "tsmc";
    case Mode::Atsmc:
      return "atsmc";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "smc") return Mode::Smc;
  if (text == "tsmc") return Mode::Tsmc;
  if (text == "atsmc") return Mode::Atsmc;
  return std::nullopt;
}

std::vector<std::string> AtsmcParams::violations() const {
  std::vector<std::string> bad;
  if (!(mu > 0.0 && mu < 1.0)) bad.emplace_back("mu must lie in (0, 1)");
  if (!(muI >= 0.0)) bad.emplace_back("muI must be >= 0");
  if (!(gamma > 0.0)) bad.emplace_back("gamma must be > 0");
  if (!(rho > 0.0)) bad.emplace_back("rho must be > 0");
  if (!(epsilon > 0.0)) bad.emplace_back("epsilon must be > 0");
  if (!(omegaBar >= 0.0)) bad.emplace_back("omegaBar must be >= 0");
  if (!(eta >= 0.0)) bad.emplace_back("eta must be >= 0");
  if (!(betaStar > 0.0)) bad.emplace_back("betaStar must be > 0");
  if (!(betaMin > 0.0 && betaMin < beta0 && beta0 <= betaMax)) {
    bad.emplace_back("beta gains must satisfy 0 < betaMin < beta0 <= betaMax");
  }
  if (!(boundaryLayer >= 0.0)) bad.emplace_back("boundaryLayer must be >= 0");
  if (sigmaDotFilterSteps < 0) bad.emplace_back("sigmaDotFilterSteps must be >= 0");
  return bad;
}

void AtsmcParams::validate() const {
  if (auto bad = violations(); !bad.empty()) throw ConfigError(std::move(bad));
}

std::optional<double> equivalent_control(const SigmaDotTerms& terms) {
  if (!terms.authority) return std::nullopt;
  return -terms.drift / terms.controlGain;
}

std::optional<double> equivalent_control(const EngagementState& s, const RelGeometry& g,
                                         const LinearModels& m) {
  const auto terms = sigma_dot_terms(s, g, m, 0.0);
  if (!terms) return std::nullopt;
  return equivalent_control(*terms);
}

double twisting(double sigma, double sigmaDot, double beta, double mu) {
  if (sigma * sigmaDot <= 0.0) return -mu * beta * sgn(sigma);
  return -beta * sgn(sigma);
}

double accelerated_gain(double sigma, const AtsmcParams& p) {
  return std::max(p.betaStar, p.gamma * std::pow(std::abs(sigma), p.rho));
}

double adapt_gain_rate(double beta, double sigma, const AtsmcParams& p) {
  if (beta > p.betaMin) {
    const double mag = std::abs(sigma);
    return p.omegaBar * mag * sgn(std::pow(mag, p.rho) - p.epsilon);
  }
  return p.eta;
}

double adapt_gain(double beta, double sigma, double dt, const AtsmcParams& p) {
  const double next = beta + adapt_gain_rate(beta, sigma, p) * dt;
  return std::clamp(next, p.betaMin, p.betaMax);
}

double compose_command(double uEq, double uD, double deltaPrev, double dt,
                       const VehicleCoeffs& c) {
  const double mag = std::clamp(uEq + uD, -c.deltaMax, c.deltaMax);
  const double step = c.deltaRateMax * dt;
  return std::clamp(mag, deltaPrev - step, deltaPrev + step);
}

double baseline_smc(double sigma, double beta, double layer) {
  if (layer > 0.0 && std::abs(sigma) < layer) return -beta * sigma / layer;
  return -beta * sgn(sigma);
}

LyapunovDiag lyapunov_diag(double sigma, double beta, const AtsmcParams& p,
                           const LyapunovBounds& bounds) {
  LyapunovDiag d;
  const double gap = beta - p.betaMax;
  d.V = 0.5 * sigma * sigma + gap * gap / (2.0 * p.gamma);
  const double reaching = -std::abs(sigma) * (p.muI - bounds.sum());
  if (beta > p.betaMin) {
    d.VdotBound = reaching + p.omegaBar / (p.gamma * p.mu) * gap *
                                 sgn(std::pow(std::abs(sigma), p.rho) - p.epsilon);
  } else {
    d.VdotBound = reaching + gap * p.eta / p.gamma;
  }
  d.conditionSatisfied = p.muI > bounds.sum();
  return d;
}

IntegratedController::IntegratedController(Mode mode, const AtsmcParams& params,
                                           LinearModels models,
                                           std::optional<TransitionMatrix> transition)
    : params_(params),
      models_(std::move(models)),
      transition_(transition ? std::move(*transition) : TransitionMatrix(models_.AI)) {
  params_.validate();
  state_.mode = mode;
  state_.beta = params_.beta0;
}

ControlOutput IntegratedController::update(const EngagementState& s, const RelGeometry& g,
                                           double dt) {
  ControlOutput out;
  const Mat6 Phi = transition_.at(g.tgo);
  out.zem = zem_integrated(s, g, models_, Phi);
  out.sigma = out.zem.Z;

  if (state_.primed) {
    const double raw = (out.sigma - state_.sigmaPrev) / dt;
    const double blend = 1.0 / (1.0 + params_.sigmaDotFilterSteps);
    state_.sigmaDotEst += blend * (raw - state_.sigmaDotEst);
  }
  state_.sigmaPrev = out.sigma;
  state_.primed = true;
  out.sigmaDot = state_.sigmaDotEst;

  const auto terms = sigma_dot_terms(s, g, models_, Phi, 0.0);
  out.authority = terms && terms->authority;
  if (terms) out.terms = *terms;
  if (out.authority) {
    state_.lastUeq = *equivalent_control(*terms);
    state_.direction = terms->controlGain > 0.0 ? 1.0 : -1.0;
  }
  out.uEq = state_.lastUeq;

  double beta = state_.beta;
  if (state_.mode == Mode::Atsmc && params_.acceleratedFloor) {
    beta = std::clamp(std::max(beta, accelerated_gain(out.sigma, params_)), params_.betaMin,
                      params_.betaMax);
  }
  out.beta = beta;

  // A positive command lowers sigma when the control gain is negative, so the
  // switching term is signed by the gain direction.
  switch (state_.mode) {
    case Mode::Smc:
      out.uD = state_.direction * baseline_smc(out.sigma, beta, params_.boundaryLayer);
      break;
    case Mode::Tsmc:
    case Mode::Atsmc:
      out.uD = state_.direction * twisting(out.sigma, out.sigmaDot, beta, params_.mu);
      break;
  }

  out.deltaCmd = compose_command(out.uEq, out.uD, state_.deltaPrev, dt, models_.coeffs);
  state_.deltaPrev = out.deltaCmd;

  if (state_.mode == Mode::Atsmc) state_.beta = adapt_gain(state_.beta, out.sigma, dt, params_);
  return out;
}

}  // namespace zemtwist
