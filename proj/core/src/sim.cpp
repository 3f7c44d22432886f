#include "zemtwist/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "zemtwist/errors.hpp"

namespace zemtwist {

namespace {

void prefixed(std::vector<std::string>& out, const std::vector<std::string>& in,
              const std::string& prefix) {
  for (const auto& v : in) out.push_back(prefix + v);
}

bool finite_all(const EngagementState::Array& a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

struct Planar {
  double x = 0.0;
  double z = 0.0;
};

Planar relative_position(const EngagementState& s) { return {s.xT - s.xM, s.zT - s.zM}; }

// Quadratic through three equally spaced samples at u = 0, 1, 2 (u in steps).
struct QuadraticPath {
  Planar p0, p1, p2;

  Planar at(double u) const {
    const double l0 = 0.5 * (u - 1.0) * (u - 2.0);
    const double l1 = -u * (u - 2.0);
    const double l2 = 0.5 * u * (u - 1.0);
    return {l0 * p0.x + l1 * p1.x + l2 * p2.x, l0 * p0.z + l1 * p1.z + l2 * p2.z};
  }
  double range(double u) const {
    const Planar p = at(u);
    return std::hypot(p.x, p.z);
  }
};

// Minimum of the interpolated range over [lo, hi] (in steps): dense scan then
// golden-section refinement around the best grid point.
double min_range(const QuadraticPath& path, double lo, double hi) {
  constexpr int kGrid = 200;
  double bestU = lo;
  double best = path.range(lo);
  for (int i = 1; i <= kGrid; ++i) {
    const double u = lo + (hi - lo) * i / kGrid;
    const double r = path.range(u);
    if (r < best) {
      best = r;
      bestU = u;
    }
  }
  const double h = (hi - lo) / kGrid;
  double a = std::max(lo, bestU - h);
  double b = std::min(hi, bestU + h);
  const double invPhi = 0.6180339887498949;
  double c = b - invPhi * (b - a);
  double d = a + invPhi * (b - a);
  for (int it = 0; it < 80; ++it) {
    if (path.range(c) < path.range(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - invPhi * (b - a);
    d = a + invPhi * (b - a);
  }
  return std::min(best, path.range(0.5 * (a + b)));
}

}  // namespace

std::vector<std::string> ScenarioConfig::violations() const {
  std::vector<std::string> bad;
  prefixed(bad, coeffs.violations(), "coeffs.");
  if (plantCoeffs) prefixed(bad, plantCoeffs->violations(), "plantCoeffs.");
  prefixed(bad, control.violations(), "control.");

  if (!(std::isfinite(geometry.range) && geometry.range > 0.0)) {
    bad.emplace_back("geometry.range must be > 0");
  }
  if (!std::isfinite(geometry.lambda0)) bad.emplace_back("geometry.lambda0 must be finite");
  if (!std::isfinite(geometry.headingError)) {
    bad.emplace_back("geometry.headingError must be finite");
  }
  if (!std::isfinite(geometry.gammaT0)) bad.emplace_back("geometry.gammaT0 must be finite");
  if (coeffs.VM > 0.0 && coeffs.VT >= 0.0 &&
      std::abs(coeffs.VT * std::sin(geometry.gammaT0 + geometry.lambda0)) > coeffs.VM) {
    bad.emplace_back("geometry.gammaT0 admits no collision course for the given speeds");
  }

  if (!(maneuver.period > 0.0)) bad.emplace_back("maneuver.period must be > 0");
  if (!(maneuver.phase >= 0.0 && maneuver.phase <= maneuver.period)) {
    bad.emplace_back("maneuver.phase must lie in [0, period]");
  }
  if (!(maneuver.amplitude >= 0.0)) bad.emplace_back("maneuver.amplitude must be >= 0");
  if (maneuver.amplitude > coeffs.aTmax) {
    bad.emplace_back("maneuver.amplitude exceeds the target acceleration limit aTmax");
  }

  if (!(uncertainty.fraction >= 0.0)) bad.emplace_back("uncertainty.fraction must be >= 0");
  if (!(uncertainty.clipSigma > 0.0)) bad.emplace_back("uncertainty.clipSigma must be > 0");
  if (!(uncertainty.tauTMin > 0.0 && uncertainty.tauTMin <= uncertainty.tauTMax)) {
    bad.emplace_back("uncertainty tauT range must satisfy 0 < tauTMin <= tauTMax");
  }

  if (!(disturbance.deltaQBound >= 0.0) || std::abs(disturbance.deltaQ) > disturbance.deltaQBound) {
    bad.emplace_back("disturbance.deltaQ exceeds disturbance.deltaQBound");
  }
  if (!(disturbance.deltaABound >= 0.0) || std::abs(disturbance.deltaA) > disturbance.deltaABound) {
    bad.emplace_back("disturbance.deltaA exceeds disturbance.deltaABound");
  }
  if (!(lyapunov.targetCommand >= 0.0 && lyapunov.targetLag >= 0.0 &&
        lyapunov.integrated >= 0.0)) {
    bad.emplace_back("lyapunov bounds must be >= 0");
  }

  if (!(std::isfinite(integrator.dt) && integrator.dt > 0.0)) {
    bad.emplace_back("integrator.dt must be > 0");
  }
  if (!(std::isfinite(integrator.tMax) && integrator.tMax > 0.0)) {
    bad.emplace_back("integrator.tMax must be > 0");
  }
  if (!(model.tableStep > 0.0)) bad.emplace_back("model.tableStep must be > 0");
  return bad;
}

std::vector<std::string> ScenarioConfig::warnings() const {
  std::vector<std::string> out;
  if (integrator.dt > plant().tauS / 10.0) {
    out.emplace_back("integrator.dt exceeds tauS/10; the servo lag is under-resolved");
  }
  return out;
}

void ScenarioConfig::validate() const {
  if (auto bad = violations(); !bad.empty()) throw ConfigError(std::move(bad));
}

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::RangeMinimum:
      return "range-min";
    case TerminationReason::Timeout:
      return "timeout";
    case TerminationReason::Diverged:
      return "diverged";
  }
  return "unknown";
}

double target_command(double t, const ManeuverConfig& m) {
  if (m.amplitude == 0.0) return 0.0;
  if (t < m.phase) return -m.amplitude;
  const double local = std::fmod(t - m.phase, m.period);
  return local < 0.5 * m.period ? m.amplitude : -m.amplitude;
}

VehicleCoeffs sample_coeffs(const VehicleCoeffs& nominal, const UncertaintyConfig& u,
                            std::mt19937_64& rng) {
  VehicleCoeffs out = nominal;
  if (u.fraction > 0.0) {
    std::normal_distribution<double> unit(0.0, 1.0);
    auto perturb = [&](double& value) {
      const double sd = u.fraction * std::abs(value);
      const double z = std::clamp(unit(rng), -u.clipSigma, u.clipSigma);
      value += sd * z;
    };
    perturb(out.Lalpha);
    perturb(out.Ldelta);
    perturb(out.Malpha);
    perturb(out.Mq);
    perturb(out.Mdelta);
  }
  if (u.sampleTauT) {
    std::uniform_real_distribution<double> tau(u.tauTMin, u.tauTMax);
    out.tauT = tau(rng);
  }
  return out;
}

double collision_course_heading(const GeometryConfig& g, const VehicleCoeffs& c) {
  const double ratio = c.VT * std::sin(g.gammaT0 + g.lambda0) / c.VM;
  if (!(std::abs(ratio) <= 1.0)) {
    throw ConfigError({"geometry.gammaT0 admits no collision course for the given speeds"});
  }
  return g.lambda0 + std::asin(ratio);
}

EngagementState initial_state(const ScenarioConfig& sc) {
  const GeometryConfig& g = sc.geometry;
  EngagementState s;
  s.xT = g.range * std::cos(g.lambda0);
  s.zT = g.range * std::sin(g.lambda0);
  s.gammaM = collision_course_heading(g, sc.coeffs) + g.headingError;
  s.gammaT = g.gammaT0;
  s.theta = s.gammaM + s.alpha;
  return s;
}

EngagementState step(const EngagementState& s, double deltaCmd, double aTcmd,
                     const VehicleCoeffs& c, double dt, const AeroShape& aero,
                     const PitchDisturbance& dist) {
  using Array = EngagementState::Array;
  const Array x0 = s.to_array();
  auto at = [&](const Array& k, double scale) {
    Array x = x0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += scale * k[i];
    return EngagementState::from_array(x, s.t);
  };
  const Array k1 = state_derivative(s, deltaCmd, aTcmd, c, aero, dist);
  const Array k2 = state_derivative(at(k1, 0.5 * dt), deltaCmd, aTcmd, c, aero, dist);
  const Array k3 = state_derivative(at(k2, 0.5 * dt), deltaCmd, aTcmd, c, aero, dist);
  const Array k4 = state_derivative(at(k3, dt), deltaCmd, aTcmd, c, aero, dist);

  Array x = x0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  const double tNext = s.t + dt;
  if (!finite_all(x)) throw NumericalDivergence("non-finite state", tNext);

  // The servo is a first-order lag of a bounded command, so an exact solution
  // never leaves [-deltaMax, deltaMax] when it started inside.
  const double limit = std::max(c.deltaMax, std::abs(s.delta));
  const double slack = 1e-9 * limit + 1e-12;
  if (std::abs(deltaCmd) <= c.deltaMax && std::abs(x[9]) > limit + slack) {
    throw NumericalDivergence("canard deflection left its reachable range", tNext);
  }
  return EngagementState::from_array(x, tNext);
}

double extract_miss_distance(const std::vector<EngagementState>& states, bool extrapolate) {
  if (states.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t best = 0;
  double bestR = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Planar p = relative_position(states[i]);
    const double r = std::hypot(p.x, p.z);
    if (r < bestR) {
      bestR = r;
      best = i;
    }
  }
  if (states.size() < 3) return bestR;

  const std::size_t n = states.size();
  auto path_from = [&](std::size_t first) {
    return QuadraticPath{relative_position(states[first]), relative_position(states[first + 1]),
                         relative_position(states[first + 2])};
  };

  double refined = bestR;
  if (extrapolate) {
    // Continue past the last sample by up to two steps.
    refined = min_range(path_from(n - 3), 0.0, 4.0);
  } else if (best == 0) {
    refined = min_range(path_from(0), 0.0, 2.0);
  } else if (best == n - 1) {
    refined = min_range(path_from(n - 3), 0.0, 2.0);
  } else {
    refined = min_range(path_from(best - 1), 0.0, 2.0);
  }
  return std::min(refined, bestR);
}

Trace run_engagement(const ScenarioConfig& sc) { return run_engagement(sc, sc.mode); }

Trace run_engagement(const ScenarioConfig& sc, Mode mode) {
  sc.validate();
  const VehicleCoeffs& plant = sc.plant();
  const double dt = sc.integrator.dt;

  EngagementState s = initial_state(sc);
  LinearModels models = build_models(sc.coeffs, s.gammaM, sc.geometry.lambda0);

  std::optional<TransitionMatrix> transition;
  if (sc.model.transitionTable) {
    const double closing = sc.coeffs.VM + sc.coeffs.VT;
    const double tgoMax = 1.5 * sc.geometry.range / std::max(closing, 1.0) + 1.0;
    transition.emplace(models.AI, tgoMax, sc.model.tableStep);
  }
  IntegratedController controller(mode, sc.control, models, std::move(transition));

  Trace trace;
  trace.mode = mode;
  trace.dt = dt;
  const auto maxSteps = static_cast<std::size_t>(std::ceil(sc.integrator.tMax / dt));
  trace.samples.reserve(std::min<std::size_t>(maxSteps + 1, 200000));

  std::vector<EngagementState> history;
  history.reserve(trace.samples.capacity() + 1);
  const AeroShape aero;
  bool extrapolate = false;

  for (std::size_t k = 0;; ++k) {
    s.t = static_cast<double>(k) * dt;
    history.push_back(s);

    const auto geom = rel_geometry(s, plant);
    if (!geom) {
      trace.terminal.reason = TerminationReason::RangeMinimum;
      trace.terminal.detail = "range below terminal threshold";
      extrapolate = true;
      break;
    }
    if (k > 0 && geom->Vr >= 0.0) {
      trace.terminal.reason = TerminationReason::RangeMinimum;
      trace.terminal.detail = "closing rate changed sign";
      break;
    }
    if (k >= maxSteps) {
      trace.terminal.reason = TerminationReason::Timeout;
      trace.terminal.detail = "tMax exceeded";
      break;
    }

    const ControlOutput ctl = controller.update(s, *geom, dt);
    const double aTcmd = target_command(s.t, sc.maneuver);

    TraceSample sample;
    sample.t = s.t;
    sample.state = s;
    sample.geom = *geom;
    sample.zem = ctl.sigma;
    sample.sigmaDot = ctl.sigmaDot;
    sample.beta = ctl.beta;
    sample.delta = s.delta;
    sample.deltaCmd = ctl.deltaCmd;
    sample.aTcmd = aTcmd;
    sample.uEq = ctl.uEq;
    sample.uD = ctl.uD;
    const Vec3 xM{s.alpha, s.q, s.delta};
    sample.aMN = sc.model.accelFromDerivative
                     ? uav_normal_accel_from_derivative(xM, ctl.deltaCmd, models)
                     : uav_normal_accel(xM, models);
    if (std::abs(s.alpha) > 0.5) trace.alphaWarning = true;
    trace.samples.push_back(sample);

    try {
      s = step(s, ctl.deltaCmd, aTcmd, plant, dt, aero, sc.disturbance);
    } catch (const NumericalDivergence& e) {
      trace.terminal.reason = TerminationReason::Diverged;
      trace.terminal.detail = e.what();
      s.t = e.time();
      break;
    }
  }

  trace.terminal.finalState = s;
  trace.terminal.interceptTime = s.t;
  trace.terminal.missDistance = extract_miss_distance(history, extrapolate);
  return trace;
}

double terminal_zem_overshoot(const Trace& trace, double window) {
  if (trace.samples.empty()) return 0.0;
  const double start = trace.samples.back().t - window;
  double worst = 0.0;
  for (auto it = trace.samples.rbegin(); it != trace.samples.rend() && it->t >= start; ++it) {
    // Past the point where |Vr| < |Vlambda| the engagement is a fly-by and
    // tgo = -r/Vr grows without bound, so Z no longer measures a miss.
    if (std::abs(it->geom.Vr) < std::abs(it->geom.Vlambda)) continue;
    worst = std::max(worst, std::abs(it->zem));
  }
  return worst;
}

int canard_reversal_count(const Trace& trace) {
  int reversals = 0;
  double lastSign = 0.0;
  for (std::size_t i = 1; i < trace.samples.size(); ++i) {
    const double inc = trace.samples[i].deltaCmd - trace.samples[i - 1].deltaCmd;
    const double sign = sgn(inc);
    if (sign == 0.0) continue;
    if (lastSign != 0.0 && sign != lastSign) ++reversals;
    lastSign = sign;
  }
  return reversals;
}

double beta_integral(const Trace& trace) {
  double sum = 0.0;
  for (const auto& s : trace.samples) sum += s.beta * trace.dt;
  return sum;
}

}  // namespace zemtwist
