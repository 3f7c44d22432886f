#include "zemtwist_cli/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>

#include "zemtwist/errors.hpp"

namespace zemtwist::cli {

using nlohmann::json;

namespace {

// Single field list shared by the reader and the writer. `C` is either
// VehicleCoeffs or const VehicleCoeffs.
template <class C, class V>
void visit_coeffs(C& c, V& v) {
  v.begin("uav");
  v.number("speed_mps", c.VM);
  v.number("L_alpha_mps2", c.Lalpha);
  v.number("L_delta_mps2", c.Ldelta);
  v.number("M_alpha_ps2", c.Malpha);
  v.number("M_q_ps", c.Mq);
  v.number("M_delta_ps2", c.Mdelta);
  v.number("servo_tau_s", c.tauS);
  v.number("accel_lag_tau_s", c.tauM);
  v.number("accel_max_g", c.aMmax, kStandardGravity);
  v.number("delta_max_deg", c.deltaMax, kDegToRad);
  v.number("delta_rate_max_dps", c.deltaRateMax, kDegToRad);
  v.end();
  v.begin("target");
  v.number("speed_mps", c.VT);
  v.number("tau_s", c.tauT);
  v.number("accel_max_g", c.aTmax, kStandardGravity);
  v.end();
}

template <class S, class V>
void visit_scenario(S& s, V& v) {
  v.begin("geometry");
  v.number("range_m", s.geometry.range);
  v.number("los_deg", s.geometry.lambda0, kDegToRad);
  v.number("heading_error_deg", s.geometry.headingError, kDegToRad);
  v.number("target_path_angle_deg", s.geometry.gammaT0, kDegToRad);
  v.end();

  visit_coeffs(s.coeffs, v);

  v.begin("controller");
  v.mode("mode", s.mode);
  v.number("mu", s.control.mu);
  v.number("mu_I_mps", s.control.muI);
  v.number("gamma", s.control.gamma);
  v.number("rho", s.control.rho);
  v.number("epsilon", s.control.epsilon);
  v.number("omega_bar", s.control.omegaBar);
  v.number("eta", s.control.eta);
  v.number("beta_star", s.control.betaStar);
  v.number("beta_min", s.control.betaMin);
  v.number("beta_max", s.control.betaMax);
  v.number("beta0", s.control.beta0);
  v.number("boundary_layer_m", s.control.boundaryLayer);
  v.integer("sigma_dot_filter_steps", s.control.sigmaDotFilterSteps);
  v.flag("accelerated_floor", s.control.acceleratedFloor);
  v.end();

  v.begin("maneuver");
  v.number("period_s", s.maneuver.period);
  v.number("phase_s", s.maneuver.phase);
  v.number("amplitude_g", s.maneuver.amplitude, kStandardGravity);
  v.end();

  v.begin("uncertainty");
  v.number("fraction", s.uncertainty.fraction);
  v.number("clip_sigma", s.uncertainty.clipSigma);
  v.seed("seed", s.uncertainty.seed);
  v.flag("sample_tau_T", s.uncertainty.sampleTauT);
  v.number("tau_T_min_s", s.uncertainty.tauTMin);
  v.number("tau_T_max_s", s.uncertainty.tauTMax);
  v.flag("randomize_phase", s.uncertainty.randomizePhase);
  v.end();

  v.begin("disturbance");
  v.number("pitch_accel_rps2", s.disturbance.deltaQ);
  v.number("pitch_accel_bound_rps2", s.disturbance.deltaQBound);
  v.number("lift_accel_mps2", s.disturbance.deltaA);
  v.number("lift_accel_bound_mps2", s.disturbance.deltaABound);
  v.end();

  v.begin("lyapunov");
  v.number("target_command_bound_mps", s.lyapunov.targetCommand);
  v.number("target_lag_bound_mps", s.lyapunov.targetLag);
  v.number("integrated_bound_mps", s.lyapunov.integrated);
  v.end();

  v.begin("integrator");
  v.number("dt", s.integrator.dt);
  v.number("t_max", s.integrator.tMax);
  v.end();

  v.begin("model");
  v.flag("transition_table", s.model.transitionTable);
  v.number("table_step_s", s.model.tableStep);
  v.flag("accel_from_derivative", s.model.accelFromDerivative);
  v.end();
}

class Reader {
 public:
  Reader(const json& root, std::string prefix, std::vector<std::string>& errors)
      : root_(root), prefix_(std::move(prefix)), errors_(errors) {
    if (!root_.is_object()) {
      errors_.push_back((prefix_.empty() ? std::string("scenario") : prefix_) +
                        " must be a JSON object");
    }
  }

  void begin(const std::string& name) {
    section_ = name;
    current_ = nullptr;
    seen_.clear();
    if (!root_.is_object() || !root_.contains(name)) return;
    sections_.insert(name);
    const json& obj = root_.at(name);
    if (!obj.is_object()) {
      errors_.push_back(label("") + " must be a JSON object");
      return;
    }
    current_ = &obj;
  }

  void end() {
    if (current_ == nullptr) return;
    for (const auto& [key, value] : current_->items()) {
      if (!seen_.contains(key)) errors_.push_back(label(key) + ": unknown key");
    }
  }

  void number(const char* key, double& out, double scale = 1.0) {
    const json* v = find(key);
    if (v == nullptr) return;
    if (!v->is_number()) {
      errors_.push_back(label(key) + " must be a number");
      return;
    }
    out = v->get<double>() * scale;
  }

  void integer(const char* key, int& out) {
    const json* v = find(key);
    if (v == nullptr) return;
    if (!v->is_number_integer()) {
      errors_.push_back(label(key) + " must be an integer");
      return;
    }
    out = v->get<int>();
  }

  void seed(const char* key, std::uint64_t& out) {
    const json* v = find(key);
    if (v == nullptr) return;
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      errors_.push_back(label(key) + " must be a non-negative integer");
      return;
    }
    out = v->get<std::uint64_t>();
  }

  void flag(const char* key, bool& out) {
    const json* v = find(key);
    if (v == nullptr) return;
    if (!v->is_boolean()) {
      errors_.push_back(label(key) + " must be true or false");
      return;
    }
    out = v->get<bool>();
  }

  void mode(const char* key, Mode& out) {
    const json* v = find(key);
    if (v == nullptr) return;
    const auto parsed = v->is_string() ? parse_mode(v->get<std::string>()) : std::nullopt;
    if (!parsed) {
      errors_.push_back(label(key) + " must be one of smc, tsmc, atsmc");
      return;
    }
    out = *parsed;
  }

  /// Reports top-level keys not covered by any section (besides `allowed`).
  void finish(const std::set<std::string>& allowed = {}) {
    if (!root_.is_object()) return;
    for (const auto& [key, value] : root_.items()) {
      if (!sections_.contains(key) && !allowed.contains(key)) {
        errors_.push_back(prefix_ + key + ": unknown key");
      }
    }
  }

 private:
  const json* find(const char* key) {
    seen_.insert(key);
    if (current_ == nullptr || !current_->contains(key)) return nullptr;
    return &current_->at(key);
  }

  std::string label(const std::string& key) const {
    std::string out = prefix_ + section_;
    if (!key.empty()) out += "." + key;
    return out;
  }

  const json& root_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::string section_;
  const json* current_ = nullptr;
  std::set<std::string> seen_;
  std::set<std::string> sections_;
};

// Boundary value whose product with `scale` reproduces `si` exactly, so that
// emit followed by parse is lossless for any value that parse can produce.
// A short decimal is preferred when one exists.
double to_boundary(double si, double scale) {
  const double guess = si / scale;
  if (scale == 1.0) return guess;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", guess);
  if (const double shortest = std::strtod(buf, nullptr); shortest * scale == si) return shortest;
  if (guess * scale == si) return guess;
  double up = guess;
  double down = guess;
  for (int i = 0; i < 64; ++i) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    if (up * scale == si) return up;
    down = std::nextafter(down, -std::numeric_limits<double>::infinity());
    if (down * scale == si) return down;
  }
  return guess;
}

class Writer {
 public:
  explicit Writer(json& root) : root_(root) {}

  void begin(const std::string& name) { current_ = &root_[name]; }
  void end() { current_ = nullptr; }
  void number(const char* key, double v, double scale = 1.0) {
    (*current_)[key] = to_boundary(v, scale);
  }
  void integer(const char* key, int v) { (*current_)[key] = v; }
  void seed(const char* key, std::uint64_t v) { (*current_)[key] = v; }
  void flag(const char* key, bool v) { (*current_)[key] = v; }
  void mode(const char* key, Mode v) { (*current_)[key] = std::string(to_string(v)); }

 private:
  json& root_;
  json* current_ = nullptr;
};

}  // namespace

ScenarioConfig parse_scenario(const json& doc) {
  ScenarioConfig sc;
  std::vector<std::string> errors;
  Reader reader(doc, "", errors);
  visit_scenario(sc, reader);
  reader.finish({"plant"});

  if (doc.is_object() && doc.contains("plant")) {
    VehicleCoeffs plant = sc.coeffs;
    Reader plantReader(doc.at("plant"), "plant.", errors);
    visit_coeffs(plant, plantReader);
    plantReader.finish();
    sc.plantCoeffs = plant;
  }
  for (auto& v : sc.violations()) errors.push_back(std::move(v));
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return sc;
}

ScenarioConfig parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open scenario file " + path.string()});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({"scenario file " + path.string() + " is not valid JSON: " + e.what()});
  }
  return parse_scenario(doc);
}

json emit_scenario(const ScenarioConfig& config) {
  json doc = json::object();
  Writer writer(doc);
  visit_scenario(config, writer);
  if (config.plantCoeffs) {
    json plant = json::object();
    Writer plantWriter(plant);
    visit_coeffs(*config.plantCoeffs, plantWriter);
    doc["plant"] = plant;
  }
  return doc;
}

}  // namespace zemtwist::cli
