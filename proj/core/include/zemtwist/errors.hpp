#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zemtwist {

/// Non-finite or otherwise out-of-domain numeric input.
class InputDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid scenario or parameter set. Carries every offending field name.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> fields)
      : std::invalid_argument(join(fields)), fields_(std::move(fields)) {}

  const std::vector<std::string>& fields() const { return fields_; }

 private:
  static std::string join(const std::vector<std::string>& fields) {
    std::string msg = "invalid configuration:";
    for (const auto& f : fields) msg += "\n  " + f;
    return msg;
  }

  std::vector<std::string> fields_;
};

/// The integrated state left the finite / physically reachable envelope.
class NumericalDivergence : public std::runtime_error {
 public:
  NumericalDivergence(const std::string& what, double t)
      : std::runtime_error(what + " at t=" + std::to_string(t) + " s"), time_(t) {}

  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace zemtwist
