#pragma once

#include <string>
#include <vector>

namespace ncftap {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

/// Accumulates named residual checks; a report passes iff every check does.
class ValidationReport {
 public:
  void add(std::string name, double residual, double threshold) {
    checks_.push_back({std::move(name), residual, threshold, residual <= threshold});
  }
  void add_flag(std::string name, bool ok) {
    checks_.push_back({std::move(name), ok ? 0.0 : 1.0, 0.5, ok});
  }
  void merge(const ValidationReport& other, const std::string& prefix = "") {
    for (const auto& c : other.checks_)
      checks_.push_back({prefix + c.name, c.residual, c.threshold, c.pass});
  }

  bool pass() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }
  const std::vector<CheckResult>& checks() const { return checks_; }
  const CheckResult* first_failure() const {
    for (const auto& c : checks_)
      if (!c.pass) return &c;
    return nullptr;
  }
  double max_residual() const {
    double m = 0.0;
    for (const auto& c : checks_) m = std::max(m, c.residual);
    return m;
  }
  std::string to_string() const;

 private:
  std::vector<CheckResult> checks_;
};

}  // namespace ncftap
