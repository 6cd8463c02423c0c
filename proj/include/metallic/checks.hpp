#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace metallic {

/// One named residual check aggregated over samples.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  int samples_used = 0;
  std::vector<double> worst_sample_point;
  /// Diagnostics are reported but never affect the verdict.
  bool gated = true;
};

/// Ordered list of checks produced by one suite.
class VerificationReport {
 public:
  explicit VerificationReport(std::string suite = {}) : suite_(std::move(suite)) {}

  const std::string& suite() const noexcept { return suite_; }
  const std::vector<Check>& checks() const noexcept { return checks_; }

  /// Folds one residual into the named check (created on first use, kept in first-use
  /// order). The residual kept is the maximum; NaN always fails.
  void observe(const std::string& name, double tolerance, double residual, const Eigen::VectorXd& point,
               bool gated = true);

  /// Appends all checks of another report.
  void merge(const VerificationReport& other);

  /// Looks a check up by name; throws std::out_of_range when absent.
  const Check& at(const std::string& name) const;
  bool contains(const std::string& name) const;

  /// Every gated check passes.
  bool passed() const;

 private:
  std::string suite_;
  std::vector<Check> checks_;
};

}  // namespace metallic
