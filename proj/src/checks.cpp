#include "metallic/checks.hpp"

#include <cmath>
#include <stdexcept>

namespace metallic {

void VerificationReport::observe(const std::string& name, double tolerance, double residual,
                                 const Eigen::VectorXd& point, bool gated) {
  Check* check = nullptr;
  for (auto& c : checks_) {
    if (c.name == name) check = &c;
  }
  if (check == nullptr) {
    checks_.push_back(Check{name, 0.0, tolerance, true, 0, {}, gated});
    check = &checks_.back();
    check->worst_sample_point.assign(point.data(), point.data() + point.size());
    check->residual = residual;
  } else if (std::isnan(residual) || (!std::isnan(check->residual) && residual > check->residual)) {
    check->residual = residual;
    check->worst_sample_point.assign(point.data(), point.data() + point.size());
  }
  ++check->samples_used;
  check->pass = !std::isnan(check->residual) && check->residual <= check->tolerance;
}

void VerificationReport::merge(const VerificationReport& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

const Check& VerificationReport::at(const std::string& name) const {
  for (const auto& c : checks_) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check named '" + name + "'");
}

bool VerificationReport::contains(const std::string& name) const {
  for (const auto& c : checks_) {
    if (c.name == name) return true;
  }
  return false;
}

bool VerificationReport::passed() const {
  for (const auto& c : checks_) {
    if (c.gated && !c.pass) return false;
  }
  return true;
}

}  // namespace metallic
