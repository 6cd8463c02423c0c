#include "metallic/scalars.hpp"

#include "metallic/errors.hpp"

#include <cmath>
#include <string>

namespace metallic {

MetallicParams make_params(int p, int q) {
  if (p <= 0 || q <= 0) {
    throw DomainError("metallic parameters must be positive integers, got p=" + std::to_string(p) +
                      " q=" + std::to_string(q));
  }
  MetallicParams m;
  m.p = p;
  m.q = q;
  m.delta = static_cast<double>(p) * p + 4.0 * q;
  const double root = std::sqrt(m.delta);
  m.sigma = (p + root) / 2.0;
  // p - sigma cancels badly for large p; -q / sigma is the same root computed stably.
  m.sigma_bar = -static_cast<double>(q) / m.sigma;
  return m;
}

std::vector<double> gen_fibonacci(const MetallicParams& params, int n) {
  if (n < 0) n = 0;
  std::vector<double> g(static_cast<std::size_t>(n) + 1, 0.0);
  if (n >= 1) g[1] = 1.0;
  for (int k = 1; k < n; ++k) {
    g[k + 1] = params.p * g[k] + params.q * g[k - 1];
  }
  return g;
}

double power_identity_residual(const Eigen::MatrixXd& J, const MetallicParams& params, int n) {
  if (J.rows() != J.cols()) {
    throw StructuralError("power identity needs a square matrix");
  }
  if (n < 1) {
    throw DomainError("power identity is stated for n >= 1");
  }
  const auto g = gen_fibonacci(params, n);
  Eigen::MatrixXd power = J;
  for (int k = 1; k < n; ++k) power = power * J;
  const Eigen::MatrixXd expected =
      g[n] * J + params.q * g[n - 1] * Eigen::MatrixXd::Identity(J.rows(), J.cols());
  return (power - expected).cwiseAbs().maxCoeff();
}

}  // namespace metallic
