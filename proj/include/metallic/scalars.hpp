#pragma once

#include <Eigen/Dense>

#include <vector>

namespace metallic {

/// Scalar data of the metallic equation x^2 = p x + q.
///
/// `sigma` is the positive root (the metallic number), `sigma_bar = p - sigma`
/// the conjugate root and `delta = p^2 + 4q` the discriminant. The golden
/// ratio is p = q = 1, the silver ratio p = 2, q = 1.
struct MetallicParams {
  int p = 1;
  int q = 1;
  double sigma = 0.0;
  double sigma_bar = 0.0;
  double delta = 0.0;
};

/// Builds the parameter set for positive integers p, q.
/// Throws DomainError when p <= 0 or q <= 0.
MetallicParams make_params(int p, int q);

/// Generalized secondary Fibonacci numbers g_0..g_n with g_0 = 0, g_1 = 1 and
/// g_{k+1} = p g_k + q g_{k-1}.
///
/// Values are doubles; they are exact integers while they stay below 2^53,
/// which holds for n <= 22 with p, q <= 5 and is the reason residual checks
/// stop at n = 12. The documented upper bound for callers is n <= 64.
std::vector<double> gen_fibonacci(const MetallicParams& params, int n);

/// max |J^n - (g_n J + q g_{n-1} I)| over all entries.
/// Throws StructuralError for a non-square J and DomainError for n < 1.
double power_identity_residual(const Eigen::MatrixXd& J, const MetallicParams& params, int n);

}  // namespace metallic
