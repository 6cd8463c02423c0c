#pragma once

#include "metallic/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace metallic {

enum class DerivativeMode { analytic, central_difference };

const char* to_string(DerivativeMode mode);

/// Second derivatives of a map R^n -> R^N: one symmetric n x n block per output coordinate.
class Hessian {
 public:
  Hessian() = default;
  Hessian(int out_dim, int in_dim);

  int out_dim() const noexcept { return static_cast<int>(blocks_.size()); }
  int in_dim() const noexcept { return in_dim_; }

  Eigen::MatrixXd& block(int k) { return blocks_[k]; }
  const Eigen::MatrixXd& block(int k) const { return blocks_[k]; }

  /// sum_ij X_i Y_j d_i d_j f, an ambient vector.
  Eigen::VectorXd contract(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const;

  /// sum_k w_k d d f_k, an n x n matrix (second fundamental form along w in chart coordinates).
  Eigen::MatrixXd along(const Eigen::VectorXd& w) const;

  /// Largest entry of (H - other).
  double max_difference(const Hessian& other) const;

 private:
  int in_dim_ = 0;
  std::vector<Eigen::MatrixXd> blocks_;
};

/// A smooth map R^in -> R^out. The derivative callbacks are optional; a map without
/// them can only be used in central-difference mode.
struct SmoothMap {
  int in_dim = 0;
  int out_dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  std::function<Hessian(const Eigen::VectorXd&)> hessian;

  bool has_analytic_derivatives() const { return static_cast<bool>(jacobian) && static_cast<bool>(hessian); }
};

/// u -> B u + offset.
SmoothMap linear_map(Eigen::MatrixXd B, Eigen::VectorXd offset);

/// Axis-aligned parameter box.
struct ParamBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::VectorXd& u) const;
};

/// Finite-difference steps. The Jacobian uses cbrt(eps) max(1,|u_i|) per axis (optimal
/// for first central differences); second differences and differentiation of
/// frame-dependent fields use eps^(1/4) max(1,|u|).
double jacobian_step(double coordinate);
double second_step(double coordinate);

/// Distance kept between samples and the domain boundary so that every stencil used by
/// the connection suites stays inside the box.
double fd_margin(double bound);

/// A parametrized submanifold f: box subset R^n -> R^N, 1 <= n < N.
class Immersion {
 public:
  /// Returns the N x r normal frame at chart point u / ambient point x.
  using NormalFrameFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd& u, const Eigen::VectorXd& x)>;

  Immersion(std::string name, SmoothMap chart, ParamBox domain,
            DerivativeMode mode = DerivativeMode::analytic, NormalFrameFn frame_override = {});

  const std::string& name() const noexcept { return name_; }
  int n() const noexcept { return chart_.in_dim; }
  int N() const noexcept { return chart_.out_dim; }
  int r() const noexcept { return chart_.out_dim - chart_.in_dim; }
  const SmoothMap& chart() const noexcept { return chart_; }
  const ParamBox& domain() const noexcept { return domain_; }
  DerivativeMode mode() const noexcept { return mode_; }
  const NormalFrameFn& frame_override() const noexcept { return frame_override_; }

  Eigen::VectorXd map(const Eigen::VectorXd& u) const { return chart_.value(u); }

  /// Copy with another derivative mode.
  Immersion with_mode(DerivativeMode mode) const;

 private:
  std::string name_;
  SmoothMap chart_;
  ParamBox domain_;
  DerivativeMode mode_;
  NormalFrameFn frame_override_;
};

/// Orthonormal frame at one chart point.
struct PointFrame {
  Eigen::VectorXd u;
  Eigen::VectorXd x;
  Eigen::MatrixXd E;  // N x n tangent basis
  Eigen::MatrixXd F;  // N x r normal basis
};

/// Minimum singular value accepted for the chart Jacobian.
inline constexpr double rank_threshold = 1e-8;
/// Residual below which a coordinate axis is skipped when completing the normal frame.
inline constexpr double pivot_threshold = 1e-8;

/// df/du at u. Throws DomainError outside the domain and DegeneratePointError on rank loss.
Eigen::MatrixXd jacobian(const Immersion& imm, const Eigen::VectorXd& u);

/// d^2 f / du_i du_j at u. Same errors as jacobian().
Hessian hessian(const Immersion& imm, const Eigen::VectorXd& u);

/// Tangent frame: QR of the Jacobian columns in chart order with a positive R diagonal.
/// Normal frame: the override when present (verified), otherwise Gram-Schmidt of the
/// ambient axes e_1..e_N, in index order, against the tangent space, skipping axes
/// whose residual norm is below pivot_threshold.
PointFrame frame_at(const Immersion& imm, const Eigen::VectorXd& u);

/// Same as frame_at with a precomputed Jacobian.
PointFrame frame_from_jacobian(const Immersion& imm, const Eigen::VectorXd& u, const Eigen::MatrixXd& Df);

/// max of |E^T E - I|, |F^T F - I|, |E^T F|.
double frame_orthonormality_residual(const PointFrame& frame);

/// Deterministic stream of accepted chart points.
///
/// Points are uniform in the domain box shrunk by fd_margin, drawn coordinate by
/// coordinate from Rng(seed). A draw with a degenerate Jacobian is discarded and the
/// next draw is used, at most 10 times per requested point.
class SampleStream {
 public:
  SampleStream(const Immersion& imm, std::uint64_t seed);

  Eigen::VectorXd next();

  /// Draws without the Jacobian check (used when a caller rejects a point for its own reasons).
  Eigen::VectorXd next_raw();

 private:
  const Immersion* imm_;
  Eigen::VectorXd lo_;
  Eigen::VectorXd hi_;
  Rng rng_;
};

std::vector<Eigen::VectorXd> sample_points(const Immersion& imm, int count, std::uint64_t seed);

}  // namespace metallic
