#pragma once

#include "metallic/scalars.hpp"

#include <Eigen/Dense>

#include <functional>

namespace metallic {

/// How an ambient structure was built; carried into reports instead of the raw matrix.
struct AmbientSpec {
  enum class Kind { product, split };
  Kind kind = Kind::split;
  int a = 1;
  int b = 0;
  int lambda = 1;  // product structures only
};

/// Euclidean space E^N with a constant symmetric J satisfying J^2 = pJ + qI.
///
/// Constant J is parallel for the flat connection, so every instance is a locally
/// metallic Riemannian manifold and the connection identities apply to all of its
/// submanifolds.
class AmbientStructure {
 public:
  static constexpr int max_dim = 64;

  /// Validates symmetry, the metallic equation (1e-10) and the spectrum (1e-8).
  AmbientStructure(Eigen::MatrixXd J, MetallicParams params, AmbientSpec spec);

  int dim() const noexcept { return static_cast<int>(J_.rows()); }
  const Eigen::MatrixXd& J() const noexcept { return J_; }
  const MetallicParams& params() const noexcept { return params_; }
  const AmbientSpec& spec() const noexcept { return spec_; }

 private:
  Eigen::MatrixXd J_;
  MetallicParams params_;
  AmbientSpec spec_;
};

/// J_lambda = (p/2) I + lambda (sqrt(delta)/2) F on E^{2a+b}, where F is +1 on the
/// first a coordinates, -1 on the next a and +1 on the last b.
AmbientStructure make_product_structure(int a, int b, int lambda, const MetallicParams& params);

/// J = diag(sigma I_a, sigma_bar I_b) on E^{a+b}.
AmbientStructure make_split_structure(int a, int b, const MetallicParams& params);

Eigen::VectorXd apply_J(const AmbientStructure& amb, const Eigen::VectorXd& v);

/// max |<JX,Y> - <X,JY>| over `pairs` seeded random vector pairs.
double compatibility_residual(const AmbientStructure& amb, int pairs, unsigned long long seed);

/// A vector field on E^N.
using AmbientVectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// N_J(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] + J^2[X,Y] at `point`, with brackets
/// of the given fields evaluated by central differences (step `step`).
Eigen::VectorXd ambient_nijenhuis(const AmbientStructure& amb, const AmbientVectorField& X,
                                  const AmbientVectorField& Y, const Eigen::VectorXd& point,
                                  double step = 1e-4);

}  // namespace metallic
