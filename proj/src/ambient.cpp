#include "metallic/ambient.hpp"

#include "metallic/errors.hpp"
#include "metallic/random.hpp"

#include <cmath>
#include <string>

namespace metallic {

AmbientStructure::AmbientStructure(Eigen::MatrixXd J, MetallicParams params, AmbientSpec spec)
    : J_(std::move(J)), params_(params), spec_(spec) {
  if (J_.rows() != J_.cols() || J_.rows() < 1) {
    throw StructuralError("ambient structure needs a non-empty square matrix");
  }
  if (J_.rows() > max_dim) {
    throw DomainError("ambient dimension " + std::to_string(J_.rows()) + " exceeds " +
                      std::to_string(max_dim));
  }
  if ((J_ - J_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("J is not symmetric, so it is not compatible with the Euclidean metric");
  }
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(J_.rows(), J_.cols());
  if ((J_ * J_ - params_.p * J_ - params_.q * I).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("J does not satisfy J^2 = pJ + qI");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J_, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double mu = eig.eigenvalues()(i);
    if (std::min(std::abs(mu - params_.sigma), std::abs(mu - params_.sigma_bar)) > 1e-8) {
      throw DomainError("eigenvalue of J is neither sigma nor sigma_bar");
    }
  }
}

AmbientStructure make_product_structure(int a, int b, int lambda, const MetallicParams& params) {
  if (a < 1) throw DomainError("product structure needs a >= 1");
  if (b < 0) throw DomainError("product structure needs b >= 0");
  if (lambda != 1 && lambda != -1) throw DomainError("lambda must be +1 or -1");
  const int n = 2 * a + b;
  Eigen::VectorXd f = Eigen::VectorXd::Ones(n);
  f.segment(a, a).setConstant(-1.0);
  // (p/2) + s sqrt(delta)/2 is sigma for s = +1 and sigma_bar for s = -1; the stored
  // roots are used so that the spectrum is exactly {sigma, sigma_bar}.
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) {
    diag(i) = (lambda * f(i) > 0) ? params.sigma : params.sigma_bar;
  }
  AmbientSpec spec{AmbientSpec::Kind::product, a, b, lambda};
  return AmbientStructure(diag.asDiagonal(), params, spec);
}

AmbientStructure make_split_structure(int a, int b, const MetallicParams& params) {
  if (a < 1 || b < 1) throw DomainError("split structure needs a, b >= 1");
  Eigen::VectorXd diag(a + b);
  diag.head(a).setConstant(params.sigma);
  diag.tail(b).setConstant(params.sigma_bar);
  AmbientSpec spec{AmbientSpec::Kind::split, a, b, 1};
  return AmbientStructure(diag.asDiagonal(), params, spec);
}

Eigen::VectorXd apply_J(const AmbientStructure& amb, const Eigen::VectorXd& v) {
  if (v.size() != amb.dim()) {
    throw StructuralError("vector of size " + std::to_string(v.size()) +
                          " applied to J of dimension " + std::to_string(amb.dim()));
  }
  return amb.J() * v;
}

double compatibility_residual(const AmbientStructure& amb, int pairs, unsigned long long seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Eigen::VectorXd x = rng.gaussian_vector(amb.dim());
    const Eigen::VectorXd y = rng.gaussian_vector(amb.dim());
    worst = std::max(worst, std::abs(apply_J(amb, x).dot(y) - x.dot(apply_J(amb, y))));
  }
  return worst;
}

namespace {

Eigen::VectorXd directional(const AmbientVectorField& field, const Eigen::VectorXd& point,
                            const Eigen::VectorXd& direction, double step) {
  return (field(point + step * direction) - field(point - step * direction)) / (2.0 * step);
}

Eigen::VectorXd bracket(const AmbientVectorField& X, const AmbientVectorField& Y,
                        const Eigen::VectorXd& point, double step) {
  return directional(Y, point, X(point), step) - directional(X, point, Y(point), step);
}

}  // namespace

Eigen::VectorXd ambient_nijenhuis(const AmbientStructure& amb, const AmbientVectorField& X,
                                  const AmbientVectorField& Y, const Eigen::VectorXd& point,
                                  double step) {
  const Eigen::MatrixXd& J = amb.J();
  const AmbientVectorField JX = [&](const Eigen::VectorXd& p) { return Eigen::VectorXd(J * X(p)); };
  const AmbientVectorField JY = [&](const Eigen::VectorXd& p) { return Eigen::VectorXd(J * Y(p)); };
  return bracket(JX, JY, point, step) - J * bracket(JX, Y, point, step) -
         J * bracket(X, JY, point, step) + J * J * bracket(X, Y, point, step);
}

}  // namespace metallic
