#include "metallic/slant.hpp"

#include "metallic/errors.hpp"
#include "metallic/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace metallic {

double slant_angle(const SigmaStructure& sigma, const Eigen::VectorXd& X) {
  if (X.size() != sigma.n()) throw StructuralError("tangent vector has the wrong dimension");
  if (X.norm() == 0.0) throw DomainError("slant angle of the zero vector");
  const double tangential = (sigma.T * X).norm();
  const double normal = sigma.r() == 0 ? 0.0 : (sigma.Nmat * X).norm();
  return std::atan2(normal, tangential);
}

const char* to_string(SlantClass c) {
  switch (c) {
    case SlantClass::invariant:
      return "invariant";
    case SlantClass::anti_invariant:
      return "anti-invariant";
    case SlantClass::proper_slant:
      return "proper-slant";
    case SlantClass::not_slant:
      break;
  }
  return "not-slant";
}

double slant_quadratic_residual(const SigmaStructure& sigma, const MetallicParams& params, double lambda) {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(sigma.n(), sigma.n());
  return (sigma.T * sigma.T - lambda * (params.p * sigma.T + params.q * I)).cwiseAbs().maxCoeff();
}

SlantMetricResiduals slant_metric_residuals(const SigmaStructure& sigma, const MetallicParams& params,
                                            double theta, int pairs, std::uint64_t seed) {
  const double c2 = std::cos(theta) * std::cos(theta);
  const double s2 = std::sin(theta) * std::sin(theta);
  Rng rng(seed);
  SlantMetricResiduals out;
  for (int k = 0; k < pairs; ++k) {
    const Eigen::VectorXd X = rng.gaussian_vector(sigma.n());
    const Eigen::VectorXd Y = rng.gaussian_vector(sigma.n());
    // For tangent X, <X, JY> = <X, TY>.
    const double base = params.p * X.dot(sigma.T * Y) + params.q * X.dot(Y);
    out.tangential = std::max(out.tangential, std::abs((sigma.T * X).dot(sigma.T * Y) - c2 * base));
    const double nn = sigma.r() == 0 ? 0.0 : (sigma.Nmat * X).dot(sigma.Nmat * Y);
    out.normal = std::max(out.normal, std::abs(nn - s2 * base));
  }
  return out;
}

double slant_tangent_form_residual(const SigmaStructure& sigma, double theta, double angle_tol) {
  if (!(theta >= angle_tol && theta <= std::numbers::pi / 2 - angle_tol)) {
    throw PreconditionError("tangent form needs a proper slant angle");
  }
  const double t = std::tan(theta);
  return (sigma.T * sigma.T - sigma.xi * sigma.eta / (t * t)).cwiseAbs().maxCoeff();
}

SlantReport classify_slant(const Immersion& imm, const AmbientStructure& amb, int samples, int directions,
                           std::uint64_t seed, double angle_tol) {
  if (samples < 1) throw DomainError("slant classification needs at least one sample");
  if (directions < imm.n()) throw DomainError("slant classification needs at least n directions");
  if (!(angle_tol > 0.0)) throw DomainError("angle tolerance must be positive");

  SlantReport report;
  report.samples = samples;
  report.directions = directions;
  report.angle_tol = angle_tol;
  report.theta_min = std::numeric_limits<double>::infinity();
  report.theta_max = -std::numeric_limits<double>::infinity();

  const auto points = sample_points(imm, samples, seed);
  std::vector<SigmaStructure> sigmas;
  double total = 0.0;
  Rng dir_rng(derive_seed(seed, 1));
  for (const auto& u : points) {
    const PointFrame frame = frame_at(imm, u);
    sigmas.push_back(decompose(amb, frame));
    const SigmaStructure& s = sigmas.back();
    SampleAngles stats;
    stats.u.assign(u.data(), u.data() + u.size());
    stats.min = std::numeric_limits<double>::infinity();
    stats.max = -std::numeric_limits<double>::infinity();
    for (int d = 0; d < directions; ++d) {
      const Eigen::VectorXd X = d < imm.n() ? Eigen::VectorXd(Eigen::VectorXd::Unit(imm.n(), d))
                                            : dir_rng.unit_vector(imm.n());
      const double theta = slant_angle(s, X);
      stats.min = std::min(stats.min, theta);
      stats.max = std::max(stats.max, theta);
      stats.mean += theta;
      total += theta;
      const Eigen::VectorXd ambient = frame.E * X;
      if (theta < report.theta_min) {
        report.theta_min = theta;
        report.witness_min_point = stats.u;
        report.witness_min_direction.assign(ambient.data(), ambient.data() + ambient.size());
      }
      if (theta > report.theta_max) {
        report.theta_max = theta;
        report.witness_max_point = stats.u;
        report.witness_max_direction.assign(ambient.data(), ambient.data() + ambient.size());
      }
    }
    stats.mean /= directions;
    report.per_sample.push_back(std::move(stats));
  }
  report.theta_mean = total / (static_cast<double>(samples) * directions);
  report.deviation = report.theta_max - report.theta_min;
  report.lambda_hat = std::cos(report.theta_mean) * std::cos(report.theta_mean);

  if (report.deviation > angle_tol) {
    report.classification = SlantClass::not_slant;
    return report;
  }
  if (report.theta_mean <= angle_tol) {
    report.classification = SlantClass::invariant;
  } else if (report.theta_mean >= std::numbers::pi / 2 - angle_tol) {
    report.classification = SlantClass::anti_invariant;
  } else {
    report.classification = SlantClass::proper_slant;
  }

  const MetallicParams& params = amb.params();
  double quad = 0.0;
  double met_t = 0.0;
  double met_n = 0.0;
  double tan_form = 0.0;
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    quad = std::max(quad, slant_quadratic_residual(sigmas[k], params, report.lambda_hat));
    const auto met = slant_metric_residuals(sigmas[k], params, report.theta_mean, 20, derive_seed(seed, 100 + k));
    met_t = std::max(met_t, met.tangential);
    met_n = std::max(met_n, met.normal);
    if (report.classification == SlantClass::proper_slant) {
      tan_form = std::max(tan_form, slant_tangent_form_residual(sigmas[k], report.theta_mean, angle_tol));
    }
  }
  report.quadratic_residual = quad;
  report.metric_T_residual = met_t;
  report.metric_N_residual = met_n;
  if (report.classification == SlantClass::proper_slant) report.tangent_form_residual = tan_form;
  return report;
}

}  // namespace metallic
