#pragma once

#include "metallic/ambient.hpp"
#include "metallic/immersion.hpp"
#include "metallic/sigma.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace metallic {

/// Angle between JX and the tangent space for a tangent vector X given in frame
/// coordinates, evaluated as atan2(|NX|, |TX|) which equals arccos(|TX| / |JX|) and
/// stays accurate near 0 and pi/2. Throws DomainError for X = 0.
double slant_angle(const SigmaStructure& sigma, const Eigen::VectorXd& X);

enum class SlantClass { invariant, anti_invariant, proper_slant, not_slant };

const char* to_string(SlantClass c);

struct SampleAngles {
  std::vector<double> u;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct SlantReport {
  SlantClass classification = SlantClass::not_slant;
  double theta_mean = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double deviation = 0.0;  // theta_max - theta_min over all samples and directions
  double lambda_hat = 0.0;  // cos^2(theta_mean)
  double angle_tol = 0.0;
  int samples = 0;
  int directions = 0;
  std::vector<SampleAngles> per_sample;

  // Directions (ambient vectors) and chart points attaining the extreme angles.
  std::vector<double> witness_min_point;
  std::vector<double> witness_min_direction;
  std::vector<double> witness_max_point;
  std::vector<double> witness_max_direction;

  // Worst residuals over samples; empty when the verdict is not-slant (or, for the
  // tangent form, when the angle is 0 or pi/2).
  std::optional<double> quadratic_residual;
  std::optional<double> metric_T_residual;
  std::optional<double> metric_N_residual;
  std::optional<double> tangent_form_residual;
};

/// Evaluates the angle at `samples` seeded points over `directions` tangent directions
/// (the frame axes followed by seeded random unit vectors). The submanifold is slant
/// when the spread of all angles is at most angle_tol; it is then invariant if the mean
/// angle is within angle_tol of 0, anti-invariant if within angle_tol of pi/2, and
/// proper slant otherwise.
SlantReport classify_slant(const Immersion& imm, const AmbientStructure& amb, int samples, int directions,
                           std::uint64_t seed, double angle_tol = 1e-6);

/// max |T^2 - lambda (pT + qI)|.
double slant_quadratic_residual(const SigmaStructure& sigma, const MetallicParams& params, double lambda);

/// Worst residuals of <TX,TY> = cos^2(theta)[p<X,JY> + q<X,Y>] and
/// <NX,NY> = sin^2(theta)[p<X,JY> + q<X,Y>] over `pairs` seeded vector pairs.
struct SlantMetricResiduals {
  double tangential = 0.0;
  double normal = 0.0;
};
SlantMetricResiduals slant_metric_residuals(const SigmaStructure& sigma, const MetallicParams& params,
                                            double theta, int pairs, std::uint64_t seed);

/// max |T^2 - (1 / tan^2 theta) sum_a xi_a eta_a|. Throws PreconditionError unless
/// theta lies in [angle_tol, pi/2 - angle_tol].
double slant_tangent_form_residual(const SigmaStructure& sigma, double theta, double angle_tol = 1e-6);

}  // namespace metallic
