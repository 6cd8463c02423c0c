#pragma once

#include "metallic/ambient.hpp"
#include "metallic/checks.hpp"
#include "metallic/immersion.hpp"

#include <cstdint>

namespace metallic {

/// Induced structure at one point, in the frame coordinates of a PointFrame.
///
/// With E the tangent and F the normal frame:
///   T    = E^T J E   (n x n)  tangential part of J on tangent vectors
///   Nmat = F^T J E   (r x n)  normal part of J on tangent vectors, row alpha = eta_alpha
///   xi   = E^T J F   (n x r)  column alpha = xi_alpha = t N_alpha
///   A    = F^T J F   (r x r)  a_{alpha beta} = <J N_alpha, N_beta>
/// eta and nmap are stored separately from Nmat and A so that the coincidences
/// eta = Nmat and nmap = A stay visible as checkable identities.
struct SigmaStructure {
  Eigen::MatrixXd T;
  Eigen::MatrixXd eta;
  Eigen::MatrixXd xi;
  Eigen::MatrixXd A;
  Eigen::MatrixXd nmap;
  Eigen::MatrixXd Nmat;

  int n() const { return static_cast<int>(T.rows()); }
  int r() const { return static_cast<int>(A.rows()); }
};

SigmaStructure decompose(const AmbientStructure& amb, const PointFrame& frame);

/// Evaluates the eight algebraic identities of the induced structure at one point
/// and folds them into `out`:
///   quadratic_T        T^2 - pT - qI + sum xi_a eta_a
///   eta_T              eta_a T - p eta_a + sum_b a_ab eta_b
///   A_symmetric        A - A^T
///   eta_xi_gram        eta_b(xi_a) - q delta_ab - p a_ab + sum_c a_ac a_cb
///   T_xi               T xi_a - p xi_a + sum_b a_ab xi_b
///   eta_xi_dual        eta - xi^T
///   T_symmetric        T - T^T
///   T_metric_pairing   <TX,TY> - p<X,TY> - q<X,Y> + sum eta_a(X) eta_a(Y) on 20 seeded pairs
void observe_structure_identities(const SigmaStructure& sigma, const MetallicParams& params, double tol,
                                  std::uint64_t seed, const Eigen::VectorXd& point, VerificationReport& out);

VerificationReport verify_structure_identities(const SigmaStructure& sigma, const MetallicParams& params,
                                               double tol, std::uint64_t seed = 0);

enum class PointClass { invariant, anti_invariant, mixed };

const char* to_string(PointClass c);

/// invariant when max|Nmat| <= tol (also for r = 0), anti-invariant when max|T| <= tol,
/// mixed otherwise.
PointClass classify_pointwise(const SigmaStructure& sigma, double tol = 1e-7);

/// Two-stage chain M -> Mbar -> E^N, where `link` maps chart points of the inner
/// immersion to chart points of the outer one and inner.map = outer.map o link.
///
/// Computes the structure on the inner submanifold directly from J with the combined
/// normal frame {normals of M in Mbar, normals of Mbar}, and again by restricting the
/// structure induced on Mbar, then reports the largest discrepancy in T, eta, xi and
/// the extended matrix of normal coefficients. Throws StructuralError when the link
/// does not compose to the inner map within 1e-10.
VerificationReport verify_inheritance_chain(const AmbientStructure& amb, const Immersion& outer,
                                            const Immersion& inner, const SmoothMap& link, int samples,
                                            std::uint64_t seed, double tol);

}  // namespace metallic
