#include "metallic/sigma.hpp"

#include "metallic/errors.hpp"
#include "metallic/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace metallic {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

SigmaStructure decompose(const AmbientStructure& amb, const PointFrame& frame) {
  if (frame.E.rows() != amb.dim() || frame.F.rows() != amb.dim()) {
    throw StructuralError("frame lives in dimension " + std::to_string(frame.E.rows()) + ", ambient is " +
                          std::to_string(amb.dim()));
  }
  if (frame.E.cols() + frame.F.cols() != amb.dim()) {
    throw StructuralError("tangent and normal frames do not span the ambient space");
  }
  const Eigen::MatrixXd& J = amb.J();
  SigmaStructure s;
  s.T = frame.E.transpose() * J * frame.E;
  s.Nmat = frame.F.transpose() * J * frame.E;
  s.xi = frame.E.transpose() * J * frame.F;
  s.A = frame.F.transpose() * J * frame.F;
  // eta_alpha(X) = <JX, N_alpha>; n N_alpha is the normal part of J N_alpha.
  s.eta = s.Nmat;
  s.nmap = s.A;
  return s;
}

void observe_structure_identities(const SigmaStructure& s, const MetallicParams& params, double tol,
                                  std::uint64_t seed, const Eigen::VectorXd& point, VerificationReport& out) {
  const int n = s.n();
  const int r = s.r();
  const double p = params.p;
  const double q = params.q;
  const Eigen::MatrixXd In = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd Ir = Eigen::MatrixXd::Identity(r, r);

  out.observe("quadratic_T", tol, max_abs(s.T * s.T - p * s.T - q * In + s.xi * s.eta), point);
  out.observe("eta_T", tol, max_abs(s.eta * s.T - p * s.eta + s.A * s.eta), point);
  out.observe("A_symmetric", tol, max_abs(s.A - s.A.transpose()), point);
  out.observe("eta_xi_gram", tol, max_abs(s.eta * s.xi - q * Ir - p * s.A + s.A * s.A), point);
  out.observe("T_xi", tol, max_abs(s.T * s.xi - p * s.xi + s.xi * s.A), point);
  out.observe("eta_xi_dual", tol, max_abs(s.eta - s.xi.transpose()), point);
  out.observe("T_symmetric", tol, max_abs(s.T - s.T.transpose()), point);

  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd X = rng.gaussian_vector(n);
    const Eigen::VectorXd Y = rng.gaussian_vector(n);
    const double lhs = (s.T * X).dot(s.T * Y);
    const double rhs = p * X.dot(s.T * Y) + q * X.dot(Y) - (s.eta * X).dot(s.eta * Y);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  out.observe("T_metric_pairing", tol, worst, point);
}

VerificationReport verify_structure_identities(const SigmaStructure& sigma, const MetallicParams& params,
                                               double tol, std::uint64_t seed) {
  VerificationReport report("structure");
  observe_structure_identities(sigma, params, tol, seed, Eigen::VectorXd(), report);
  return report;
}

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::invariant:
      return "invariant";
    case PointClass::anti_invariant:
      return "anti-invariant";
    case PointClass::mixed:
      break;
  }
  return "mixed";
}

PointClass classify_pointwise(const SigmaStructure& sigma, double tol) {
  if (sigma.r() == 0 || max_abs(sigma.Nmat) <= tol) return PointClass::invariant;
  if (max_abs(sigma.T) <= tol) return PointClass::anti_invariant;
  return PointClass::mixed;
}

namespace {

// Orthonormal basis of span(Ebar) minus span(E), from the columns of Ebar in order.
Eigen::MatrixXd relative_normals(const Eigen::MatrixXd& Ebar, const Eigen::MatrixXd& E) {
  const Eigen::Index k = Ebar.cols() - E.cols();
  Eigen::MatrixXd out(Ebar.rows(), k);
  Eigen::Index found = 0;
  for (Eigen::Index c = 0; c < Ebar.cols() && found < k; ++c) {
    Eigen::VectorXd v = Ebar.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      v -= E * (E.transpose() * v);
      if (found > 0) v -= out.leftCols(found) * (out.leftCols(found).transpose() * v);
    }
    if (v.norm() < pivot_threshold) continue;
    out.col(found++) = v.normalized();
  }
  if (found < k) throw FrameError("inner tangent space is not contained in the outer one");
  return out;
}

}  // namespace

VerificationReport verify_inheritance_chain(const AmbientStructure& amb, const Immersion& outer,
                                            const Immersion& inner, const SmoothMap& link, int samples,
                                            std::uint64_t seed, double tol) {
  if (outer.N() != amb.dim() || inner.N() != amb.dim()) {
    throw StructuralError("chain stages do not live in the ambient space");
  }
  if (link.in_dim != inner.n() || link.out_dim != outer.n()) {
    throw StructuralError("chain link dimensions do not match the stages");
  }
  VerificationReport report("inheritance");
  const auto points = sample_points(inner, samples, seed);
  for (const auto& u : points) {
    const Eigen::VectorXd v = link.value(u);
    if ((inner.map(u) - outer.map(v)).cwiseAbs().maxCoeff() > 1e-10) {
      throw StructuralError("chain link does not compose to the inner immersion");
    }
    const PointFrame outer_frame = frame_at(outer, v);
    const PointFrame inner_frame = frame_at(inner, u);
    const Eigen::MatrixXd& E = inner_frame.E;
    const Eigen::MatrixXd& Ebar = outer_frame.E;
    if ((E - Ebar * (Ebar.transpose() * E)).cwiseAbs().maxCoeff() > 1e-8) {
      throw FrameError("inner tangent space is not contained in the outer one");
    }
    const Eigen::MatrixXd Nrel = relative_normals(Ebar, E);

    PointFrame combined = inner_frame;
    combined.F.resize(amb.dim(), Nrel.cols() + outer_frame.F.cols());
    combined.F.leftCols(Nrel.cols()) = Nrel;
    combined.F.rightCols(outer_frame.F.cols()) = outer_frame.F;
    const SigmaStructure direct = decompose(amb, combined);

    const SigmaStructure bar = decompose(amb, outer_frame);
    const Eigen::MatrixXd Ein = Ebar.transpose() * E;
    const Eigen::MatrixXd Nin = Ebar.transpose() * Nrel;
    const Eigen::Index k = Nin.cols();
    const Eigen::Index rbar = bar.r();
    const Eigen::Index n = E.cols();

    const Eigen::MatrixXd T = Ein.transpose() * bar.T * Ein;
    Eigen::MatrixXd eta(k + rbar, n);
    eta.topRows(k) = Nin.transpose() * bar.T * Ein;
    eta.bottomRows(rbar) = bar.eta * Ein;
    Eigen::MatrixXd xi(n, k + rbar);
    xi.leftCols(k) = Ein.transpose() * bar.T * Nin;
    xi.rightCols(rbar) = Ein.transpose() * bar.xi;
    Eigen::MatrixXd A(k + rbar, k + rbar);
    A.topLeftCorner(k, k) = Nin.transpose() * bar.T * Nin;
    A.topRightCorner(k, rbar) = Nin.transpose() * bar.xi;
    A.bottomLeftCorner(rbar, k) = bar.eta * Nin;
    A.bottomRightCorner(rbar, rbar) = bar.A;

    report.observe("inherited_T", tol, max_abs(direct.T - T), u);
    report.observe("inherited_eta", tol, max_abs(direct.eta - eta), u);
    report.observe("inherited_xi", tol, max_abs(direct.xi - xi), u);
    report.observe("inherited_A", tol, max_abs(direct.A - A), u);
  }
  return report;
}

}  // namespace metallic
