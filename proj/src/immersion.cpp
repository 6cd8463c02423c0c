#include "metallic/immersion.hpp"

#include "metallic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace metallic {

const char* to_string(DerivativeMode mode) {
  return mode == DerivativeMode::analytic ? "analytic" : "central-difference";
}

Hessian::Hessian(int out_dim, int in_dim)
    : in_dim_(in_dim), blocks_(static_cast<std::size_t>(out_dim), Eigen::MatrixXd::Zero(in_dim, in_dim)) {}

Eigen::VectorXd Hessian::contract(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const {
  Eigen::VectorXd out(out_dim());
  for (int k = 0; k < out_dim(); ++k) out(k) = X.dot(blocks_[k] * Y);
  return out;
}

Eigen::MatrixXd Hessian::along(const Eigen::VectorXd& w) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(in_dim_, in_dim_);
  for (int k = 0; k < out_dim(); ++k) out += w(k) * blocks_[k];
  return out;
}

double Hessian::max_difference(const Hessian& other) const {
  if (other.out_dim() != out_dim() || other.in_dim() != in_dim()) {
    throw StructuralError("Hessian shapes differ");
  }
  double worst = 0.0;
  for (int k = 0; k < out_dim(); ++k) {
    worst = std::max(worst, (blocks_[k] - other.blocks_[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

SmoothMap linear_map(Eigen::MatrixXd B, Eigen::VectorXd offset) {
  if (offset.size() != B.rows()) throw StructuralError("offset size differs from map output");
  SmoothMap m;
  m.in_dim = static_cast<int>(B.cols());
  m.out_dim = static_cast<int>(B.rows());
  m.value = [B, offset](const Eigen::VectorXd& u) -> Eigen::VectorXd { return B * u + offset; };
  m.jacobian = [B](const Eigen::VectorXd&) -> Eigen::MatrixXd { return B; };
  const int out = m.out_dim;
  const int in = m.in_dim;
  m.hessian = [out, in](const Eigen::VectorXd&) { return Hessian(out, in); };
  return m;
}

bool ParamBox::contains(const Eigen::VectorXd& u) const {
  if (u.size() != lo.size()) return false;
  return (u.array() >= lo.array()).all() && (u.array() <= hi.array()).all();
}

double jacobian_step(double coordinate) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(coordinate));
}

double second_step(double coordinate) {
  return std::pow(std::numeric_limits<double>::epsilon(), 0.25) * std::max(1.0, std::abs(coordinate));
}

double fd_margin(double bound) { return 1e-3 * std::max(1.0, std::abs(bound)); }

Immersion::Immersion(std::string name, SmoothMap chart, ParamBox domain, DerivativeMode mode,
                     NormalFrameFn frame_override)
    : name_(std::move(name)),
      chart_(std::move(chart)),
      domain_(std::move(domain)),
      mode_(mode),
      frame_override_(std::move(frame_override)) {
  if (chart_.in_dim < 1 || chart_.in_dim >= chart_.out_dim) {
    throw StructuralError("immersion needs 1 <= n < N, got n=" + std::to_string(chart_.in_dim) +
                          " N=" + std::to_string(chart_.out_dim));
  }
  if (domain_.lo.size() != chart_.in_dim || domain_.hi.size() != chart_.in_dim) {
    throw StructuralError("domain box dimension differs from chart dimension");
  }
  if ((domain_.hi.array() < domain_.lo.array()).any()) {
    throw DomainError("domain box has hi < lo");
  }
  if (mode_ == DerivativeMode::analytic && !chart_.has_analytic_derivatives()) {
    throw StructuralError("chart '" + name_ + "' has no analytic derivatives");
  }
}

Immersion Immersion::with_mode(DerivativeMode mode) const {
  return Immersion(name_, chart_, domain_, mode, frame_override_);
}

namespace {

void require_in_domain(const Immersion& imm, const Eigen::VectorXd& u) {
  if (u.size() != imm.n()) {
    throw StructuralError("chart point has dimension " + std::to_string(u.size()) + ", expected " +
                          std::to_string(imm.n()));
  }
  if (!imm.domain().contains(u)) {
    throw DomainError("chart point outside the domain of '" + imm.name() + "'");
  }
}

Eigen::MatrixXd raw_jacobian(const Immersion& imm, const Eigen::VectorXd& u) {
  if (imm.mode() == DerivativeMode::analytic) return imm.chart().jacobian(u);
  Eigen::MatrixXd Df(imm.N(), imm.n());
  for (int i = 0; i < imm.n(); ++i) {
    const double h = jacobian_step(u(i));
    Eigen::VectorXd up = u;
    Eigen::VectorXd dn = u;
    up(i) += h;
    dn(i) -= h;
    Df.col(i) = (imm.map(up) - imm.map(dn)) / (up(i) - dn(i));
  }
  return Df;
}

void require_full_rank(const Immersion& imm, const Eigen::MatrixXd& Df) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Df);
  const auto& s = svd.singularValues();
  if (s.minCoeff() < rank_threshold) {
    throw DegeneratePointError("Jacobian of '" + imm.name() + "' is rank deficient",
                               std::vector<double>(s.data(), s.data() + s.size()));
  }
}

}  // namespace

Eigen::MatrixXd jacobian(const Immersion& imm, const Eigen::VectorXd& u) {
  require_in_domain(imm, u);
  Eigen::MatrixXd Df = raw_jacobian(imm, u);
  require_full_rank(imm, Df);
  return Df;
}

Hessian hessian(const Immersion& imm, const Eigen::VectorXd& u) {
  require_in_domain(imm, u);
  require_full_rank(imm, raw_jacobian(imm, u));
  if (imm.mode() == DerivativeMode::analytic) return imm.chart().hessian(u);

  const int n = imm.n();
  Hessian H(imm.N(), n);
  const Eigen::VectorXd f0 = imm.map(u);
  for (int i = 0; i < n; ++i) {
    const double hi = second_step(u(i));
    for (int j = i; j < n; ++j) {
      Eigen::VectorXd d2;
      if (i == j) {
        Eigen::VectorXd up = u;
        Eigen::VectorXd dn = u;
        up(i) += hi;
        dn(i) -= hi;
        d2 = (imm.map(up) - 2.0 * f0 + imm.map(dn)) / (hi * hi);
      } else {
        const double hj = second_step(u(j));
        auto at = [&](double si, double sj) {
          Eigen::VectorXd v = u;
          v(i) += si * hi;
          v(j) += sj * hj;
          return imm.map(v);
        };
        d2 = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hi * hj);
      }
      for (int k = 0; k < imm.N(); ++k) {
        H.block(k)(i, j) = d2(k);
        H.block(k)(j, i) = d2(k);
      }
    }
  }
  return H;
}

namespace {

Eigen::MatrixXd tangent_frame(const Eigen::MatrixXd& Df) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Df);
  const Eigen::Index n = Df.cols();
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(Df.rows(), n);
  const Eigen::MatrixXd R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (R(i, i) < 0) Q.col(i) = -Q.col(i);
  }
  return Q;
}

Eigen::MatrixXd complete_normal_frame(const Eigen::MatrixXd& E, int r) {
  const Eigen::Index N = E.rows();
  Eigen::MatrixXd F(N, r);
  int found = 0;
  for (Eigen::Index k = 0; k < N && found < r; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(N, k);
    // Two projection passes keep the accepted vector orthogonal to roundoff even when
    // the first residual is small.
    for (int pass = 0; pass < 2; ++pass) {
      v -= E * (E.transpose() * v);
      if (found > 0) v -= F.leftCols(found) * (F.leftCols(found).transpose() * v);
      if (pass == 0 && v.norm() < pivot_threshold) break;
    }
    if (v.norm() < pivot_threshold) continue;
    F.col(found++) = v.normalized();
  }
  if (found < r) {
    throw FrameError("normal frame could not be completed (" + std::to_string(found) + " of " +
                     std::to_string(r) + " vectors)");
  }
  return F;
}

}  // namespace

double frame_orthonormality_residual(const PointFrame& frame) {
  const Eigen::Index n = frame.E.cols();
  const Eigen::Index r = frame.F.cols();
  double worst = (frame.E.transpose() * frame.E - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (r > 0) {
    worst = std::max(worst, (frame.F.transpose() * frame.F - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (frame.E.transpose() * frame.F).cwiseAbs().maxCoeff());
  }
  return worst;
}

PointFrame frame_from_jacobian(const Immersion& imm, const Eigen::VectorXd& u, const Eigen::MatrixXd& Df) {
  PointFrame frame;
  frame.u = u;
  frame.x = imm.map(u);
  frame.E = tangent_frame(Df);
  if (imm.frame_override()) {
    frame.F = imm.frame_override()(u, frame.x);
    if (frame.F.rows() != imm.N() || frame.F.cols() != imm.r()) {
      throw FrameError("override normal frame of '" + imm.name() + "' has the wrong shape");
    }
    // The override describes the exact normal space; a central-difference Jacobian is
    // only accurate to about 1e-10, so the check is looser in that mode.
    const double tol = imm.mode() == DerivativeMode::analytic ? 1e-10 : 1e-7;
    if (frame_orthonormality_residual(frame) > tol) {
      throw FrameError("override normal frame of '" + imm.name() + "' is not orthonormal to the tangent space");
    }
  } else {
    frame.F = complete_normal_frame(frame.E, imm.r());
  }
  return frame;
}

PointFrame frame_at(const Immersion& imm, const Eigen::VectorXd& u) {
  return frame_from_jacobian(imm, u, jacobian(imm, u));
}

SampleStream::SampleStream(const Immersion& imm, std::uint64_t seed)
    : imm_(&imm), lo_(imm.domain().lo), hi_(imm.domain().hi), rng_(seed) {
  for (int i = 0; i < imm.n(); ++i) {
    lo_(i) += fd_margin(imm.domain().lo(i));
    hi_(i) -= fd_margin(imm.domain().hi(i));
    if (hi_(i) < lo_(i)) {
      throw DomainError("domain of '" + imm.name() + "' is empty after the finite-difference margin");
    }
  }
}

Eigen::VectorXd SampleStream::next_raw() {
  Eigen::VectorXd u(lo_.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = rng_.uniform(lo_(i), hi_(i));
  return u;
}

Eigen::VectorXd SampleStream::next() {
  constexpr int max_attempts = 10;
  for (int attempt = 0;; ++attempt) {
    Eigen::VectorXd u = next_raw();
    try {
      jacobian(*imm_, u);
      return u;
    } catch (const DegeneratePointError&) {
      if (attempt + 1 >= max_attempts) throw;
    }
  }
}

std::vector<Eigen::VectorXd> sample_points(const Immersion& imm, int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("sample count must be at least 1");
  SampleStream stream(imm, seed);
  std::vector<Eigen::VectorXd> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) points.push_back(stream.next());
  return points;
}

}  // namespace metallic
