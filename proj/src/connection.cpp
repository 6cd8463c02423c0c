#include "metallic/connection.hpp"

#include "metallic/errors.hpp"
#include "metallic/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace metallic {

namespace {

constexpr double continuity_jump = 0.1;

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Eigen::VectorXd flatten(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

}  // namespace

LocalGeometry::LocalGeometry(const Immersion& imm, const AmbientStructure& amb, const Eigen::VectorXd& u,
                             double step_scale)
    : imm_(&imm), amb_(&amb) {
  if (imm.N() != amb.dim()) throw StructuralError("immersion and ambient dimensions differ");
  if (!(step_scale > 0.0)) throw DomainError("step scale must be positive");
  base_ = snap(u);
  PointFrame frame{u, imm.map(u), base_.E, base_.F};
  sigma_ = decompose(amb, frame);
  H_ = metallic::hessian(imm, u);

  const Eigen::MatrixXd R = base_.E.transpose() * base_.Df;
  Rinv_ = R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n(), n()));
  for (int a = 0; a < r(); ++a) {
    h_.push_back(Rinv_.transpose() * H_.along(base_.F.col(a)) * Rinv_);
  }

  for (int i = 0; i < n(); ++i) {
    const double step = step_scale * second_step(u(i));
    for (double sign : {1.0, -1.0}) {
      Eigen::VectorXd v = u;
      v(i) += sign * step;
      Snapshot s = snap(v);
      const double jump = std::max(max_abs(s.E - base_.E), max_abs(s.F - base_.F));
      if (jump > continuity_jump) {
        throw FrameDiscontinuityError("frame of '" + imm.name() + "' jumps inside the difference stencil");
      }
      (sign > 0 ? plus_ : minus_).push_back(std::move(s));
    }
  }
}

Snapshot LocalGeometry::snap(const Eigen::VectorXd& u) const {
  Snapshot s;
  s.u = u;
  s.Df = jacobian(*imm_, u);
  const PointFrame frame = frame_from_jacobian(*imm_, u, s.Df);
  s.E = frame.E;
  s.F = frame.F;
  s.P = s.E * s.E.transpose();
  return s;
}

Eigen::VectorXd LocalGeometry::chart(const Eigen::VectorXd& X) const { return Rinv_ * X; }

Eigen::VectorXd LocalGeometry::chart_of_ambient(const Eigen::VectorXd& v) const {
  return Rinv_ * (base_.E.transpose() * v);
}

Eigen::VectorXd LocalGeometry::derivative(const Field& W, const Eigen::VectorXd& c) const {
  Eigen::VectorXd out;
  for (int i = 0; i < n(); ++i) {
    const Eigen::VectorXd d = (W(plus_[i]) - W(minus_[i])) / (plus_[i].u(i) - minus_[i].u(i));
    if (i == 0) {
      out = c(i) * d;
    } else {
      out += c(i) * d;
    }
  }
  return out;
}

Eigen::MatrixXd LocalGeometry::normal_frame_derivative(const Eigen::VectorXd& X) const {
  const Field frame = [](const Snapshot& s) { return flatten(s.F); };
  return unflatten(derivative(frame, chart(X)), base_.F.rows(), base_.F.cols());
}

Eigen::MatrixXd LocalGeometry::lambda(const Eigen::VectorXd& X) const {
  return normal_frame_derivative(X).transpose() * base_.F;
}

Eigen::VectorXd LocalGeometry::second_derivative(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const {
  return H_.contract(chart(X), chart(Y));
}

Eigen::VectorXd LocalGeometry::nabla_chart_field(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const {
  return base_.E.transpose() * second_derivative(X, Y);
}

Eigen::VectorXd LocalGeometry::h_vector(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const {
  Eigen::VectorXd out(r());
  for (int a = 0; a < r(); ++a) out(a) = X.dot(h_[a] * Y);
  return out;
}

Eigen::VectorXd LocalGeometry::bracket(const Field& V, const Field& W) const {
  const Eigen::VectorXd dvw = derivative(W, chart_of_ambient(V(base_)));
  const Eigen::VectorXd dwv = derivative(V, chart_of_ambient(W(base_)));
  return base_.E.transpose() * (dvw - dwv);
}

Eigen::VectorXd LocalGeometry::christoffel(const Eigen::VectorXd& cX, const Eigen::VectorXd& cY) const {
  std::vector<Eigen::MatrixXd> dg;
  for (int i = 0; i < n(); ++i) {
    dg.push_back((plus_[i].Df.transpose() * plus_[i].Df - minus_[i].Df.transpose() * minus_[i].Df) /
                 (plus_[i].u(i) - minus_[i].u(i)));
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n());
  for (int i = 0; i < n(); ++i) {
    v += cX(i) * (dg[i] * cY) + cY(i) * (dg[i] * cX);
  }
  for (int l = 0; l < n(); ++l) v(l) -= cX.dot(dg[l] * cY);
  const Eigen::MatrixXd g = base_.Df.transpose() * base_.Df;
  return 0.5 * g.ldlt().solve(v);
}

Field LocalGeometry::chart_field(const Eigen::VectorXd& c) const {
  return [c](const Snapshot& s) -> Eigen::VectorXd { return s.Df * c; };
}

Field LocalGeometry::T_field(const Eigen::VectorXd& c) const {
  const Eigen::MatrixXd* J = &amb_->J();
  return [c, J](const Snapshot& s) -> Eigen::VectorXd { return s.P * (*J * (s.Df * c)); };
}

Field LocalGeometry::T2_field(const Eigen::VectorXd& c) const {
  const Eigen::MatrixXd* J = &amb_->J();
  return [c, J](const Snapshot& s) -> Eigen::VectorXd { return s.P * (*J * (s.P * (*J * (s.Df * c)))); };
}

Field LocalGeometry::xi_field(int alpha) const {
  const Eigen::MatrixXd* J = &amb_->J();
  return [alpha, J](const Snapshot& s) -> Eigen::VectorXd { return s.P * (*J * s.F.col(alpha)); };
}

Field LocalGeometry::normal_field(int alpha) const {
  return [alpha](const Snapshot& s) -> Eigen::VectorXd { return s.F.col(alpha); };
}

Field LocalGeometry::eta_of_field(const Eigen::VectorXd& c) const {
  const Eigen::MatrixXd* J = &amb_->J();
  return [c, J](const Snapshot& s) -> Eigen::VectorXd { return s.F.transpose() * (*J * (s.Df * c)); };
}

Field LocalGeometry::A_field() const {
  const Eigen::MatrixXd* J = &amb_->J();
  return [J](const Snapshot& s) -> Eigen::VectorXd { return flatten(s.F.transpose() * *J * s.F); };
}

SecondFundamentalData second_fundamental(const Immersion& imm, const AmbientStructure& amb,
                                         const Eigen::VectorXd& u) {
  const LocalGeometry geo(imm, amb, u);
  SecondFundamentalData out;
  out.h = geo.h();
  for (int i = 0; i < geo.n(); ++i) out.lam.push_back(geo.lambda(Eigen::VectorXd::Unit(geo.n(), i)));
  return out;
}

namespace {

// (nabla_X T)Y in frame coordinates for frame vectors X, Y.
Eigen::VectorXd nabla_T(const LocalGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  return geo.base().E.transpose() * geo.derivative(geo.T_field(geo.chart(Y)), geo.chart(X)) -
         geo.sigma().T * geo.nabla_chart_field(X, Y);
}

// (nabla_X T^2)Y in frame coordinates.
Eigen::VectorXd nabla_T2(const LocalGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  const Eigen::MatrixXd& T = geo.sigma().T;
  return geo.base().E.transpose() * geo.derivative(geo.T2_field(geo.chart(Y)), geo.chart(X)) -
         T * T * geo.nabla_chart_field(X, Y);
}

// sum_a [eta_a(Y) A_a X + h_a(X, Y) xi_a].
Eigen::VectorXd nabla_T_expansion(const LocalGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  const SigmaStructure& s = geo.sigma();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(geo.n());
  for (int a = 0; a < geo.r(); ++a) {
    out += s.eta.row(a).dot(Y) * (geo.h()[a] * X) + X.dot(geo.h()[a] * Y) * s.xi.col(a);
  }
  return out;
}

// X(eta_a(Y)) for frame vectors X, Y (Y extended as a chart field).
Eigen::VectorXd derivative_of_eta(const LocalGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  return geo.derivative(geo.eta_of_field(geo.chart(Y)), geo.chart(X));
}

// (h_a(X, TY))_a.
Eigen::VectorXd h_with_TY(const LocalGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  return geo.h_vector(X, geo.sigma().T * Y);
}

// M(a, b) = h_a(X, xi_b).
Eigen::MatrixXd h_with_xi(const LocalGeometry& geo, const Eigen::VectorXd& X) {
  Eigen::MatrixXd M(geo.r(), geo.r());
  for (int a = 0; a < geo.r(); ++a) {
    for (int b = 0; b < geo.r(); ++b) M(a, b) = X.dot(geo.h()[a] * geo.sigma().xi.col(b));
  }
  return M;
}

// X(a_ab) as an r x r matrix.
Eigen::MatrixXd derivative_of_A(const LocalGeometry& geo, const Eigen::VectorXd& X) {
  return unflatten(geo.derivative(geo.A_field(), geo.chart(X)), geo.r(), geo.r());
}

struct CovariantResiduals {
  double T = 0.0;
  double eta = 0.0;
  double xi = 0.0;
  double a = 0.0;
};

CovariantResiduals covariant_residuals(const LocalGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  const SigmaStructure& s = geo.sigma();
  const Eigen::MatrixXd lam = geo.lambda(X);
  const Eigen::VectorXd hv = geo.h_vector(X, Y);
  CovariantResiduals out;

  out.T = max_abs(nabla_T(geo, X, Y) - nabla_T_expansion(geo, X, Y));

  const Eigen::VectorXd lhs_eta = derivative_of_eta(geo, X, Y) - s.eta * geo.nabla_chart_field(X, Y);
  const Eigen::VectorXd rhs_eta = -h_with_TY(geo, X, Y) + s.A * hv + lam * (s.eta * Y);
  out.eta = max_abs(lhs_eta - rhs_eta);

  for (int a = 0; a < geo.r(); ++a) {
    const Eigen::VectorXd lhs = geo.base().E.transpose() * geo.derivative(geo.xi_field(a), geo.chart(X));
    Eigen::VectorXd rhs = -s.T * (geo.h()[a] * X);
    for (int b = 0; b < geo.r(); ++b) rhs += s.A(a, b) * (geo.h()[b] * X) + lam(a, b) * s.xi.col(b);
    out.xi = std::max(out.xi, max_abs(lhs - rhs));
  }

  const Eigen::MatrixXd M = h_with_xi(geo, X);
  const Eigen::MatrixXd Alam = s.A * lam;
  out.a = max_abs(derivative_of_A(geo, X) + M + M.transpose() + Alam + Alam.transpose());
  return out;
}

template <class Fn>
void for_each_geometry(const Immersion& imm, const AmbientStructure& amb, const SuiteOptions& opts, Fn&& fn) {
  if (opts.samples < 1) throw DomainError("suite needs at least one sample");
  SampleStream stream(imm, opts.seed);
  for (int k = 0; k < opts.samples; ++k) {
    for (int attempt = 0;; ++attempt) {
      const Eigen::VectorXd u = stream.next();
      try {
        const LocalGeometry geo(imm, amb, u, opts.step_scale);
        Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(k)));
        fn(geo, rng);
        break;
      } catch (const FrameDiscontinuityError&) {
        if (attempt + 1 >= 10) throw;
      }
    }
  }
}

}  // namespace

Eigen::VectorXd covariant_T_derivative(const Immersion& imm, const AmbientStructure& amb, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  const LocalGeometry geo(imm, amb, u);
  const Eigen::MatrixXd R = geo.base().E.transpose() * geo.base().Df;
  return geo.base().E * nabla_T(geo, R * X, R * Y);
}

namespace {

Eigen::VectorXd nijenhuis_direct(const LocalGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  const Eigen::VectorXd cX = geo.chart(X);
  const Eigen::VectorXd cY = geo.chart(Y);
  const Field TX = geo.T_field(cX);
  const Field TY = geo.T_field(cY);
  const Eigen::MatrixXd& T = geo.sigma().T;
  return geo.bracket(TX, TY) - T * geo.bracket(TX, geo.chart_field(cY)) - T * geo.bracket(geo.chart_field(cX), TY);
}

}  // namespace

Eigen::VectorXd nijenhuis_T(const Immersion& imm, const AmbientStructure& amb, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  const LocalGeometry geo(imm, amb, u);
  const Eigen::MatrixXd R = geo.base().E.transpose() * geo.base().Df;
  return geo.base().E * nijenhuis_direct(geo, R * X, R * Y);
}

Eigen::VectorXd nijenhuis_T_closed_form(const LocalGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
  const SigmaStructure& s = geo.sigma();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(geo.n());
  for (int a = 0; a < geo.r(); ++a) {
    const Eigen::MatrixXd C = s.T * geo.h()[a] - geo.h()[a] * s.T;
    out += -Y.dot(C * X) * s.xi.col(a) - s.eta.row(a).dot(Y) * (C * X) + s.eta.row(a).dot(X) * (C * Y);
  }
  return out;
}

VerificationReport verify_connection_identities(const Immersion& imm, const AmbientStructure& amb,
                                                const SuiteOptions& opts) {
  VerificationReport report("connection");
  const double tol = opts.tol;
  const double p = amb.params().p;
  for_each_geometry(imm, amb, opts, [&](const LocalGeometry& geo, Rng& rng) {
    const Eigen::VectorXd& u = geo.base().u;
    const SigmaStructure& s = geo.sigma();
    const Eigen::MatrixXd& E = geo.base().E;
    const Eigen::MatrixXd& F = geo.base().F;
    const Eigen::MatrixXd& J = geo.J();
    const int n = geo.n();
    const int r = geo.r();
    const Eigen::VectorXd X = rng.unit_vector(n);
    const Eigen::VectorXd Y = rng.unit_vector(n);
    const Eigen::VectorXd Z = rng.unit_vector(n);
    const Eigen::VectorXd cX = geo.chart(X);
    const Eigen::VectorXd cY = geo.chart(Y);
    const Eigen::MatrixXd lam = geo.lambda(X);
    const Eigen::VectorXd hv = geo.h_vector(X, Y);

    // Gauss formula, tangential part from the Christoffel symbols of the induced metric.
    const Eigen::VectorXd gauss = geo.second_derivative(X, Y) - geo.base().Df * geo.christoffel(cX, cY) - F * hv;
    report.observe("gauss_reconstruction", tol, max_abs(gauss), u);

    // Weingarten formula with the shape operator taken from the Hessian.
    const Eigen::MatrixXd dN = geo.normal_frame_derivative(X);
    double weingarten = 0.0;
    for (int a = 0; a < r; ++a) {
      const Eigen::VectorXd res = dN.col(a) + E * (geo.h()[a] * X) - F * lam.row(a).transpose();
      weingarten = std::max(weingarten, max_abs(res));
    }
    report.observe("weingarten_reconstruction", tol, weingarten, u);

    // Shape operator from the normal frame alone.
    std::vector<Eigen::MatrixXd> axis_dN;
    for (int i = 0; i < n; ++i) axis_dN.push_back(geo.normal_frame_derivative(Eigen::VectorXd::Unit(n, i)));
    double shape_sym = 0.0;
    double shape_match = 0.0;
    for (int a = 0; a < r; ++a) {
      Eigen::MatrixXd W(n, n);
      for (int i = 0; i < n; ++i) W.col(i) = -E.transpose() * axis_dN[i].col(a);
      shape_sym = std::max(shape_sym, max_abs(W - W.transpose()));
      shape_match = std::max(shape_match, max_abs(W - geo.h()[a]));
    }
    report.observe("shape_operator_symmetric", tol, shape_sym, u);
    report.observe("shape_operator_matches_h", tol, shape_match, u);
    report.observe("normal_connection_antisymmetric", tol, max_abs(lam + lam.transpose()), u);

    // nabla T is self-adjoint.
    const Eigen::VectorXd nTY = nabla_T(geo, X, Y);
    const Eigen::VectorXd nTZ = nabla_T(geo, X, Z);
    report.observe("nabla_T_self_adjoint", tol, std::abs(nTY.dot(Z) - Y.dot(nTZ)), u);

    // Tangential and normal parts of (nabla_X J)Y = 0 written with N and t.
    Eigen::VectorXd rhs_1a = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < r; ++a) {
      const double gNY = F.col(a).dot(J * (E * Y));
      rhs_1a += gNY * (geo.h()[a] * X) + hv(a) * (E.transpose() * (J * F.col(a)));
    }
    report.observe("nabla_T_normal_frame_form", tol, max_abs(nTY - rhs_1a), u);

    const Eigen::VectorXd etaY = s.eta * Y;
    const Eigen::VectorXd Xeta = derivative_of_eta(geo, X, Y);
    const Eigen::VectorXd nablaXY = geo.nabla_chart_field(X, Y);
    const Eigen::VectorXd lhs_1b = lam.transpose() * etaY;
    const Eigen::VectorXd rhs_1b = s.Nmat * nablaXY + s.A * hv - h_with_TY(geo, X, Y) - Xeta;
    report.observe("normal_part_for_tangent_fields", tol, max_abs(lhs_1b - rhs_1b), u);

    // Same for a normal field U with linearly varying frame coefficients.
    const Eigen::VectorXd c0 = rng.gaussian_vector(r);
    Eigen::MatrixXd D(r, n);
    for (int a = 0; a < r; ++a) D.row(a) = rng.gaussian_vector(n).transpose();
    const Eigen::VectorXd u0 = u;
    const Field tU = [c0, D, u0, &J](const Snapshot& snap) -> Eigen::VectorXd {
      return snap.P * (J * (snap.F * (c0 + D * (snap.u - u0))));
    };
    const Field nU = [c0, D, u0, &J](const Snapshot& snap) -> Eigen::VectorXd {
      return snap.F.transpose() * (J * (snap.F * (c0 + D * (snap.u - u0))));
    };
    const Eigen::VectorXd Xc = D * cX;
    const Eigen::VectorXd nUc = s.A * c0;
    const Eigen::VectorXd w = Xc + lam.transpose() * c0;
    const Eigen::VectorXd lhs_2a = E.transpose() * geo.derivative(tU, cX);
    Eigen::VectorXd rhs_2a = s.xi * w;
    Eigen::VectorXd rhs_2a_printed = s.xi * w;
    for (int a = 0; a < r; ++a) {
      const Eigen::VectorXd AX = geo.h()[a] * X;
      rhs_2a += nUc(a) * AX - c0(a) * (s.T * AX);
      rhs_2a_printed += nUc(a) * (AX - s.T * AX);
    }
    report.observe("nabla_tU_normal_frame_form", tol, max_abs(lhs_2a - rhs_2a), u);
    report.observe("nabla_tU_normal_frame_form_as_printed", tol, max_abs(lhs_2a - rhs_2a_printed), u, false);

    const Eigen::VectorXd tUc = s.xi * c0;
    const Eigen::VectorXd lhs_2b = lam.transpose() * nUc;
    Eigen::VectorXd rhs_2b = -(geo.derivative(nU, cX) + geo.h_vector(X, tUc)) + s.A * w;
    Eigen::VectorXd rhs_2b_printed = rhs_2b;
    for (int a = 0; a < r; ++a) {
      const Eigen::VectorXd NAX = s.Nmat * (geo.h()[a] * X);
      rhs_2b -= c0(a) * NAX;
      rhs_2b_printed -= nUc(a) * NAX;
    }
    report.observe("normal_part_for_normal_fields", tol, max_abs(lhs_2b - rhs_2b), u);
    report.observe("normal_part_for_normal_fields_as_printed", tol, max_abs(lhs_2b - rhs_2b_printed), u, false);

    // Covariant derivatives of the induced structure.
    const CovariantResiduals cov = covariant_residuals(geo, X, Y);
    report.observe("nabla_T_formula", tol, cov.T, u);
    report.observe("nabla_eta_formula", tol, cov.eta, u);
    report.observe("nabla_xi_formula", tol, cov.xi, u);
    report.observe("a_derivative_formula", tol, cov.a, u);

    // Ambient Nijenhuis tensor of the constant structure on two linear fields.
    const int N = static_cast<int>(J.rows());
    Eigen::MatrixXd B1(N, N);
    Eigen::MatrixXd B2(N, N);
    for (int i = 0; i < N; ++i) {
      B1.row(i) = rng.gaussian_vector(N).transpose();
      B2.row(i) = rng.gaussian_vector(N).transpose();
    }
    const AmbientVectorField VX = [B1](const Eigen::VectorXd& x) -> Eigen::VectorXd { return B1 * x; };
    const AmbientVectorField VY = [B2](const Eigen::VectorXd& x) -> Eigen::VectorXd { return B2 * x; };
    const double scale = std::max(1.0, p * p);
    report.observe("ambient_nijenhuis", tol, max_abs(ambient_nijenhuis(amb, VX, VY, geo.base().E.col(0), 1e-2)) / scale,
                   u);
  });
  return report;
}

VerificationReport verify_nijenhuis(const Immersion& imm, const AmbientStructure& amb, const SuiteOptions& opts) {
  VerificationReport report("nijenhuis");
  const double tol = opts.tol;
  for_each_geometry(imm, amb, opts, [&](const LocalGeometry& geo, Rng& rng) {
    const Eigen::VectorXd& u = geo.base().u;
    const SigmaStructure& s = geo.sigma();
    const int n = geo.n();
    const int r = geo.r();
    const Eigen::VectorXd X = rng.unit_vector(n);
    const Eigen::VectorXd Y = rng.unit_vector(n);
    const Eigen::VectorXd cX = geo.chart(X);
    const Eigen::VectorXd cY = geo.chart(Y);
    const Field TX = geo.T_field(cX);
    const Field TY = geo.T_field(cY);
    const Field Xf = geo.chart_field(cX);
    const Field Yf = geo.chart_field(cY);

    const Eigen::VectorXd b_TX_Y = geo.bracket(TX, Yf);
    const Eigen::VectorXd b_X_TY = geo.bracket(Xf, TY);
    const Eigen::VectorXd NT = geo.bracket(TX, TY) - s.T * b_TX_Y - s.T * b_X_TY;
    report.observe("nijenhuis_T_closed_form", tol, max_abs(NT - nijenhuis_T_closed_form(geo, X, Y)), u);

    const Eigen::MatrixXd lamX = geo.lambda(X);
    const Eigen::MatrixXd lamY = geo.lambda(Y);
    const Eigen::VectorXd deta = derivative_of_eta(geo, X, Y) - derivative_of_eta(geo, Y, X);
    Eigen::VectorXd deta_closed = lamX * (s.eta * Y) - lamY * (s.eta * X);
    for (int a = 0; a < r; ++a) {
      deta_closed(a) -= Y.dot((s.T * geo.h()[a] - geo.h()[a] * s.T) * X);
    }
    report.observe("d_eta_closed_form", tol, max_abs(deta - deta_closed), u);

    const Eigen::VectorXd N1 = NT - 2.0 * s.xi * deta;
    report.observe("N1_magnitude", tol, max_abs(N1), u, false);

    const Eigen::VectorXd cTX = geo.chart(s.T * X);
    const Eigen::VectorXd cTY = geo.chart(s.T * Y);
    const Eigen::VectorXd N2 = geo.derivative(geo.eta_of_field(cY), cTX) - s.eta * b_TX_Y -
                               geo.derivative(geo.eta_of_field(cX), cTY) - s.eta * b_X_TY;
    double N3 = 0.0;
    double N4 = 0.0;
    for (int a = 0; a < r; ++a) {
      const Field xa = geo.xi_field(a);
      const Eigen::VectorXd n3 = geo.bracket(xa, TX) - s.T * geo.bracket(xa, Xf);
      N3 = std::max(N3, max_abs(n3));
      const Eigen::VectorXd n4 =
          geo.derivative(geo.eta_of_field(cX), geo.chart(s.xi.col(a))) - s.eta * geo.bracket(xa, Xf);
      N4 = std::max(N4, max_abs(n4));
    }

    const PointClass cls = classify_pointwise(s);
    if (cls == PointClass::invariant) {
      report.observe("nijenhuis_T_vanishes", tol, max_abs(NT), u);
      report.observe("N2_vanishes", tol, max_abs(N2), u);
      report.observe("N3_vanishes", tol, N3, u);
      report.observe("N4_vanishes", tol, N4, u);
    } else if (cls == PointClass::anti_invariant) {
      report.observe("N2_vanishes", tol, max_abs(N2), u);
      report.observe("N3_vanishes", tol, N3, u);
    }
  });
  return report;
}

VerificationReport verify_invariant_identities(const Immersion& imm, const AmbientStructure& amb,
                                               const SuiteOptions& opts) {
  VerificationReport report("invariant");
  const double tol = opts.tol;
  const double p = amb.params().p;
  const double q = amb.params().q;
  for_each_geometry(imm, amb, opts, [&](const LocalGeometry& geo, Rng& rng) {
    const SigmaStructure& s = geo.sigma();
    if (classify_pointwise(s) != PointClass::invariant) {
      throw PreconditionError("invariant identities requested on a submanifold that is not invariant");
    }
    const Eigen::VectorXd& u = geo.base().u;
    const int n = geo.n();
    const int r = geo.r();
    const Eigen::VectorXd X = rng.unit_vector(n);
    const Eigen::VectorXd Y = rng.unit_vector(n);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

    report.observe("nabla_T_vanishes", tol, max_abs(nabla_T(geo, X, Y)), u);
    report.observe("quadratic_T", tol, max_abs(s.T * s.T - p * s.T - q * I), u);

    const Eigen::VectorXd hXJY = h_with_TY(geo, X, Y);
    const Eigen::VectorXd hJN = s.A * geo.h_vector(X, Y);
    const Eigen::VectorXd hJXY = geo.h_vector(s.T * X, Y);
    report.observe("h_J_exchange", tol, std::max(max_abs(hXJY - hJN), max_abs(hJXY - hJN)), u);
    report.observe("normal_h_balance", tol, max_abs(hXJY - hJN), u);

    const Eigen::VectorXd quad =
        geo.h_vector(s.T * X, s.T * Y) - p * geo.h_vector(X, s.T * Y) - q * geo.h_vector(X, Y);
    report.observe("h_J_quadratic", tol, max_abs(quad), u);

    double shape_balance = 0.0;
    double commute = 0.0;
    for (int a = 0; a < r; ++a) {
      Eigen::VectorXd res = s.T * (geo.h()[a] * X);
      for (int b = 0; b < r; ++b) res -= s.A(a, b) * (geo.h()[b] * X);
      shape_balance = std::max(shape_balance, max_abs(res));
      commute = std::max(commute, max_abs(s.T * geo.h()[a] - geo.h()[a] * s.T));
    }
    report.observe("T_shape_balance", tol, shape_balance, u);
    report.observe("T_shape_commute", tol, commute, u);

    const Eigen::MatrixXd Alam = s.A * geo.lambda(X);
    report.observe("a_derivative_balance", tol, max_abs(derivative_of_A(geo, X) + Alam + Alam.transpose()), u);
    report.observe("A_quadratic", tol,
                   max_abs(s.A * s.A - q * Eigen::MatrixXd::Identity(r, r) - p * s.A), u);
  });
  return report;
}

VerificationReport verify_anti_invariant_identities(const Immersion& imm, const AmbientStructure& amb,
                                                    const SuiteOptions& opts) {
  VerificationReport report("anti_invariant");
  const double tol = opts.tol;
  const double p = amb.params().p;
  const double q = amb.params().q;
  for_each_geometry(imm, amb, opts, [&](const LocalGeometry& geo, Rng& rng) {
    const SigmaStructure& s = geo.sigma();
    if (classify_pointwise(s) != PointClass::anti_invariant) {
      throw PreconditionError("anti-invariant identities requested on a submanifold that is not anti-invariant");
    }
    const Eigen::VectorXd& u = geo.base().u;
    const int n = geo.n();
    const int r = geo.r();
    const Eigen::VectorXd X = rng.unit_vector(n);
    const Eigen::VectorXd Y = rng.unit_vector(n);
    const Eigen::MatrixXd lam = geo.lambda(X);
    const Eigen::VectorXd hv = geo.h_vector(X, Y);
    const Eigen::VectorXd etaY = s.eta * Y;
    const Eigen::VectorXd Xeta = derivative_of_eta(geo, X, Y);
    const Eigen::VectorXd nabla = geo.nabla_chart_field(X, Y);

    Eigen::VectorXd tangent = s.xi * hv;
    for (int a = 0; a < r; ++a) tangent += etaY(a) * (geo.h()[a] * X);
    report.observe("h_t_relation", tol, max_abs(tangent), u);
    report.observe("h_n_relation", tol, max_abs(s.A * hv - (lam.transpose() * etaY + Xeta - s.Nmat * nabla)), u);
    report.observe("nabla_J_tangential_part", tol, max_abs(tangent), u);
    report.observe("nabla_J_normal_part", tol, max_abs(Xeta - lam * etaY - s.A * hv - s.Nmat * nabla), u);

    double xi_balance = 0.0;
    double shape_normal = 0.0;
    const Eigen::MatrixXd M = h_with_xi(geo, X);
    for (int a = 0; a < r; ++a) {
      Eigen::VectorXd res = geo.base().E.transpose() * geo.derivative(geo.xi_field(a), geo.chart(X));
      for (int b = 0; b < r; ++b) res -= s.A(a, b) * (geo.h()[b] * X) + lam(a, b) * s.xi.col(b);
      xi_balance = std::max(xi_balance, max_abs(res));
      shape_normal = std::max(shape_normal, max_abs(M.row(a).transpose() - s.Nmat * (geo.h()[a] * X)));
    }
    report.observe("nabla_xi_balance", tol, xi_balance, u);
    const Eigen::MatrixXd Alam = s.A * lam;
    report.observe("a_derivative_balance", tol,
                   max_abs(derivative_of_A(geo, X) + M + M.transpose() + Alam + Alam.transpose()), u);
    report.observe("h_xi_normal_relation", tol, shape_normal, u);

    report.observe("xi_eta_sum", tol, max_abs(s.xi * s.eta - q * Eigen::MatrixXd::Identity(n, n)), u);
    report.observe("A_eta", tol, max_abs(s.A * s.eta - p * s.eta), u);
    report.observe("xi_A", tol, max_abs(s.xi * s.A - p * s.xi), u);
  });
  return report;
}

VerificationReport verify_slant_derivative(const Immersion& imm, const AmbientStructure& amb, double theta,
                                           const SuiteOptions& opts) {
  VerificationReport report("slant_derivative");
  const double tol = opts.tol;
  const double pc2 = amb.params().p * std::cos(theta) * std::cos(theta);
  std::vector<double> codazzi_defect;
  std::vector<double> display;
  std::vector<Eigen::VectorXd> points;
  for_each_geometry(imm, amb, opts, [&](const LocalGeometry& geo, Rng& rng) {
    const SigmaStructure& s = geo.sigma();
    const Eigen::VectorXd& u = geo.base().u;
    const int n = geo.n();
    const Eigen::VectorXd X = rng.unit_vector(n);
    const Eigen::VectorXd Y = rng.unit_vector(n);
    const Eigen::VectorXd lhs = nabla_T2(geo, X, Y);
    report.observe("nabla_T2_scaling", tol, max_abs(lhs - pc2 * nabla_T(geo, X, Y)), u);
    report.observe("nabla_T2_expansion", tol, max_abs(lhs - pc2 * nabla_T_expansion(geo, X, Y)), u);

    codazzi_defect.push_back(max_abs(lhs - nabla_T2(geo, Y, X)));
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < geo.r(); ++a) {
      d += s.eta.row(a).dot(X) * (geo.h()[a] * Y) - s.eta.row(a).dot(Y) * (geo.h()[a] * X);
    }
    display.push_back(max_abs(d));
    points.push_back(u);
  });
  const bool codazzi = *std::max_element(codazzi_defect.begin(), codazzi_defect.end()) <= tol;
  for (std::size_t k = 0; k < points.size(); ++k) {
    report.observe("T2_codazzi_defect", tol, codazzi_defect[k], points[k], false);
  }
  if (codazzi && pc2 > 1e-6) {
    for (std::size_t k = 0; k < points.size(); ++k) report.observe("codazzi_display", tol, display[k], points[k]);
  }
  return report;
}

double covariant_formula_residual(const Immersion& imm, const AmbientStructure& amb, const SuiteOptions& opts) {
  double worst = 0.0;
  for_each_geometry(imm, amb, opts, [&](const LocalGeometry& geo, Rng& rng) {
    const Eigen::VectorXd X = rng.unit_vector(geo.n());
    const Eigen::VectorXd Y = rng.unit_vector(geo.n());
    const CovariantResiduals c = covariant_residuals(geo, X, Y);
    worst = std::max({worst, c.T, c.eta, c.xi, c.a});
  });
  return worst;
}

double frame_smoothness_constant(const Immersion& imm, int samples, std::uint64_t seed) {
  constexpr double delta = 1e-4;
  double worst = 0.0;
  for (const auto& u : sample_points(imm, samples, seed)) {
    const PointFrame base = frame_at(imm, u);
    for (int i = 0; i < imm.n(); ++i) {
      Eigen::VectorXd v = u;
      v(i) += delta;
      const PointFrame moved = frame_at(imm, v);
      worst = std::max(worst, (moved.F - base.F).norm() / delta);
    }
  }
  return worst;
}

}  // namespace metallic
