#pragma once

#include "metallic/ambient.hpp"
#include "metallic/checks.hpp"
#include "metallic/immersion.hpp"
#include "metallic/sigma.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace metallic {

/// Jacobian and frames at one chart point.
struct Snapshot {
  Eigen::VectorXd u;
  Eigen::MatrixXd Df;
  Eigen::MatrixXd E;
  Eigen::MatrixXd F;
  Eigen::MatrixXd P;  // E E^T, orthogonal projection onto the tangent space
};

/// A quantity defined along the submanifold, evaluated from the local snapshot.
using Field = std::function<Eigen::VectorXd(const Snapshot&)>;

/// Geometry at one chart point together with the central-difference stencil used to
/// differentiate fields along chart directions.
///
/// Tangent vectors passed to the methods are in tangent-frame coordinates unless the
/// name says otherwise; `chart()` converts them to chart coordinates. The stencil step
/// along axis i is step_scale * second_step(u_i). Every stencil point recomputes the
/// frame and throws FrameDiscontinuityError if a frame column moved by more than 0.1.
class LocalGeometry {
 public:
  LocalGeometry(const Immersion& imm, const AmbientStructure& amb, const Eigen::VectorXd& u,
                double step_scale = 1.0);

  const Snapshot& base() const noexcept { return base_; }
  const SigmaStructure& sigma() const noexcept { return sigma_; }
  const Hessian& hessian() const noexcept { return H_; }
  const Eigen::MatrixXd& J() const noexcept { return amb_->J(); }
  int n() const noexcept { return static_cast<int>(base_.E.cols()); }
  int r() const noexcept { return static_cast<int>(base_.F.cols()); }

  /// Second fundamental forms h_alpha in the tangent frame, from the chart Hessian.
  const std::vector<Eigen::MatrixXd>& h() const noexcept { return h_; }

  /// Chart coordinates of a frame vector.
  Eigen::VectorXd chart(const Eigen::VectorXd& X) const;
  /// Chart coordinates of an ambient tangent vector.
  Eigen::VectorXd chart_of_ambient(const Eigen::VectorXd& v) const;

  /// Sum_i c_i d_i W, the derivative of W along the chart direction c.
  Eigen::VectorXd derivative(const Field& W, const Eigen::VectorXd& c) const;

  /// d_X N_alpha for every alpha (N x r), X a frame vector.
  Eigen::MatrixXd normal_frame_derivative(const Eigen::VectorXd& X) const;

  /// lambda_{alpha beta}(X) = <d_X N_alpha, N_beta>.
  Eigen::MatrixXd lambda(const Eigen::VectorXd& X) const;

  /// Ambient second derivative d_X d_Y f for chart-coordinate fields, as an N-vector.
  Eigen::VectorXd second_derivative(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const;

  /// Levi-Civita derivative of the chart field Y along X, frame coordinates.
  Eigen::VectorXd nabla_chart_field(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const;

  /// Vector (h_alpha(X, Y))_alpha.
  Eigen::VectorXd h_vector(const Eigen::VectorXd& X, const Eigen::VectorXd& Y) const;

  /// [V, W] for tangent fields, projected to the tangent frame.
  Eigen::VectorXd bracket(const Field& V, const Field& W) const;

  /// Christoffel contraction Gamma(X, Y) of the induced metric (chart coordinates),
  /// from central differences of g = Df^T Df.
  Eigen::VectorXd christoffel(const Eigen::VectorXd& cX, const Eigen::VectorXd& cY) const;

  // Fields built from the snapshot; c denotes chart coordinates of a chart field.
  Field chart_field(const Eigen::VectorXd& c) const;
  Field T_field(const Eigen::VectorXd& c) const;
  Field T2_field(const Eigen::VectorXd& c) const;
  Field xi_field(int alpha) const;
  Field normal_field(int alpha) const;
  Field eta_of_field(const Eigen::VectorXd& c) const;  // (eta_alpha(Y))_alpha as an r-vector
  Field A_field() const;                                 // A flattened column-major

 private:
  Snapshot snap(const Eigen::VectorXd& u) const;

  const Immersion* imm_;
  const AmbientStructure* amb_;
  Snapshot base_;
  SigmaStructure sigma_;
  Hessian H_;
  Eigen::MatrixXd Rinv_;
  std::vector<Eigen::MatrixXd> h_;
  std::vector<Snapshot> plus_;
  std::vector<Snapshot> minus_;
};

/// Second fundamental forms and normal connection forms along the frame axes.
struct SecondFundamentalData {
  std::vector<Eigen::MatrixXd> h;    // r symmetric n x n matrices
  std::vector<Eigen::MatrixXd> lam;  // for each tangent axis e_i, the r x r matrix lambda(e_i)
};

SecondFundamentalData second_fundamental(const Immersion& imm, const AmbientStructure& amb,
                                         const Eigen::VectorXd& u);

/// (nabla_X T)Y for chart-coordinate fields X, Y; returned as an ambient tangent vector.
Eigen::VectorXd covariant_T_derivative(const Immersion& imm, const AmbientStructure& amb, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& X, const Eigen::VectorXd& Y);

/// N_T(X, Y) = [TX, TY] - T[TX, Y] - T[X, TY] for chart-coordinate fields (whose own
/// bracket vanishes); returned as an ambient tangent vector.
Eigen::VectorXd nijenhuis_T(const Immersion& imm, const AmbientStructure& amb, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& X, const Eigen::VectorXd& Y);

/// Closed form of N_T from the shape operators:
/// -sum g((TA_a - A_a T)X, Y) xi_a - sum eta_a(Y)(TA_a - A_a T)X + sum eta_a(X)(TA_a - A_a T)Y,
/// frame coordinates.
Eigen::VectorXd nijenhuis_T_closed_form(const LocalGeometry& geo, const Eigen::VectorXd& X, const Eigen::VectorXd& Y);

/// Settings shared by the suites below.
struct SuiteOptions {
  int samples = 20;
  std::uint64_t seed = 0;
  double tol = 1e-5;
  double step_scale = 1.0;
};

/// Gauss and Weingarten reconstruction, symmetry of the shape operator, antisymmetry of
/// the normal connection, self-adjointness of nabla T, the normal-frame formulas for
/// nabla T and nabla t, the covariant derivatives of T, eta, xi and a, and the ambient
/// Nijenhuis tensor. The printed variants of the nabla t formulas are reported as
/// non-gated diagnostics.
VerificationReport verify_connection_identities(const Immersion& imm, const AmbientStructure& amb,
                                                const SuiteOptions& opts);

/// Direct N_T against its closed form, d eta against its closed form, and, depending on
/// the pointwise class of every sample, the vanishing of N_T and of the components
/// N^(2), N^(3), N^(4) (invariant) or N^(2), N^(3) (anti-invariant).
VerificationReport verify_nijenhuis(const Immersion& imm, const AmbientStructure& amb, const SuiteOptions& opts);

/// Identities specific to invariant submanifolds. Throws PreconditionError if a sample
/// is not invariant at classification tolerance 1e-7.
VerificationReport verify_invariant_identities(const Immersion& imm, const AmbientStructure& amb,
                                               const SuiteOptions& opts);

/// Identities specific to anti-invariant submanifolds. Throws PreconditionError if a
/// sample is not anti-invariant.
VerificationReport verify_anti_invariant_identities(const Immersion& imm, const AmbientStructure& amb,
                                                    const SuiteOptions& opts);

/// (nabla_X T^2)Y = p cos^2(theta) (nabla_X T)Y and its expansion through the shape
/// operators; when T^2 is Codazzi on every sample and p cos^2(theta) > 1e-6, also the
/// display sum (eta_a(X) A_a Y - eta_a(Y) A_a X) = 0.
VerificationReport verify_slant_derivative(const Immersion& imm, const AmbientStructure& amb, double theta,
                                           const SuiteOptions& opts);

/// Largest residual of the four covariant-derivative formulas for T, eta, xi and a.
double covariant_formula_residual(const Immersion& imm, const AmbientStructure& amb, const SuiteOptions& opts);

/// max over samples and axes of |F(u + delta e_i) - F(u)| / delta with delta = 1e-4.
double frame_smoothness_constant(const Immersion& imm, int samples, std::uint64_t seed);

}  // namespace metallic
