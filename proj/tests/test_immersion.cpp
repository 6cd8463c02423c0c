#include "metallic/charts.hpp"
#include "metallic/errors.hpp"
#include "metallic/immersion.hpp"

#include <doctest.h>

#include <numbers>

using namespace metallic;

namespace {

// Graph of u0^2 + u0 u1 + sin(u1) over the plane, with hand-written derivatives.
SmoothMap graph_map() {
  SmoothMap m;
  m.in_dim = 2;
  m.out_dim = 3;
  m.value = [](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    return Eigen::Vector3d(u(0), u(1), u(0) * u(0) + u(0) * u(1) + std::sin(u(1)));
  };
  m.jacobian = [](const Eigen::VectorXd& u) -> Eigen::MatrixXd {
    Eigen::MatrixXd J(3, 2);
    J << 1, 0, 0, 1, 2 * u(0) + u(1), u(0) + std::cos(u(1));
    return J;
  };
  m.hessian = [](const Eigen::VectorXd& u) {
    Hessian H(3, 2);
    H.block(2) << 2, 1, 1, -std::sin(u(1));
    return H;
  };
  return m;
}

ParamBox unit_box(int n) { return {Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Constant(n, 1.0)}; }

}  // namespace

TEST_CASE("finite-difference derivatives agree with the analytic ones") {
  const Immersion exact("graph", graph_map(), unit_box(2));
  const Immersion fd = exact.with_mode(DerivativeMode::central_difference);
  for (const auto& u : sample_points(exact, 25, 3)) {
    CHECK((jacobian(exact, u) - jacobian(fd, u)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(hessian(exact, u).max_difference(hessian(fd, u)) <= 1e-6);
  }
}

TEST_CASE("tangent frame spans the Jacobian with positive orientation") {
  const Immersion imm("graph", graph_map(), unit_box(2));
  const Eigen::Vector2d u(0.3, -0.4);
  const PointFrame frame = frame_at(imm, u);
  const Eigen::MatrixXd Df = jacobian(imm, u);
  CHECK(frame_orthonormality_residual(frame) <= 1e-14);
  CHECK((Df - frame.E * (frame.E.transpose() * Df)).cwiseAbs().maxCoeff() <= 1e-14);
  const Eigen::MatrixXd R = frame.E.transpose() * Df;
  CHECK(R(0, 0) > 0.0);
  CHECK(R(1, 1) > 0.0);
  CHECK(std::abs(R(1, 0)) <= 1e-14);
  // Normal of a graph z = g(x, y) is proportional to (-g_x, -g_y, 1); the first axis
  // has a non-zero normal component, so the frame starts from it.
  const Eigen::Vector3d normal = Eigen::Vector3d(-Df(2, 0), -Df(2, 1), 1.0).normalized();
  CHECK(std::abs(std::abs(frame.F.col(0).dot(normal)) - 1.0) <= 1e-14);
  CHECK(frame.F(0, 0) > 0.0);
}

TEST_CASE("override frame is verified") {
  const Immersion good("graph", graph_map(), unit_box(2), DerivativeMode::analytic,
                       [](const Eigen::VectorXd& u, const Eigen::VectorXd&) -> Eigen::MatrixXd {
                         const double gx = 2 * u(0) + u(1);
                         const double gy = u(0) + std::cos(u(1));
                         return Eigen::Vector3d(-gx, -gy, 1.0).normalized();
                       });
  CHECK(frame_orthonormality_residual(frame_at(good, Eigen::Vector2d(0.1, 0.5))) <= 1e-14);
  const Immersion bad("graph", graph_map(), unit_box(2), DerivativeMode::analytic,
                      [](const Eigen::VectorXd&, const Eigen::VectorXd&) -> Eigen::MatrixXd {
                        return Eigen::Vector3d(0.0, 0.0, 1.0);
                      });
  CHECK_THROWS_AS(frame_at(bad, Eigen::Vector2d(0.1, 0.5)), FrameError);
  const Immersion wrong_shape("graph", graph_map(), unit_box(2), DerivativeMode::analytic,
                              [](const Eigen::VectorXd&, const Eigen::VectorXd&) -> Eigen::MatrixXd {
                                return Eigen::MatrixXd::Identity(3, 2);
                              });
  CHECK_THROWS_AS(frame_at(wrong_shape, Eigen::Vector2d(0.1, 0.5)), FrameError);
}

TEST_CASE("domain and rank errors") {
  const Immersion imm("graph", graph_map(), unit_box(2));
  CHECK_THROWS_AS(jacobian(imm, Eigen::Vector2d(2.0, 0.0)), DomainError);
  CHECK_THROWS_AS(jacobian(imm, Eigen::Vector3d(0.0, 0.0, 0.0)), StructuralError);

  // Cone (u0 cos u1, u0 sin u1, u0) loses rank at the apex u0 = 0.
  std::vector<TrigMonomial> cone{{1.0, {{1, true}}}, {1.0, {{1, false}}}, {1.0, {}}};
  SmoothMap base = trig_monomial_map(2, cone);
  SmoothMap m;
  m.in_dim = 2;
  m.out_dim = 3;
  m.value = [base](const Eigen::VectorXd& u) -> Eigen::VectorXd { return u(0) * base.value(u); };
  const Immersion apex("cone", m, unit_box(2), DerivativeMode::central_difference);
  CHECK_THROWS_AS(jacobian(apex, Eigen::Vector2d(0.0, 0.3)), DegeneratePointError);
  try {
    jacobian(apex, Eigen::Vector2d(0.0, 0.3));
  } catch (const DegeneratePointError& e) {
    CHECK(e.singular_values().size() == 2);
  }
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(Immersion("flat", linear_map(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2)), unit_box(2)),
                  StructuralError);
  CHECK_THROWS_AS(Immersion("graph", graph_map(), unit_box(3)), StructuralError);
  ParamBox inverted{Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(0.0, 2.0)};
  CHECK_THROWS_AS(Immersion("graph", graph_map(), inverted), DomainError);
  SmoothMap value_only = graph_map();
  value_only.hessian = nullptr;
  CHECK_THROWS_AS(Immersion("graph", value_only, unit_box(2)), StructuralError);
  CHECK_NOTHROW(Immersion("graph", value_only, unit_box(2), DerivativeMode::central_difference));
}

TEST_CASE("samples are deterministic and stay inside the shrunk box") {
  const Immersion imm("graph", graph_map(), unit_box(2));
  const auto a = sample_points(imm, 50, 11);
  const auto b = sample_points(imm, 50, 11);
  const auto c = sample_points(imm, 50, 12);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    differs = differs || a[i] != c[i];
    CHECK(a[i].cwiseAbs().maxCoeff() <= 1.0 - fd_margin(1.0));
  }
  CHECK(differs);
}

TEST_CASE("trigonometric charts carry exact derivatives") {
  const SmoothMap sphere = trig_monomial_map(2, sphere_block(3, 0, 2.0));
  const Immersion exact("sphere", sphere, make_box({0.1, -std::numbers::pi}, {std::numbers::pi - 0.1, std::numbers::pi}));
  const Immersion fd = exact.with_mode(DerivativeMode::central_difference);
  for (const auto& u : sample_points(exact, 20, 5)) {
    CHECK(exact.map(u).norm() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK((jacobian(exact, u) - jacobian(fd, u)).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(hessian(exact, u).max_difference(hessian(fd, u)) <= 1e-6);
  }
}

TEST_CASE("composition applies the chain rule") {
  const SmoothMap outer = trig_monomial_map(2, sphere_block(3, 0, 1.0));
  Eigen::MatrixXd B(2, 1);
  B << 0.5, 2.0;
  const SmoothMap inner = linear_map(B, Eigen::Vector2d(0.7, 0.1));
  const SmoothMap curve = compose(outer, inner);
  SmoothMap numeric = curve;
  numeric.jacobian = nullptr;
  numeric.hessian = nullptr;
  const ParamBox box{Eigen::VectorXd::Constant(1, -0.2), Eigen::VectorXd::Constant(1, 0.2)};
  const Immersion exact("curve", curve, box);
  const Immersion fd("curve", numeric, box, DerivativeMode::central_difference);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(1, 0.05);
  CHECK((jacobian(exact, u) - jacobian(fd, u)).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(hessian(exact, u).max_difference(hessian(fd, u)) <= 1e-6);
  CHECK_THROWS_AS(compose(inner, inner), StructuralError);
}
