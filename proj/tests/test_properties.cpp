#include "metallic/catalog.hpp"
#include "metallic/connection.hpp"
#include "metallic/report.hpp"
#include "metallic/slant.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace metallic;

namespace {

struct Gen {
  Rng rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  int integer(int lo, int hi) { return lo + static_cast<int>(rng.uniform() * (hi - lo + 1)); }

  MetallicParams params() { return make_params(integer(1, 5), integer(1, 5)); }

  AmbientStructure ambient(int max_half = 3) {
    const MetallicParams mp = params();
    if (rng.uniform() < 0.5) {
      const int b = integer(0, 3);
      return make_product_structure(integer(1, max_half), b, rng.uniform() < 0.5 ? 1 : -1, mp);
    }
    return make_split_structure(integer(1, max_half), integer(1, max_half), mp);
  }

  Eigen::MatrixXd orthonormal(int rows, int cols) {
    Eigen::MatrixXd G(rows, cols);
    for (int j = 0; j < cols; ++j) G.col(j) = rng.gaussian_vector(rows);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  }

  Immersion linear(int N, int n) {
    Eigen::MatrixXd B(N, n);
    for (int j = 0; j < n; ++j) B.col(j) = rng.gaussian_vector(N);
    const ParamBox box{Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Constant(n, 1.0)};
    return Immersion("random_plane", linear_map(B, Eigen::VectorXd::Zero(N)), box);
  }
};

double largest_power(const Eigen::MatrixXd& J, int n) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(J.rows(), J.cols());
  for (int k = 0; k < n; ++k) P = P * J;
  return P.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("metallic numbers solve their equation and follow the Fibonacci law") {
  Gen g(101);
  for (int trial = 0; trial < 100; ++trial) {
    const MetallicParams mp = g.params();
    CHECK(std::abs(mp.sigma * mp.sigma - mp.p * mp.sigma - mp.q) <= 1e-12 * mp.sigma * mp.sigma);
    CHECK(std::abs(mp.sigma_bar * mp.sigma_bar - mp.p * mp.sigma_bar - mp.q) <= 1e-12 * mp.sigma * mp.sigma);
    const auto gn = gen_fibonacci(mp, 12);
    for (int n = 1; n <= 12; ++n) {
      const double power = std::pow(mp.sigma, n);
      CHECK(std::abs(power - (gn[n] * mp.sigma + mp.q * gn[n - 1])) <= 1e-9 * power);
    }
  }
}

TEST_CASE("random ambient structures satisfy the power identity and are compatible") {
  Gen g(202);
  for (int trial = 0; trial < 60; ++trial) {
    const AmbientStructure amb = g.ambient();
    for (int n = 1; n <= 12; ++n) {
      const double scale = std::max(1.0, largest_power(amb.J(), n));
      CHECK(power_identity_residual(amb.J(), amb.params(), n) / scale <= 1e-12);
    }
    CHECK(compatibility_residual(amb, 100, g.rng.gaussian() > 0 ? 1 : 2) <= 1e-12);
  }
}

TEST_CASE("algebraic identities and slant bounds on random linear subspaces") {
  Gen g(303);
  for (int trial = 0; trial < 40; ++trial) {
    const AmbientStructure amb = g.ambient(2);
    const int n = g.integer(1, amb.dim() - 1);
    const Immersion imm = g.linear(amb.dim(), n);
    const Eigen::VectorXd u = sample_points(imm, 1, trial).front();
    const SigmaStructure s = decompose(amb, frame_at(imm, u));
    const double scale = amb.params().sigma * amb.params().sigma;
    CHECK(verify_structure_identities(s, amb.params(), 1e-11 * scale, trial).passed());

    const SlantReport rep = classify_slant(imm, amb, 2, n + 4, trial);
    CHECK(rep.lambda_hat >= 0.0);
    CHECK(rep.lambda_hat <= 1.0);
    CHECK(rep.theta_min >= 0.0);
    CHECK(rep.theta_max <= std::numbers::pi / 2);
    if (rep.classification == SlantClass::invariant) CHECK(rep.lambda_hat == doctest::Approx(1.0).epsilon(1e-10));
    if (rep.classification == SlantClass::anti_invariant) CHECK(rep.lambda_hat <= 1e-10);
    if (n == 1) CHECK(rep.deviation <= 1e-12);

    SuiteOptions opts;
    opts.samples = 2;
    opts.seed = trial;
    opts.tol = 1e-10;
    CHECK(verify_connection_identities(imm, amb, opts).passed());
  }
}

TEST_CASE("lines are slant with the angle given by their direction") {
  Gen g(404);
  for (int trial = 0; trial < 50; ++trial) {
    const AmbientStructure amb = g.ambient(2);
    const Immersion imm = g.linear(amb.dim(), 1);
    const SlantReport rep = classify_slant(imm, amb, 3, 6, trial);
    CHECK(rep.classification != SlantClass::not_slant);
    const Eigen::VectorXd v = frame_at(imm, Eigen::VectorXd::Zero(1)).E.col(0);
    const Eigen::VectorXd Jv = amb.J() * v;
    CHECK(std::abs(rep.lambda_hat - std::pow(v.dot(Jv) / Jv.norm(), 2)) <= 1e-12);
  }
}

TEST_CASE("structures inherited through random linear chains agree with the direct ones") {
  Gen g(505);
  for (int trial = 0; trial < 25; ++trial) {
    const AmbientStructure amb = g.ambient(3);
    const int N = amb.dim();
    if (N < 3) continue;
    const int m = g.integer(2, N - 1);
    const int n = g.integer(1, m - 1);
    const Eigen::MatrixXd Bbar = g.orthonormal(N, m);
    Eigen::MatrixXd L(m, n);
    for (int j = 0; j < n; ++j) L.col(j) = g.rng.gaussian_vector(m);
    const ParamBox outer_box{Eigen::VectorXd::Constant(m, -100.0), Eigen::VectorXd::Constant(m, 100.0)};
    const ParamBox inner_box{Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Constant(n, 1.0)};
    const Immersion outer("outer", linear_map(Bbar, Eigen::VectorXd::Zero(N)), outer_box);
    const Immersion inner("inner", linear_map(Bbar * L, Eigen::VectorXd::Zero(N)), inner_box);
    const VerificationReport rep =
        verify_inheritance_chain(amb, outer, inner, linear_map(L, Eigen::VectorXd::Zero(m)), 3, trial, 1e-10);
    CHECK(rep.passed());
  }
}

TEST_CASE("direct and closed-form Nijenhuis tensors agree on spheres of random radius") {
  Gen g(606);
  for (int trial = 0; trial < 10; ++trial) {
    const double radius = g.rng.uniform(0.5, 4.0);
    const MetallicParams mp = g.params();
    const BuiltEntry e = build_entry("sphere", {{"radius", std::to_string(radius)},
                                                {"p", std::to_string(mp.p)},
                                                {"q", std::to_string(mp.q)}});
    for (const auto& u : sample_points(e.immersion, 3, trial)) {
      const LocalGeometry geo(e.immersion, e.ambient, u);
      const Eigen::MatrixXd R = geo.base().E.transpose() * geo.base().Df;
      const Eigen::VectorXd X = g.rng.gaussian_vector(2);
      const Eigen::VectorXd Y = g.rng.gaussian_vector(2);
      const Eigen::VectorXd direct = nijenhuis_T(e.immersion, e.ambient, u, X, Y);
      const Eigen::VectorXd closed = geo.base().E * nijenhuis_T_closed_form(geo, R * X, R * Y);
      CHECK((direct - closed).norm() <= 1e-5 * std::max(1.0, direct.norm()));
    }
  }
}

TEST_CASE("pointwise class is constant on invariant and linear entries") {
  Gen g(707);
  for (int trial = 0; trial < 10; ++trial) {
    const BuiltEntry e = build_entry("example2", {{"a", std::to_string(g.integer(2, 3))},
                                                  {"b", std::to_string(g.integer(2, 3))},
                                                  {"r1", std::to_string(g.rng.uniform(0.5, 2.0))},
                                                  {"r2", std::to_string(g.rng.uniform(0.5, 2.0))}});
    for (const auto& u : sample_points(e.immersion, 10, trial)) {
      CHECK(classify_pointwise(decompose(e.ambient, frame_at(e.immersion, u))) == PointClass::invariant);
    }
  }
  for (const auto spec : {LinearSpec::inv_line, LinearSpec::anti_line, LinearSpec::mixed_line,
                          LinearSpec::anti_plane, LinearSpec::slant_plane, LinearSpec::mixed_plane}) {
    const BuiltEntry e = linear_slant(spec, 2, g.params());
    const auto points = sample_points(e.immersion, 10, 1);
    const PointClass first = classify_pointwise(decompose(e.ambient, frame_at(e.immersion, points.front())));
    for (const auto& u : points) CHECK(classify_pointwise(decompose(e.ambient, frame_at(e.immersion, u))) == first);
  }
}

TEST_CASE("reports are deterministic for random seeds") {
  Gen g(808);
  for (int trial = 0; trial < 5; ++trial) {
    RunConfig c;
    c.entry = trial % 2 ? "example2" : "linear_slant";
    c.samples = 3;
    c.seed = static_cast<std::uint64_t>(g.rng.uniform() * 1e9);
    CHECK(to_json_text(run(c).report) == to_json_text(run(c).report));
  }
}
