#include "metallic/catalog.hpp"
#include "metallic/errors.hpp"
#include "metallic/slant.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace metallic;

namespace {

SlantReport classify(const BuiltEntry& e, int samples = 10) {
  return classify_slant(e.immersion, e.ambient, samples, e.immersion.n() + 8, 7);
}

SigmaStructure sigma_at_centre(const BuiltEntry& e) {
  return decompose(e.ambient, frame_at(e.immersion, Eigen::VectorXd::Zero(e.immersion.n())));
}

}  // namespace

TEST_CASE("line through (1, 1) with the golden structure") {
  const MetallicParams mp = make_params(1, 1);
  const BuiltEntry e = linear_slant(LinearSpec::mixed_line, 0, mp);
  const SlantReport rep = classify(e);
  CHECK(rep.classification == SlantClass::proper_slant);
  CHECK(std::abs(rep.theta_mean - std::acos(1.0 / std::sqrt(6.0))) <= 1e-9);
  CHECK(std::abs(rep.lambda_hat - 1.0 / 6.0) <= 1e-9);
  CHECK(rep.deviation <= 1e-12);
  REQUIRE(rep.quadratic_residual.has_value());
  CHECK(*rep.quadratic_residual <= 1e-12);
  REQUIRE(rep.tangent_form_residual.has_value());
  CHECK(*rep.tangent_form_residual <= 1e-9);
}

TEST_CASE("slant angle of a line through (1, 1) for other parameters") {
  for (int p = 1; p <= 4; ++p) {
    for (int q = 1; q <= 4; ++q) {
      const MetallicParams mp = make_params(p, q);
      const SlantReport rep = classify(linear_slant(LinearSpec::mixed_line, 0, mp), 3);
      const double expected = std::acos(p / std::sqrt(2.0 * p * p + 4.0 * q));
      CHECK(std::abs(rep.theta_mean - expected) <= 1e-12);
    }
  }
}

TEST_CASE("invariant and anti-invariant lines") {
  const MetallicParams mp = make_params(2, 3);
  const SlantReport inv = classify(linear_slant(LinearSpec::inv_line, 0, mp));
  CHECK(inv.classification == SlantClass::invariant);
  CHECK(inv.theta_mean <= 1e-12);
  CHECK(inv.lambda_hat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(inv.tangent_form_residual.has_value());

  const SlantReport anti = classify(linear_slant(LinearSpec::anti_line, 0, mp));
  CHECK(anti.classification == SlantClass::anti_invariant);
  CHECK(std::abs(anti.theta_mean - std::numbers::pi / 2) <= 1e-8);
  CHECK(anti.lambda_hat <= 1e-12);
}

TEST_CASE("anti-invariant planes of every dimension") {
  const MetallicParams mp = make_params(1, 2);
  for (int k = 1; k <= 4; ++k) {
    const SlantReport rep = classify(linear_slant(LinearSpec::anti_plane, k, mp), 3);
    CHECK(rep.classification == SlantClass::anti_invariant);
  }
}

TEST_CASE("slant plane has the angle of the slant line") {
  const MetallicParams mp = make_params(3, 1);
  const BuiltEntry e = linear_slant(LinearSpec::slant_plane, 0, mp);
  const SlantReport rep = classify(e);
  CHECK(rep.classification == SlantClass::proper_slant);
  REQUIRE(e.expected_theta.has_value());
  CHECK(std::abs(rep.theta_mean - *e.expected_theta) <= 1e-12);
  CHECK(*rep.tangent_form_residual <= 1e-9);
  CHECK(*rep.metric_T_residual <= 1e-12);
  CHECK(*rep.metric_N_residual <= 1e-12);
}

TEST_CASE("plane mixing an invariant and an anti-invariant direction is not slant") {
  const SlantReport rep = classify(linear_slant(LinearSpec::mixed_plane, 0, make_params(1, 1)));
  CHECK(rep.classification == SlantClass::not_slant);
  CHECK(rep.theta_min <= 1e-12);
  CHECK(std::abs(rep.theta_max - std::numbers::pi / 2) <= 1e-9);
  CHECK(rep.witness_min_direction.size() == 4);
  CHECK(rep.witness_max_direction.size() == 4);
  CHECK_FALSE(rep.quadratic_residual.has_value());
}

TEST_CASE("slant angle is invariant under scaling") {
  const BuiltEntry e = linear_slant(LinearSpec::mixed_plane, 0, make_params(2, 1));
  const SigmaStructure s = sigma_at_centre(e);
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const Eigen::VectorXd X = rng.gaussian_vector(2);
    double c = rng.uniform(-10.0, 10.0);
    if (std::abs(c) < 1e-3) c = 1.0;
    CHECK(std::abs(slant_angle(s, c * X) - slant_angle(s, X)) <= 1e-14);
  }
}

TEST_CASE("argument errors") {
  const BuiltEntry e = linear_slant(LinearSpec::mixed_line, 0, make_params(1, 1));
  const SigmaStructure s = sigma_at_centre(e);
  CHECK_THROWS_AS(slant_angle(s, Eigen::VectorXd::Zero(1)), DomainError);
  CHECK_THROWS_AS(slant_angle(s, Eigen::VectorXd::Ones(2)), StructuralError);
  CHECK_THROWS_AS(slant_tangent_form_residual(s, 0.0), PreconditionError);
  CHECK_THROWS_AS(slant_tangent_form_residual(s, std::numbers::pi / 2), PreconditionError);
  CHECK_THROWS_AS(classify_slant(e.immersion, e.ambient, 0, 3, 1), DomainError);
  CHECK_THROWS_AS(classify_slant(e.immersion, e.ambient, 1, 0, 1), DomainError);
  CHECK_THROWS_AS(classify_slant(e.immersion, e.ambient, 1, 3, 1, 0.0), DomainError);
}

TEST_CASE("curved entries") {
  const BuiltEntry ex2 = build_entry("example2", {});
  const SlantReport inv = classify(ex2);
  CHECK(inv.classification == SlantClass::invariant);
  CHECK(inv.theta_max <= 1e-6);

  const SlantReport ex1 = classify(build_entry("example1", {}));
  CHECK(ex1.classification == SlantClass::not_slant);
  CHECK(ex1.deviation > 1.0);
}
