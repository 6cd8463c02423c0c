#include "metallic/catalog.hpp"
#include "metallic/errors.hpp"
#include "metallic/sigma.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace metallic;

namespace {

const OracleRow& row(const std::vector<OracleRow>& rows, const std::string& name) {
  const auto it = std::find_if(rows.begin(), rows.end(), [&](const OracleRow& r) { return r.name == name; });
  REQUIRE(it != rows.end());
  return *it;
}

}  // namespace

TEST_CASE("entries are listed alphabetically") {
  std::vector<std::string> names;
  for (const auto& e : catalog()) names.push_back(e.name);
  CHECK(std::is_sorted(names.begin(), names.end()));
  CHECK(std::find(names.begin(), names.end(), "example1") != names.end());
  CHECK(std::find(names.begin(), names.end(), "example2") != names.end());
  CHECK(std::find(names.begin(), names.end(), "linear_slant") != names.end());
  const std::string text = catalog_list();
  for (const auto& n : names) CHECK(text.find(n + "\n") != std::string::npos);
  CHECK(text.find("expected: invariant") != std::string::npos);
}

TEST_CASE("lookup and parameter resolution") {
  CHECK_THROWS_AS(find_entry("torus"), UnknownEntryError);
  CHECK_THROWS_AS(build_entry("torus", {}), UnknownEntryError);
  const CatalogEntry& e = find_entry("example2");
  const ParamMap m = resolve_params(e, {{"r1", "2"}});
  CHECK(m.at("r1") == "2");
  CHECK(m.at("r2") == "1");
  CHECK(m.at("p") == "1");
  CHECK_THROWS_AS(resolve_params(e, {{"r3", "1"}}), DomainError);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(build_entry("example2", {{"r2", "0"}}), DomainError);
  CHECK_THROWS_AS(build_entry("example2", {{"r1", "-1"}}), DomainError);
  CHECK_THROWS_AS(build_entry("example2", {{"a", "1"}}), DomainError);
  CHECK_THROWS_AS(build_entry("example2", {{"r", "2"}}), DomainError);
  CHECK_NOTHROW(build_entry("example2", {{"r", "1.4142135623730951"}}));
  CHECK_THROWS_AS(build_entry("example1", {{"r2", "0"}}), DomainError);
  CHECK_THROWS_AS(build_entry("example1", {{"b", "1"}}), DomainError);
  CHECK_THROWS_AS(build_entry("example1", {{"lambda", "0"}}), DomainError);
  CHECK_THROWS_AS(build_entry("example1", {{"R", "3"}}), DomainError);
  CHECK_NOTHROW(build_entry("example1", {{"R", "1.7320508075688772"}}));
  CHECK_THROWS_AS(build_entry("circle", {{"radius", "abc"}}), DomainError);
  CHECK_THROWS_AS(build_entry("circle", {{"radius", "inf"}}), DomainError);
  CHECK_THROWS_AS(build_entry("circle", {{"p", "1.5"}}), DomainError);
  CHECK_THROWS_AS(build_entry("circle", {{"q", "0"}}), DomainError);
  CHECK_THROWS_AS(build_entry("linear_slant", {{"spec", "curve"}}), DomainError);
  CHECK_THROWS_AS(build_entry("linear_slant", {{"spec", "anti_plane"}, {"k", "0"}}), DomainError);
}

TEST_CASE("linear spec names round-trip") {
  for (const auto spec : {LinearSpec::inv_line, LinearSpec::anti_line, LinearSpec::mixed_line,
                          LinearSpec::anti_plane, LinearSpec::slant_plane, LinearSpec::mixed_plane}) {
    CHECK(parse_linear_spec(to_string(spec)) == spec);
  }
}

TEST_CASE("every entry builds and samples valid frames in both modes") {
  for (const auto& entry : catalog()) {
    for (const auto mode : {DerivativeMode::analytic, DerivativeMode::central_difference}) {
      CAPTURE(entry.name);
      const BuiltEntry e = entry.build(resolve_params(entry, {}), mode);
      CHECK(e.immersion.mode() == mode);
      if (entry.name != "linear_slant") CHECK(e.expected_class == entry.expected_class);
      CHECK(e.ambient.dim() == e.immersion.N());
      // Central-difference tangents meet exact override normals only to the Jacobian accuracy.
      const double tol = mode == DerivativeMode::analytic ? 1e-12 : 1e-9;
      for (const auto& u : sample_points(e.immersion, 100, 1)) {
        CHECK(e.immersion.domain().contains(u));
        CHECK(frame_orthonormality_residual(frame_at(e.immersion, u)) <= tol);
      }
    }
  }
}

TEST_CASE("first normal coefficient of the product of spheres at the middle of the join") {
  const BuiltEntry e = build_entry("example1", {});
  Eigen::VectorXd u = sample_points(e.immersion, 1, 3).front();
  u(0) = std::numbers::pi / 4;
  const SigmaStructure s = decompose(e.ambient, frame_at(e.immersion, u));
  CHECK(s.A(0, 0) == doctest::Approx(0.87267799624996497).epsilon(1e-14));
}

TEST_CASE("normal coefficients of the invariant product of circles") {
  const BuiltEntry e = build_entry("example2", {});
  Eigen::Matrix2d expected;
  expected << 0.5, std::sqrt(5.0) / 2, std::sqrt(5.0) / 2, 0.5;
  for (const auto& u : sample_points(e.immersion, 10, 2)) {
    const SigmaStructure s = decompose(e.ambient, frame_at(e.immersion, u));
    CHECK((s.A - expected).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((s.A * s.A - s.A - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("invariant product of spheres reproduces every closed form") {
  for (int a = 2; a <= 3; ++a) {
    const BuiltEntry e = build_entry("example2", {{"a", std::to_string(a)}, {"b", "3"}, {"p", "2"}, {"r2", "2"}});
    const auto rows = evaluate_oracle(e, 20, 5);
    CHECK(rows.size() == 3 + 2 + 2 + 1);
    for (const auto& r : rows) {
      CAPTURE(r.name);
      CHECK(r.gate_pass);
      REQUIRE(r.match_residual.has_value());
      CHECK(*r.match_residual <= 1e-10);
    }
  }
}

TEST_CASE("self-consistency gate on the printed closed forms of the product of spheres") {
  const BuiltEntry e = build_entry("example1", {});
  const auto rows = evaluate_oracle(e, 20, 5);
  for (const std::string name : {"a11", "a12"}) {
    const OracleRow& r = row(rows, name);
    CHECK(r.gate_pass);
    REQUIRE(r.match_residual.has_value());
    CHECK(*r.match_residual <= 1e-8);
  }
  for (const std::string name : {"a22", "xi1", "xi2", "eta1", "eta2", "T"}) {
    CAPTURE(name);
    const OracleRow& r = row(rows, name);
    CHECK_FALSE(r.gate_pass);
    CHECK_FALSE(r.match_residual.has_value());
    CHECK_FALSE(r.printed.empty());
    CHECK(r.printed.size() == r.definitional.size());
    CHECK(r.printed.size() == r.computed.size());
  }
  // The printed eta2 is zero while <JX, N2> does not vanish on the tangent space.
  const OracleRow& eta2 = row(rows, "eta2");
  double largest = 0.0;
  for (double v : eta2.printed) CHECK(v == 0.0);
  for (double v : eta2.definitional) largest = std::max(largest, std::abs(v));
  CHECK(largest > 0.1);
}

TEST_CASE("the conjugate product structure carries no closed forms") {
  CHECK(build_entry("example1", {{"lambda", "-1"}}).oracle.empty());
  CHECK_FALSE(build_entry("example1", {}).oracle.empty());
}

TEST_CASE("expected slant angles of linear entries") {
  const MetallicParams mp = make_params(2, 1);
  CHECK(*linear_slant(LinearSpec::inv_line, 0, mp).expected_theta == 0.0);
  CHECK(*linear_slant(LinearSpec::anti_plane, 3, mp).expected_theta == std::numbers::pi / 2);
  CHECK(*linear_slant(LinearSpec::slant_plane, 0, mp).expected_theta ==
        doctest::Approx(std::acos(std::sqrt(4.0 / 12.0))).epsilon(1e-15));
  CHECK_FALSE(linear_slant(LinearSpec::mixed_plane, 0, mp).expected_theta.has_value());
}
