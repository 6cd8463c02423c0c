#include "metallic/errors.hpp"
#include "metallic/scalars.hpp"

#include <doctest.h>

using namespace metallic;

TEST_CASE("metallic numbers of small p, q") {
  const MetallicParams golden = make_params(1, 1);
  CHECK(golden.sigma == doctest::Approx(1.6180339887498949).epsilon(1e-15));
  CHECK(golden.sigma_bar == doctest::Approx(-0.6180339887498949).epsilon(1e-15));
  CHECK(golden.delta == 5.0);
  CHECK(make_params(2, 1).sigma == doctest::Approx(2.4142135623730951).epsilon(1e-15));
  CHECK(make_params(3, 1).sigma == doctest::Approx(3.3027756377319946).epsilon(1e-15));
  CHECK(make_params(1, 2).sigma == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("roots satisfy the metallic equation and Vieta") {
  for (int p = 1; p <= 5; ++p) {
    for (int q = 1; q <= 5; ++q) {
      const MetallicParams m = make_params(p, q);
      CHECK(std::abs(m.sigma * m.sigma - p * m.sigma - q) <= 1e-12 * m.sigma * m.sigma);
      CHECK(m.sigma + m.sigma_bar == doctest::Approx(p).epsilon(1e-14));
      CHECK(m.sigma * m.sigma_bar == doctest::Approx(-q).epsilon(1e-14));
    }
  }
}

TEST_CASE("non-positive parameters are rejected") {
  CHECK_THROWS_AS(make_params(0, 1), DomainError);
  CHECK_THROWS_AS(make_params(1, 0), DomainError);
  CHECK_THROWS_AS(make_params(-2, 3), DomainError);
}

TEST_CASE("secondary Fibonacci sequences") {
  const auto fib = gen_fibonacci(make_params(1, 1), 10);
  const std::vector<double> expected_fib{0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55};
  CHECK(fib == expected_fib);
  const auto pell = gen_fibonacci(make_params(2, 1), 6);
  const std::vector<double> expected_pell{0, 1, 2, 5, 12, 29, 70};
  CHECK(pell == expected_pell);
  const auto jacobsthal = gen_fibonacci(make_params(1, 2), 6);
  const std::vector<double> expected_jacobsthal{0, 1, 1, 3, 5, 11, 21};
  CHECK(jacobsthal == expected_jacobsthal);
}

TEST_CASE("power identity on scalar and diagonal structures") {
  const MetallicParams silver = make_params(2, 1);
  Eigen::MatrixXd s(1, 1);
  s(0, 0) = silver.sigma;
  // sigma^3 = 7 + 5 sqrt 2 = 5 sigma + 2.
  CHECK(power_identity_residual(s, silver, 3) <= 1e-12);
  CHECK(s(0, 0) * s(0, 0) * s(0, 0) == doctest::Approx(7.0 + 5.0 * std::sqrt(2.0)).epsilon(1e-15));

  const MetallicParams golden = make_params(1, 1);
  const Eigen::MatrixXd J = Eigen::Vector2d(golden.sigma, golden.sigma_bar).asDiagonal();
  CHECK(power_identity_residual(J, golden, 1) == 0.0);
  CHECK(power_identity_residual(J, golden, 5) <= 1e-12);
}

TEST_CASE("power identity errors") {
  const MetallicParams golden = make_params(1, 1);
  CHECK_THROWS_AS(power_identity_residual(Eigen::MatrixXd::Zero(2, 3), golden, 2), StructuralError);
  CHECK_THROWS_AS(power_identity_residual(Eigen::MatrixXd::Identity(2, 2), golden, 0), DomainError);
}
