#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "shepp/quadrature.hpp"

using namespace shepp;

TEST_CASE("two-point rule") {
  const QuadratureRule r = gauss_legendre(2, -1.0, 1.0);
  REQUIRE(r.size() == 2);
  CHECK(r.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("exact for polynomials up to degree 2N-1") {
  for (int n : {1, 3, 8, 20, 48}) {
    const double a = -0.7, b = 2.3;
    const QuadratureRule r = gauss_legendre(n, a, b);
    for (int d = 0; d <= 2 * n - 1; ++d) {
      const double exact = (std::pow(b, d + 1) - std::pow(a, d + 1)) / (d + 1);
      const double got = r.integrate([d](double x) { return std::pow(x, d); });
      CAPTURE(n);
      CAPTURE(d);
      CHECK(got == doctest::Approx(exact).epsilon(1e-12).scale(std::pow(2.3, d)));
    }
  }
}

TEST_CASE("nodes ascending and interior, weights positive and summing to the length") {
  for (int n : {5, 64, 300}) {
    const QuadratureRule r = gauss_legendre(n, -8.0, 1.5);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(r.weights[i] > 0.0);
      CHECK(r.nodes[i] > -8.0);
      CHECK(r.nodes[i] < 1.5);
      if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
      sum += r.weights[i];
    }
    CHECK(sum == doctest::Approx(9.5).epsilon(1e-13));
    CHECK(r.a == -8.0);
    CHECK(r.b == 1.5);
  }
}

TEST_CASE("symmetric about the midpoint") {
  const QuadratureRule r = gauss_legendre(31, 0.0, 1.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(r.nodes[i] + r.nodes[r.size() - 1 - i] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.weights[i] == doctest::Approx(r.weights[r.size() - 1 - i]).epsilon(1e-12));
  }
}

TEST_CASE("Gaussian integral converges") {
  const QuadratureRule r = gauss_legendre(60, -9.0, 9.0);
  CHECK(r.integrate([](double x) { return std::exp(-0.5 * x * x); }) ==
        doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(gauss_legendre(0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(4, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_legendre(4, 2.0, 1.0), std::invalid_argument);
}
