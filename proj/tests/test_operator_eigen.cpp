#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "shepp/exact.hpp"
#include "shepp/gaussian.hpp"
#include "shepp/operator_eigen.hpp"

using namespace shepp;

TEST_CASE("rank-one kernel has eigenvalue sum w f g") {
  const QuadratureRule r = gauss_legendre(40, -3.0, 2.0);
  auto f = [](double x) { return std::exp(-x * x); };
  auto g = [](double z) { return 1.0 + 0.5 * std::cos(z); };
  const DiscretizedOperator op = discretize([&](double x, double z) { return f(x) * g(z); }, r);
  const double expected = r.integrate([&](double x) { return f(x) * g(x); });
  const EigenResult e = dominant_eigen(op);
  CHECK(e.eigenvalue == doctest::Approx(expected).epsilon(1e-12));
  // eigenfunction of q -> int q(x) K(x, .) dx is proportional to g
  for (std::size_t i = 0; i < r.size(); ++i)
    CHECK(e.density[i] / e.density[0] == doctest::Approx(g(r.nodes[i]) / g(r.nodes[0])).epsilon(1e-10));
}

TEST_CASE("symmetrised and non-symmetrised matrices share the eigenvalue") {
  for (double h : {0.0, 1.5}) {
    const QuadratureRule r = nystrom_rule(h, 120);
    const DiscretizedOperator op = discretize(KernelId::TwoStepConditional, h, r);
    CHECK(dominant_eigenvalue_AD(op) == doctest::Approx(dominant_eigen(op).eigenvalue).epsilon(1e-11));
    CHECK(op.kernel == KernelId::TwoStepConditional);
    CHECK(op(3, 5) == doctest::Approx(std::sqrt(r.weights[3] * r.weights[5]) *
                                      kernel_q(h, r.nodes[3], r.nodes[5])).epsilon(1e-14));
  }
}

TEST_CASE("kernel ids map to the transition kernels") {
  CHECK(kernel_value(KernelId::OneStep, 1.0, -0.3, 0.2) == kernel_p1(1.0, -0.3, 0.2));
  CHECK(kernel_value(KernelId::TwoStepConditional, 1.0, -0.3, 0.2) == kernel_q(1.0, -0.3, 0.2));
}

TEST_CASE("eigenfunction is a normalised positive density") {
  const QuadratureRule r = nystrom_rule(0.5, 200);
  const EigenResult e = dominant_eigen(KernelId::OneStep, 0.5, r);
  double mass = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(e.density[i] >= 0.0);
    mass += r.weights[i] * e.density[i];
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.residual < 1e-10);
  CHECK(e.eigenvalue > 0.0);
  CHECK(e.eigenvalue < 1.0);
}

TEST_CASE("Perron roots increase with the level and are converged in N") {
  double prev = 0.0;
  for (double h = 0.0; h <= 4.0; h += 0.5) {
    const double l300 = dominant_eigen(KernelId::TwoStepConditional, h, nystrom_rule(h, 300)).eigenvalue;
    const double l400 = dominant_eigen(KernelId::TwoStepConditional, h, nystrom_rule(h, 400)).eigenvalue;
    CAPTURE(h);
    CHECK(l300 > prev);
    CHECK(l300 == doctest::Approx(l400).epsilon(1e-8));
    prev = l300;
  }
}

TEST_CASE("two-step Perron root reproduces the published column") {
  const double h[] = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  const double lambda2[] = {0.201909, 0.366973, 0.563246, 0.746457, 0.879719, 0.954522, 0.986566, 0.996939, 0.999464};
  for (int k = 0; k < 9; ++k) {
    CAPTURE(h[k]);
    const double v = dominant_eigen(KernelId::TwoStepConditional, h[k], nystrom_rule(h[k], 300)).eigenvalue;
    CHECK(std::fabs(v - lambda2[k]) <= 1e-5);
  }
}

TEST_CASE("closed-form one-step root") {
  CHECK(lambda1_closed(0.0) == 0.25);
  CHECK_THROWS_AS(lambda1_closed(-0.1), std::invalid_argument);
  // 40-digit evaluations of the formula; the first two straddle the switch to
  // the linear expansion at the removable singularity
  CHECK(std::fabs(lambda1_closed(9.9e-7) - 0.25000028674866457290) < 1e-13);
  CHECK(std::fabs(lambda1_closed(1e-6) - 0.25000028964511662346) < 1e-13);
  CHECK(std::fabs(lambda1_closed(1e-5) - 0.25000289645920548517) < 1e-12);
  CHECK(std::fabs(lambda1_closed(1e-4) - 0.25002896539596184711) < 1e-12);
  CHECK(std::fabs(lambda1_closed(1e-3) - 0.25028973433224126250) < 1e-12);
  CHECK(std::fabs(lambda1_closed(1e-2) - 0.25290536237865756525) < 1e-12);
  CHECK(std::fabs(lambda1_closed(0.5) - 0.41375371654331153862) < 1e-13);
  CHECK(std::fabs(lambda1_closed(4.0) - 0.99946635768946071635) < 1e-13);
  const double h[] = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  const double published[] = {0.413754, 0.596156, 0.762590, 0.885025, 0.955674, 0.986738, 0.996958, 0.999466};
  for (int k = 0; k < 8; ++k) CHECK(std::fabs(lambda1_closed(h[k]) - published[k]) <= 1e-5);
}

TEST_CASE("closed-form one-step root against the Nystrom root") {
  // close for h >= 1.5; at lower levels the closed form is up to ~0.02 high
  for (double h = 0.5; h <= 4.0; h += 0.25) {
    const double nys = dominant_eigen(KernelId::OneStep, h, nystrom_rule(h, 300)).eigenvalue;
    const double d = lambda1_closed(h) - nys;
    CAPTURE(h);
    CAPTURE(d);
    if (h >= 1.5)
      CHECK(std::fabs(d) < 5e-3);
    else
      CHECK((d > 0.0 && d < 2.5e-2));
  }
}

TEST_CASE("one-step root is stable in N and L") {
  for (double h : {0.0, 2.0, 4.0}) {
    const double base = dominant_eigen(KernelId::OneStep, h, nystrom_rule(h, 200, 8.0)).eigenvalue;
    CHECK(dominant_eigen(KernelId::OneStep, h, nystrom_rule(h, 400, 8.0)).eigenvalue == doctest::Approx(base).epsilon(1e-9));
    CHECK(dominant_eigen(KernelId::OneStep, h, nystrom_rule(h, 200, 10.0)).eigenvalue == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("power iteration reports non-convergence") {
  const QuadratureRule r = nystrom_rule(0.0, 50);
  CHECK_THROWS_AS(dominant_eigen(KernelId::OneStep, 0.0, r, {1e-300, 2}), ConvergenceError);
}
