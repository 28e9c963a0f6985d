#include "shepp/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "shepp/gaussian.hpp"

namespace shepp {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  if (n == 0) return {1.0, 0.0};
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: interval must satisfy a < b");

  QuadratureRule rule;
  rule.a = a;
  rule.b = b;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Tricomi's initial guess for the i-th largest root, then Newton.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Largest roots fill the top of the ascending arrays.
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.nodes[i] = mid - half * x;
    rule.weights[n - 1 - i] = half * w;
    rule.weights[i] = half * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = mid;
  return rule;
}

}  // namespace shepp
