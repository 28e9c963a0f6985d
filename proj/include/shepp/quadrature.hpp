#pragma once

#include <cstddef>
#include <vector>

namespace shepp {

/// Gauss-Legendre nodes and weights mapped to a finite interval [a, b].
/// Nodes are ascending and strictly interior.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = 0.0;
  double b = 0.0;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// N-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree
/// up to 2N-1. Throws std::invalid_argument for N < 1 or a >= b.
QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace shepp
