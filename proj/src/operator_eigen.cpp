#include "shepp/operator_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shepp/exact.hpp"
#include "shepp/gaussian.hpp"

namespace shepp {

namespace {

// Below this level the first-order expansion at the removable singularity
// is exact to double precision.
constexpr double kSmallLevel = 1e-6;
// d/dh of lambda1_closed at 0: sqrt(2/pi) (1/6 + pi/16).
const double kLambda1Slope = std::sqrt(2.0 / kPi) * (1.0 / 6.0 + kPi / 16.0);

// int_0^h (phi(t) - phi(h)) dt = Phi(h) - 1/2 - h phi(h); summed as a series
// for small h, where the direct difference cancels.
double erf_gap(double h) {
  if (h >= 0.5) return 0.5 * std::erf(h / kSqrt2) - h * phi(h);
  const double h2 = h * h;
  double power = h;  // h^(2k+1) / (2^k k!) with alternating sign
  double sum = 0.0;
  for (int k = 1; k <= 20; ++k) {
    power *= -h2 / (2.0 * k);
    sum -= power * (2.0 * k) / (2.0 * k + 1.0);
  }
  return kInvSqrt2Pi * sum;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Power iteration for the dominant eigenvalue of the transpose of `m`.
EigenResult power_iterate_transpose(const std::vector<double>& m, std::size_t dim,
                                    const PowerIterationOptions& opts) {
  std::vector<double> u(dim, 1.0);
  std::vector<double> next(dim);
  double lambda = 0.0;
  double change = 0.0;

  auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      const double ui = in[i];
      const double* row = &m[i * dim];
      for (std::size_t j = 0; j < dim; ++j) out[j] += ui * row[j];
    }
  };

  for (int it = 1; it <= opts.max_iterations; ++it) {
    apply(u, next);
    const double uu = std::inner_product(u.begin(), u.end(), u.begin(), 0.0);
    const double rq = std::inner_product(u.begin(), u.end(), next.begin(), 0.0) / uu;
    change = std::abs(rq - lambda);
    lambda = rq;
    const double scale = max_abs(next);
    if (scale == 0.0) break;
    for (std::size_t i = 0; i < dim; ++i) u[i] = next[i] / scale;
    if (it > 1 && change < opts.tolerance) {
      apply(u, next);
      double res = 0.0;
      for (std::size_t i = 0; i < dim; ++i) res = std::max(res, std::abs(next[i] - lambda * u[i]));
      EigenResult r;
      r.eigenvalue = lambda;
      r.iterations = it;
      r.residual = res / max_abs(u);
      r.density = std::move(u);
      return r;
    }
  }
  throw ConvergenceError(opts.max_iterations, change);
}

}  // namespace

double kernel_value(KernelId kernel, double h, double x, double z) {
  switch (kernel) {
    case KernelId::OneStep:
      return kernel_p1(h, x, z);
    case KernelId::TwoStepConditional:
      return kernel_q(h, x, z);
  }
  return 0.0;
}

DiscretizedOperator discretize(const std::function<double(double, double)>& kernel,
                               const QuadratureRule& rule) {
  DiscretizedOperator op;
  op.dim = rule.size();
  op.rule = rule;
  op.matrix.resize(op.dim * op.dim);
  std::vector<double> root_w(op.dim);
  for (std::size_t i = 0; i < op.dim; ++i) root_w[i] = std::sqrt(rule.weights[i]);
  for (std::size_t i = 0; i < op.dim; ++i)
    for (std::size_t j = 0; j < op.dim; ++j)
      op.matrix[i * op.dim + j] = root_w[i] * kernel(rule.nodes[i], rule.nodes[j]) * root_w[j];
  return op;
}

DiscretizedOperator discretize(KernelId kernel, double h, const QuadratureRule& rule) {
  auto op = discretize([=](double x, double z) { return kernel_value(kernel, h, x, z); }, rule);
  op.kernel = kernel;
  return op;
}

EigenResult dominant_eigen(const DiscretizedOperator& op, const PowerIterationOptions& opts) {
  EigenResult r = power_iterate_transpose(op.matrix, op.dim, opts);
  // u = D^{1/2} q, so q = D^{-1/2} u; normalise to a probability density.
  double sign = std::accumulate(r.density.begin(), r.density.end(), 0.0) < 0.0 ? -1.0 : 1.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < op.dim; ++i) {
    r.density[i] = sign * r.density[i] / std::sqrt(op.rule.weights[i]);
    mass += op.rule.weights[i] * r.density[i];
  }
  for (double& q : r.density) q /= mass;
  return r;
}

EigenResult dominant_eigen(KernelId kernel, double h, const QuadratureRule& rule,
                           const PowerIterationOptions& opts) {
  return dominant_eigen(discretize(kernel, h, rule), opts);
}

double dominant_eigenvalue_AD(const DiscretizedOperator& op, const PowerIterationOptions& opts) {
  // (A D)_ij = A_ij w_j = M_ij sqrt(w_j / w_i)
  std::vector<double> ad(op.matrix.size());
  for (std::size_t i = 0; i < op.dim; ++i)
    for (std::size_t j = 0; j < op.dim; ++j)
      ad[i * op.dim + j] =
          op(i, j) * std::sqrt(op.rule.weights[j]) / std::sqrt(op.rule.weights[i]);
  return power_iterate_transpose(ad, op.dim, opts).eigenvalue;
}

QuadratureRule nystrom_rule(double h, int nodes, double trunc) {
  return gauss_legendre(nodes, integration_floor(h, trunc), h);
}

double lambda1_closed(double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("lambda1_closed: level must be nonnegative");
  if (h < kSmallLevel) return 0.25 + kLambda1Slope * h;
  const double P = Phi(h);
  const double p = phi(h);
  // Phi(h) + p/h - p (p + h P) / D written over the common denominator h D,
  // with D = Phi(h) - exp(-h^2/2)/2 and no subtraction of nearly equal terms.
  const double half_erf = 0.5 * std::erf(h / kSqrt2);
  const double half_expm1 = 0.5 * std::expm1(-0.5 * h * h);
  const double D = half_erf - half_expm1;
  const double num = erf_gap(h) - half_expm1 - h * h * P;
  return P + p * num / (h * D);
}

}  // namespace shepp
