#include "shepp/exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "shepp/gaussian.hpp"

namespace shepp {

namespace {

constexpr int kMaxSteps = 5;
constexpr int kMaxDim = kMaxSteps + 1;

// Nodes for the semi-infinite one-dimensional integrals in F2 and F2(h|x0).
constexpr int kLineNodes = 200;
constexpr double kLineLength = 12.0;

using Matrix = std::array<double, kMaxDim * kMaxDim>;

// Determinant of the leading dim x dim block by LU with partial pivoting.
double determinant(Matrix m, int dim) {
  double det = 1.0;
  for (int c = 0; c < dim; ++c) {
    int pivot = c;
    for (int r = c + 1; r < dim; ++r)
      if (std::abs(m[r * dim + c]) > std::abs(m[pivot * dim + c])) pivot = r;
    if (m[pivot * dim + c] == 0.0) return 0.0;
    if (pivot != c) {
      for (int k = 0; k < dim; ++k) std::swap(m[c * dim + k], m[pivot * dim + k]);
      det = -det;
    }
    const double d = m[c * dim + c];
    det *= d;
    for (int r = c + 1; r < dim; ++r) {
      const double f = m[r * dim + c] / d;
      if (f == 0.0) continue;
      for (int k = c + 1; k < dim; ++k) m[r * dim + k] -= f * m[c * dim + k];
    }
  }
  return det;
}

// int_{-inf}^{u} Phi(t) dt
double integrated_Phi(double u) { return u * Phi(u) + phi(u); }

void check_steps(int n) {
  if (n < 1 || n > kMaxSteps)
    throw std::invalid_argument("number of unit steps must lie in 1.." + std::to_string(kMaxSteps) +
                                ", got " + std::to_string(n));
}

// Values S(0..n) with partial sums of s_1..s_k.
struct PathValues {
  std::array<double, kMaxDim> s{};
  std::array<double, kMaxDim> prefix{};  // prefix[k] = s_1 + ... + s_k

  void finalize(int last) {
    prefix[0] = 0.0;
    for (int k = 1; k <= last; ++k) prefix[k] = prefix[k - 1] + s[k];
  }
  // s_a + ... + s_b, zero when a > b.
  double sum(int a, int b) const {
    if (a > b) return 0.0;
    double t = prefix[b] - prefix[std::max(a, 1) - 1];
    if (a == 0) t += s[0];
    return t;
  }
};

// Exponent of entry (i, j) of the determinant kernel: s_i + a_{ij}.
double entry_argument(const PathValues& p, double h, int i, int j) {
  if (i == j) return p.s[i];
  if (i > j) return (i - j) * h - p.sum(j + 1, i - 1);
  return (i - j) * h + p.sum(i, j);
}

double full_determinant(int n, double h, const PathValues& p) {
  const int dim = n + 1;
  Matrix m{};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m[i * dim + j] = phi(entry_argument(p, h, i, j));
  return determinant(m, dim);
}

// Column n integrated over s_n < h; additionally row 0 integrated over
// s_0 < h when `conditional` is false.
double reduced_determinant(int n, double h, const PathValues& p, bool conditional) {
  const int dim = n + 1;
  Matrix m{};
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double v;
      if (j == n) {
        if (i == n)
          v = Phi(h);
        else if (!conditional && i == 0)
          v = integrated_Phi((2 - n) * h + p.sum(1, n - 1));
        else
          v = Phi((i - n + 1) * h + p.sum(i, n - 1));
      } else if (!conditional && i == 0) {
        v = Phi((1 - j) * h + p.sum(1, j));
      } else {
        v = phi(entry_argument(p, h, i, j));
      }
      m[i * dim + j] = v;
    }
  }
  return determinant(m, dim);
}

// Tensor-product sum over `dims` axes of `rule`. The axis values are written
// into p.s[first_var .. first_var + dims - 1]. Slabs along the first axis are
// summed in index order, so the result does not depend on the worker count.
template <class F>
double tensor_integrate(const QuadratureRule& rule, int dims, int first_var, const PathValues& base,
                        int last_var, F&& integrand) {
  if (dims == 0) {
    PathValues p = base;
    p.finalize(last_var);
    return integrand(p);
  }
  const int nodes = static_cast<int>(rule.size());
  std::vector<double> slab(nodes, 0.0);

  auto run_slab = [&](int i0) {
    PathValues p = base;
    p.s[first_var] = rule.nodes[i0];
    std::array<int, kMaxDim> idx{};
    double sum = 0.0;
    for (;;) {
      double w = rule.weights[i0];
      for (int d = 1; d < dims; ++d) {
        p.s[first_var + d] = rule.nodes[idx[d]];
        w *= rule.weights[idx[d]];
      }
      p.finalize(last_var);
      sum += w * integrand(p);
      int d = dims - 1;
      while (d >= 1 && ++idx[d] == nodes) idx[d--] = 0;
      if (d < 1) break;
    }
    slab[i0] = sum;
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(nodes)));
  if (workers <= 1 || dims < 2) {
    for (int i0 = 0; i0 < nodes; ++i0) run_slab(i0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i0 = w; i0 < nodes; i0 += workers) run_slab(i0);
      });
    for (auto& t : pool) t.join();
  }
  double total = 0.0;
  for (double v : slab) total += v;
  return total;
}

double line_integral(double upper, const auto& f) {
  static const QuadratureRule unit = gauss_legendre(kLineNodes, 0.0, 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < unit.size(); ++i) sum += unit.weights[i] * f(upper * unit.nodes[i]);
  return upper * sum;
}

}  // namespace

double integration_floor(double h, double trunc) {
  if (!(trunc > 0.0)) throw std::invalid_argument("truncation length must be positive");
  return std::min(h, 0.0) - trunc;
}

int default_nodes(int n, Method method) {
  if (method == Method::Reduced) return 48;
  if (n <= 3) return 48;
  if (n == 4) return 32;
  return 16;
}

QuadratureRule axis_rule(int n, double h, const IntegrationConfig& cfg) {
  const int nodes = cfg.nodes > 0 ? cfg.nodes : default_nodes(n, cfg.method);
  return gauss_legendre(nodes, integration_floor(h, cfg.trunc), h);
}

double F1_given_x(double h, double x) {
  if (x >= h) return 0.0;
  return Phi(h) - std::exp(0.5 * (x * x - h * h)) * Phi(x);
}

double F1(double h) {
  const double P = Phi(h);
  const double p = phi(h);
  return P * P - p * (h * P + p);
}

double F2(double h) {
  const double P = Phi(h);
  const double p = phi(h);
  const double upper = kLineLength + std::max(h, 0.0);
  const double tail_sq = line_integral(upper, [h](double y) {
    const double c = Phi(h - y);
    return c * c * phi(h + y);
  });
  const double cross = line_integral(upper, [h](double y) {
    return Phi(h - y) * (Phi(kSqrt2 * y) - 0.5);
  });
  return P * P * P + p * p * P + 0.5 * p * p * ((h * h - 1.0) * P + h * p) + tail_sq -
         2.0 * p * P * (h * P + p) - phi(kSqrt2 * h) * cross / kSqrt2;
}

double F2_hat(double h) {
  const double P = Phi(h);
  const double p = phi(h);
  const double b = 2.0 * h - 0.717;
  const double b1 = b - 0.717;
  const double b2 = 2.0 * h;
  const double b3 = b + 2.151;
  const double b4 = b + 1.434;
  const double base = P * P * P + p * p * P + 0.5 * p * p * ((h * h - 1.0) * P + h * p) -
                      2.0 * p * P * (h * P + p);
  const double bracket = 2.0 * J({0.916, b, h}) - 0.5 * J({1.332, b1, h}) -
                         V({1.416, b, h}) / kSqrt2Pi + 2.0 / kSqrt2Pi * V({1.0, b2, h}) +
                         K({1.5, b2, h}) / kPi -
                         0.5 * (K({1.332, b3, 0.0}) - 2.0 / kSqrt2Pi * U({1.416, b4, 0.0}));
  return base + Phi(2.0 * h) - P - 0.5 / kSqrt2Pi * std::exp(-2.0 * h * h) * bracket;
}

namespace {

// Terms shared by F2(h|x0) and its closed-form approximation.
double f2_given_x_common(double h, double x0) {
  const double P = Phi(h);
  const double p = phi(h);
  const double inv = 1.0 / phi(x0);
  return P * P + inv * p * p * x0 * Phi(x0) - inv * p * P * Phi(x0) - h * p * P;
}

void check_nonpositive_start(double x0) {
  if (x0 > 0.0)
    throw std::domain_error("F2(h|x0) representation holds only for x0 <= 0, got " +
                            std::to_string(x0));
}

}  // namespace

double F2_given_x(double h, double x0) {
  check_nonpositive_start(x0);
  if (x0 >= h) return 0.0;
  const double first = line_integral(kLineLength, [=](double u) {
    const double y = h + u;
    return phi(y) * Phi(2.0 * h - y) * phi(h + x0 - y);
  });
  const double second = line_integral(kLineLength, [=](double u) {
    const double y = h + u;
    return Phi(h + x0 - y) * phi(2.0 * h - y) * phi(y);
  });
  return f2_given_x_common(h, x0) + (first - second) / phi(x0);
}

double F2_given_x_hat(double h, double x0) {
  check_nonpositive_start(x0);
  if (x0 >= h) return 0.0;
  const double px0 = phi(x0);
  const double u = (h + x0) / kSqrt2;
  double f = f2_given_x_common(h, x0);
  f += phi(u) / (kSqrt2 * px0) * (Phi(2.0 * h * kSqrt2 - u) - Phi(h * kSqrt2 - u));

  const double ya = 2.664 * h + x0 + 0.717;
  const double yb = 2.664 * h + x0 - 0.717;
  const double inner =
      std::exp(-1.434 * h) * (K({1.416, ya, 2.0 * h}) - K({1.416, ya, h})) -
      std::exp(1.434 * h) * (K({1.416, yb, kInf}) - K({1.416, yb, 2.0 * h}));
  f -= phi(h + x0) / (2.0 * kSqrt2Pi * px0) * std::exp(-1.664 * h * h) * inner;

  const double s = h + x0;
  const double yc = 2.0 * h + 0.832 * s - 0.717;
  f -= std::exp(0.717 * s - 2.0 * h * h - 0.416 * s * s) / (2.0 * px0 * 2.0 * kPi) *
       (K({1.416, yc, kInf}) - K({1.416, yc, h}));
  return f;
}

double det_integrand(const DetContext& ctx, std::span<const double> s) {
  check_steps(ctx.n);
  if (static_cast<int>(s.size()) != ctx.n)
    throw std::invalid_argument("det_integrand: expected n path values s_1..s_n");
  PathValues p;
  p.s[0] = ctx.x;
  for (int k = 1; k <= ctx.n; ++k) p.s[k] = s[k - 1];
  p.finalize(ctx.n);
  return full_determinant(ctx.n, ctx.h, p);
}

double Fn_given_x(int n, double h, double x, const QuadratureRule& rule, Method method) {
  check_steps(n);
  if (x >= h) return 0.0;
  PathValues base;
  base.s[0] = x;
  double integral;
  if (method == Method::Reduced) {
    integral = tensor_integrate(rule, n - 1, 1, base, n - 1, [&](const PathValues& p) {
      return reduced_determinant(n, h, p, true);
    });
  } else {
    integral = tensor_integrate(rule, n, 1, base, n, [&](const PathValues& p) {
      return full_determinant(n, h, p);
    });
  }
  return integral / phi(x);
}

double Fn_given_x(int n, double h, double x, const IntegrationConfig& cfg) {
  check_steps(n);
  return Fn_given_x(n, h, x, axis_rule(n, h, cfg), cfg.method);
}

double Fn(int n, double h, const QuadratureRule& rule, Method method) {
  check_steps(n);
  PathValues base;
  if (method == Method::Reduced) {
    return tensor_integrate(rule, n - 1, 1, base, n - 1, [&](const PathValues& p) {
      return reduced_determinant(n, h, p, false);
    });
  }
  // phi(x) cancels against the 1/phi(x) of the conditional probability.
  return tensor_integrate(rule, n + 1, 0, base, n, [&](const PathValues& p) {
    return full_determinant(n, h, p);
  });
}

double Fn(int n, double h, const IntegrationConfig& cfg) {
  check_steps(n);
  return Fn(n, h, axis_rule(n, h, cfg), cfg.method);
}

double kernel_p1(double h, double x, double z) {
  if (x >= h || z >= h) return 0.0;
  return phi(z) * -std::expm1(-(h - z) * (h - x));
}

double p1_density(double h, double z) {
  if (z >= h) return 0.0;
  return Phi(h) * phi(z) - Phi(z) * phi(h);
}

double kernel_q(double h, double x, double z) {
  if (x >= h - kKernelGuard)
    throw std::domain_error("kernel_q: start value must lie below h - " +
                            std::to_string(kKernelGuard));
  if (z >= h) return 0.0;
  const double Ph = Phi(h);
  const double ph = phi(h);
  const double Px = Phi(x);
  const double px = phi(x);
  const double Pxz = Phi(x + z - h);
  const double pxz = phi(x + z - h);
  const double c = phi(2.0 * h - x);
  const double pz = phi(z);
  const double det = Ph * (px * pz - pxz * ph) - Px * (ph * pz - pxz * c) + Pxz * (ph * ph - px * c);
  return det / (Ph * px - Px * ph);
}

}  // namespace shepp
