#pragma once

// Reference computations for the unit tests. They deliberately share no code
// with the library: plain adaptive Simpson, Laplace-expansion determinants,
// and the original ordered-variable form of the non-crossing probability.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline double pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
inline double cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson on [a, b] with relative tolerance `tol`; the interval is
/// pre-split into `pieces` panels so that narrow peaks are not missed.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11, int pieces = 16) {
  const double w = (b - a) / pieces;
  std::vector<double> fl(pieces), fm(pieces), fh(pieces), whole(pieces);
  double scale = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * w;
    fl[k] = f(lo);
    fm[k] = f(lo + 0.5 * w);
    fh[k] = f(lo + w);
    whole[k] = w / 6.0 * (fl[k] + 4.0 * fm[k] + fh[k]);
    scale += std::fabs(whole[k]);
  }
  const double abs_tol = tol * std::max(scale, 1e-300);
  double sum = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * w;
    sum += detail::simpson_step(f, lo, lo + w, fl[k], fm[k], fh[k], whole[k], abs_tol / pieces, 22);
  }
  return sum;
}

/// Determinant of the row-major n x n matrix `m` (n <= 8) by cofactor
/// expansion; `used` marks the columns already consumed by earlier rows.
inline double det(const double* m, int n, int row = 0, unsigned used = 0) {
  if (row == n) return 1.0;
  double total = 0.0;
  int sign = 1;
  for (int col = 0; col < n; ++col) {
    if (used & (1u << col)) continue;
    const double a = m[row * n + col];
    if (a != 0.0) total += sign * a * det(m, n, row + 1, used | (1u << col));
    sign = -sign;
  }
  return total;
}

/// Integrand of the ordered-variable representation:
///   det[ pdf(y_i - y_{j+1} + h) ]_{i,j=0..n},  y_0 = 0, y_1 = h - x,
/// where `tail` holds y_2..y_{n+1}.
inline double ordered_integrand(double h, double x, const std::vector<double>& tail) {
  const int n = static_cast<int>(tail.size());
  double y[10] = {0.0, h - x};
  for (int k = 0; k < n; ++k) y[k + 2] = tail[k];
  double m[64];
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) m[i * (n + 1) + j] = pdf(y[i] - y[j + 1] + h);
  return det(m, n + 1);
}

/// F_1(h|x) by integrating y_2 over (h - x, h - x + reach).
inline double F1_given_x(double h, double x, double reach = 14.0) {
  if (x >= h) return 0.0;
  const double lo = h - x;
  auto f = [&](double y2) { return ordered_integrand(h, x, {y2}); };
  return integrate(f, lo, lo + reach) / pdf(x);
}

/// F_2(h|x) over the ordered region h - x < y_2 < y_3 (nested Simpson).
inline double F2_given_x(double h, double x, double tol = 1e-9, double reach = 12.0) {
  if (x >= h) return 0.0;
  const double lo = h - x;
  auto outer = [&](double y2) {
    auto inner = [&](double y3) { return ordered_integrand(h, x, {y2, y3}); };
    return integrate(inner, y2, lo + reach, 0.1 * tol, 8);
  };
  return integrate(outer, lo, lo + reach, tol, 8) / pdf(x);
}

/// E F(h|X) with X ~ N(0,1) restricted to X < h.
inline double average_over_start(const std::function<double(double)>& given_x, double h,
                                 double reach = 9.0, double tol = 1e-9) {
  const double top = h;
  const double bottom = std::min(h, 0.0) - reach;
  return integrate([&](double x) { return given_x(x) * pdf(x); }, bottom, top, tol, 16);
}

/// Covariance of sum_m c_m W(t + o_m) with the same combination at time 0,
/// computed from Cov(W(a), W(b)) = min(a, b).
inline double wiener_covariance(const std::vector<double>& offsets, const std::vector<double>& coeffs,
                                double t) {
  double cov = 0.0, var = 0.0;
  for (std::size_t m = 0; m < offsets.size(); ++m)
    for (std::size_t n = 0; n < offsets.size(); ++n) {
      cov += coeffs[m] * coeffs[n] * std::min(offsets[m], t + offsets[n]);
      var += coeffs[m] * coeffs[n] * std::min(offsets[m], offsets[n]);
    }
  return cov / var;
}

}  // namespace oracle
