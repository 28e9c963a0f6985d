#include "shepp/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace shepp {

namespace {

// Above this exponent exp(y^2/(4x)) is recombined with log Phi instead of
// multiplied directly.
constexpr double kMaxDirectExponent = 700.0;

void check_kuv(const KuvArgs& a) {
  if (!(a.x > 0.0) || !std::isfinite(a.x))
    throw std::invalid_argument("K/U/J/V: quadratic coefficient x must be positive and finite");
  if (!std::isfinite(a.y))
    throw std::invalid_argument("K/U/J/V: linear coefficient y must be finite");
  if (std::isnan(a.z) || a.z == -kInf)
    throw std::invalid_argument("K/U/J/V: upper limit z must be finite or +inf");
}

}  // namespace

double phi(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double Phi(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double log_Phi(double x) {
  if (x > -20.0) return std::log(Phi(x));
  // Mills ratio asymptotic series; at |x| >= 20 the truncation error is below
  // 945/20^10.
  const double r = 1.0 / (x * x);
  const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r)));
  return -0.5 * x * x - std::log(kSqrt2Pi) - std::log(-x) + std::log(series);
}

double phi_lin(double t) {
  if (t <= 0.0) return 0.5 * std::exp(0.717 * t - 0.416 * t * t);
  return 1.0 - 0.5 * std::exp(-0.717 * t - 0.416 * t * t);
}

double x_h(double h) {
  if (h > -20.0) return -phi(h) / Phi(h);
  return -std::exp(-0.5 * h * h - std::log(kSqrt2Pi) - log_Phi(h));
}

double K(const KuvArgs& a) {
  check_kuv(a);
  const double expo = a.y * a.y / (4.0 * a.x);
  const double log_scale = 0.5 * std::log(kPi) - 0.5 * std::log(a.x);
  if (a.z == kInf) return std::exp(log_scale + expo);
  const double arg = (2.0 * a.x * a.z - a.y) / std::sqrt(2.0 * a.x);
  if (expo > kMaxDirectExponent) return std::exp(log_scale + expo + log_Phi(arg));
  return std::exp(log_scale) * std::exp(expo) * Phi(arg);
}

double U(const KuvArgs& a) {
  const double k = K(a);
  const double boundary = (a.z == kInf) ? 0.0 : std::exp(a.z * (a.y - a.x * a.z));
  return (a.y * k - boundary) / (2.0 * a.x);
}

double J(const KuvArgs& a) { return K(a) - K({a.x, a.y, 0.0}); }

double V(const KuvArgs& a) { return U(a) - U({a.x, a.y, 0.0}); }

}  // namespace shepp
