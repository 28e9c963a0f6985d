#pragma once

// Standard normal density/CDF and the Gaussian integrals used by
// the closed-form approximations of the non-crossing probabilities.

#include <limits>

namespace shepp {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Standard normal density.
double phi(double x);

/// Standard normal CDF, accurate to double precision through erfc.
/// Accepts +/-infinity.
double Phi(double x);

/// log(Phi(x)), finite for arbitrarily negative x.
double log_Phi(double x);

/// Lin's two-branch exponential approximation of Phi. Only the hat
/// closed forms (F2_hat and friends) use it; everything else uses Phi.
double phi_lin(double x);

/// Mean of N(0,1) truncated to (-inf, h]: -phi(h)/Phi(h).
double x_h(double h);

/// Arguments of the Gaussian-exponential integrals K, U, J, V.
///   K(x,y,z) = int_{-inf}^{z} exp(-x t^2 + y t) dt
///   U(x,y,z) = int_{-inf}^{z} t exp(-x t^2 + y t) dt
/// z may be +infinity. x must be positive.
struct KuvArgs {
  double x;
  double y;
  double z;
};

double K(const KuvArgs& a);
double U(const KuvArgs& a);
/// K(x,y,z) - K(x,y,0)
double J(const KuvArgs& a);
/// U(x,y,z) - U(x,y,0)
double V(const KuvArgs& a);

}  // namespace shepp
