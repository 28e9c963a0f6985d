#pragma once

// Non-crossing probabilities of the Slepian process S(t) over integer
// horizons:
//   F_n(h|x) = Pr{ max_{[0,n]} S(t) < h | S(0) = x },
//   F_n(h)   = E F_n(h|S(0)),  S(0) ~ N(0,1).
// Closed forms for n = 1, 2 and determinant-integral evaluation for n <= 5.

#include <span>

#include "shepp/quadrature.hpp"

namespace shepp {

/// Number of steps n, level h and start value x = S(0) of the determinant
/// representation.
struct DetContext {
  int n;
  double h;
  double x;
};

/// How the n-dimensional determinant integral is evaluated.
///   Reduced: the start value (row 0, unconditional case) and the last
///            value s_n (column n) are integrated analytically, leaving an
///            (n-1)-dimensional tensor integral.
///   Full:    the determinant integrand over all of s_1..s_n (and x for the
///            unconditional probability) is integrated by tensor quadrature.
enum class Method { Reduced, Full };

struct IntegrationConfig {
  /// Gauss-Legendre nodes per axis; 0 selects the default for (n, method).
  int nodes = 0;
  /// Length of the truncated range below min(h, 0).
  double trunc = 8.0;
  Method method = Method::Reduced;
};

/// Lower end of the truncated domain (-inf, h): min(h, 0) - trunc.
double integration_floor(double h, double trunc);

/// Per-axis rule on [integration_floor(h, cfg.trunc), h] for an n-step
/// probability.
QuadratureRule axis_rule(int n, double h, const IntegrationConfig& cfg);

/// Default node count for (n, method).
int default_nodes(int n, Method method);

// Closed forms -------------------------------------------------------------

double F1_given_x(double h, double x);
double F1(double h);

/// F_2(h) through its one-dimensional integral representation.
double F2(double h);

/// Closed-form approximation of F_2(h) built on phi_lin.
double F2_hat(double h);

/// F_2(h|x0) for x0 <= 0 (one-dimensional integral form). Throws
/// std::domain_error for x0 > 0.
double F2_given_x(double h, double x0);

/// Closed-form approximation of F_2(h|x0), x0 <= 0.
double F2_given_x_hat(double h, double x0);

// Determinant representation ----------------------------------------------

/// det[ phi(s_i + a_{ij}) ]_{i,j=0..n} with s_0 = ctx.x and s holding
/// s_1..s_n. Not divided by phi(x).
double det_integrand(const DetContext& ctx, std::span<const double> s);

/// F_n(h|x) by tensor Gauss-Legendre quadrature with `rule` on every axis.
/// Returns 0 for x >= h. Throws std::invalid_argument for n outside 1..5.
double Fn_given_x(int n, double h, double x, const QuadratureRule& rule,
                  Method method = Method::Reduced);
double Fn_given_x(int n, double h, double x, const IntegrationConfig& cfg = {});

/// F_n(h); the Full method adds an outer integral over x with `rule`.
double Fn(int n, double h, const QuadratureRule& rule, Method method = Method::Reduced);
double Fn(int n, double h, const IntegrationConfig& cfg = {});

// Transition kernels -------------------------------------------------------

/// One-step transition density x = S(0) -> z = S(1) restricted to paths below h.
double kernel_p1(double h, double x, double z);

/// Non-normalised density of S(1) on {S < h on [0,1]}; integrates to F_1(h).
double p1_density(double h, double z);

/// Smallest distance below h at which kernel_q accepts its start value.
inline constexpr double kKernelGuard = 1e-8;

/// Transition density S(1) = x -> S(2) = z on {S < h on [0,2]}, with S(0)
/// integrated out. Throws std::domain_error for x >= h - kKernelGuard.
double kernel_q(double h, double x, double z);

}  // namespace shepp
