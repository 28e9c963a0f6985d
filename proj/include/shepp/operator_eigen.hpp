#pragma once

// Nystrom discretisation of the one- and two-step transition kernels and
// extraction of their Perron root by power iteration.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shepp/quadrature.hpp"

namespace shepp {

enum class KernelId { OneStep, TwoStepConditional };

/// K(x -> z) for the given kernel at level h.
double kernel_value(KernelId kernel, double h, double x, double z);

/// M = D^{1/2} A D^{1/2} with A_ij = K(x_i -> x_j) and D = diag(w_i).
struct DiscretizedOperator {
  std::vector<double> matrix;  // row-major, dim x dim
  std::size_t dim = 0;
  QuadratureRule rule;
  std::optional<KernelId> kernel;  // empty for user-supplied kernels

  double operator()(std::size_t i, std::size_t j) const { return matrix[i * dim + j]; }
};

DiscretizedOperator discretize(KernelId kernel, double h, const QuadratureRule& rule);
DiscretizedOperator discretize(const std::function<double(double, double)>& kernel,
                               const QuadratureRule& rule);

struct PowerIterationOptions {
  double tolerance = 1e-13;
  int max_iterations = 10000;
};

struct EigenResult {
  double eigenvalue = 0.0;
  /// Eigenfunction at the rule's nodes, normalised so that sum w_i q_i = 1.
  std::vector<double> density;
  int iterations = 0;
  /// ||M^T u - lambda u||_inf / ||u||_inf at exit.
  double residual = 0.0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(int iterations, double last_change)
      : std::runtime_error("power iteration did not converge after " + std::to_string(iterations) +
                           " iterations (last change " + std::to_string(last_change) + ")"),
        iterations_(iterations),
        last_change_(last_change) {}
  int iterations() const { return iterations_; }
  double last_change() const { return last_change_; }

 private:
  int iterations_;
  double last_change_;
};

/// Dominant eigenpair of lambda q(z) = int q(x) K(x -> z) dx. Works on the
/// transpose of M, starting from the all-ones vector.
EigenResult dominant_eigen(const DiscretizedOperator& op, const PowerIterationOptions& opts = {});
EigenResult dominant_eigen(KernelId kernel, double h, const QuadratureRule& rule,
                           const PowerIterationOptions& opts = {});

/// Same eigenvalue computed from the non-symmetrised matrix A D; used to
/// cross-check the similarity transform.
double dominant_eigenvalue_AD(const DiscretizedOperator& op, const PowerIterationOptions& opts = {});

/// Rule on [min(h,0) - trunc, h] used for the eigenvalue problems.
QuadratureRule nystrom_rule(double h, int nodes = 300, double trunc = 8.0);

/// Closed-form approximation of the one-step Perron root, h >= 0. At h = 0
/// the formula's removable singularity is replaced by its limit 1/4.
double lambda1_closed(double h);

}  // namespace shepp
