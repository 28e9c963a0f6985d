#include "shepp/approximations.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "shepp/gaussian.hpp"
#include "shepp/operator_eigen.hpp"

namespace shepp {

ApproximationError::ApproximationError(ApproximationId id, double h, const std::string& what)
    : std::runtime_error(to_string(id) + " at h=" + std::to_string(h) + ": " + what), id_(id), h_(h) {}

std::string to_string(ApproximationId id) { return "A" + std::to_string(index_of(id)); }

int index_of(ApproximationId id) { return static_cast<int>(id); }

ApproximationId approximation_at(int index) {
  if (index < 0 || index >= kApproximationCount)
    throw std::out_of_range("approximation index out of range: " + std::to_string(index));
  return static_cast<ApproximationId>(index);
}

std::optional<ApproximationId> parse_approximation(std::string_view text) {
  if (text.size() != 2 || std::toupper(static_cast<unsigned char>(text[0])) != 'A') return std::nullopt;
  const int d = text[1] - '0';
  if (d < 0 || d >= kApproximationCount) return std::nullopt;
  return approximation_at(d);
}

int anchor_order(ApproximationId id) {
  switch (id) {
    case ApproximationId::A0:
      return 0;
    case ApproximationId::A1:
      return 1;
    case ApproximationId::A2:
    case ApproximationId::A3:
    case ApproximationId::A4:
    case ApproximationId::A5:
      return 2;
    case ApproximationId::A6:
      return 3;
    case ApproximationId::A7:
      return 4;
    case ApproximationId::A8:
      return 5;
  }
  return 0;
}

namespace {

double ratio_lambda(ApproximationId id, double h, const ApproxOptions& opts, ResultMeta& meta) {
  const IntegrationConfig& cfg = opts.integration;
  auto tensor_meta = [&](int n) {
    meta.nodes = cfg.nodes > 0 ? cfg.nodes : default_nodes(n, cfg.method);
    meta.trunc = cfg.trunc;
  };
  const double xh = x_h(h);
  switch (id) {
    case ApproximationId::A0:
      return std::exp(-h * phi(h));
    case ApproximationId::A1:
      return lambda1_closed(h);
    case ApproximationId::A2:
      meta.nodes = opts.eigen_nodes;
      meta.trunc = opts.eigen_trunc;
      return dominant_eigen(KernelId::TwoStepConditional, h,
                            nystrom_rule(h, opts.eigen_nodes, opts.eigen_trunc))
          .eigenvalue;
    case ApproximationId::A3:
      return F2_given_x(h, xh) / F1_given_x(h, xh);
    case ApproximationId::A4:
      return F2(h) / F1(h);
    case ApproximationId::A5:
      tensor_meta(3);
      return Fn_given_x(3, h, xh, cfg) / Fn_given_x(2, h, xh, cfg);
    case ApproximationId::A6:
      tensor_meta(4);
      return Fn_given_x(4, h, xh, cfg) / Fn_given_x(3, h, xh, cfg);
    case ApproximationId::A7:
      tensor_meta(4);
      return Fn(4, h, cfg) / Fn(3, h, cfg);
    case ApproximationId::A8:
      if (!opts.allow_expensive)
        throw std::invalid_argument("A8 requires F_5 and must be enabled explicitly (expensive)");
      tensor_meta(5);
      return Fn(5, h, cfg) / Fn(4, h, cfg);
  }
  return 1.0;
}

double prefix_probability(int k, double h, const ApproxOptions& opts) {
  switch (k) {
    case 0:
      return 1.0;
    case 1:
      return F1(h);
    case 2:
      return F2(h);
    default:
      return Fn(k, h, opts.integration);
  }
}

}  // namespace

SheppResult lambda_approx(ApproximationId id, double h, const ApproxOptions& opts) {
  if (!(h >= 0.0) || !std::isfinite(h))
    throw std::invalid_argument("approximations are defined for finite h >= 0");
  SheppResult r;
  r.h = h;
  r.id = id;
  double lambda;
  try {
    lambda = ratio_lambda(id, h, opts, r.meta);
  } catch (const ApproximationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ApproximationError(id, h, e.what());
  }
  if (!std::isfinite(lambda) || !(lambda > 0.0))
    throw ApproximationError(id, h, "non-finite or nonpositive ratio " + std::to_string(lambda));
  r.lambda = lambda;
  r.Lambda = -std::log(lambda);
  return r;
}

double Lambda_approx(ApproximationId id, double h, const ApproxOptions& opts) {
  return lambda_approx(id, h, opts).Lambda;
}

double F_T_approx(ApproximationId id, double T, double h, const ApproxOptions& opts) {
  const int k = anchor_order(id);
  if (!(T >= k))
    throw std::invalid_argument(to_string(id) + " needs T >= " + std::to_string(k));
  if (id == ApproximationId::A0) return std::exp(-h * phi(h) * T);
  const double lambda = lambda_approx(id, h, opts).lambda;
  double prefix;
  try {
    prefix = prefix_probability(k, h, opts);
  } catch (const std::exception& e) {
    throw ApproximationError(id, h, e.what());
  }
  return prefix * std::pow(lambda, T - k);
}

BoundsResult bounds(int n, double h, const IntegrationConfig& cfg) {
  if (n < 1 || n > 4) throw std::invalid_argument("bounds: n must lie in 1..4");
  const double f = n == 1 ? F1(h) : Fn(n, h, cfg);
  const double log_f = -std::log(f);
  return {n, h, log_f / (n + 1), log_f / n};
}

RelativeErrorTable relative_errors(const std::vector<double>& grid, const ApproxOptions& opts) {
  RelativeErrorTable t;
  t.grid = grid;
  t.lambda.assign(8, std::vector<double>(grid.size()));
  t.rel.assign(7, std::vector<double>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (int i = 0; i <= 7; ++i) t.lambda[i][k] = lambda_approx(approximation_at(i), grid[k], opts).lambda;
    for (int i = 0; i < 7; ++i) t.rel[i][k] = t.lambda[i][k] / t.lambda[7][k] - 1.0;
  }
  return t;
}

double asympt_F1(double h) { return 1.0 - (h + 2.0 / h) * phi(h); }

double asympt_F2(double h) { return 1.0 - (2.0 * h - 4.0 - 2.0 / h) * phi(h); }

double asympt_Lambda4(double h) { return (h - 4.0 - 4.0 / h) * phi(h); }

}  // namespace shepp
