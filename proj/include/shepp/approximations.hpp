#pragma once

// Registry of approximations A0..A8 of lambda(h) = exp(-Lambda(h)) and of
// F_T(h), the two-sided bounds on Lambda(h), and large-h expansions.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "shepp/exact.hpp"

namespace shepp {

enum class ApproximationId { A0, A1, A2, A3, A4, A5, A6, A7, A8 };

inline constexpr int kApproximationCount = 9;

std::string to_string(ApproximationId id);
/// Parses "A0".."A8" (case-insensitive). Returns nullopt otherwise.
std::optional<ApproximationId> parse_approximation(std::string_view text);
int index_of(ApproximationId id);
ApproximationId approximation_at(int index);

/// Horizon k of the prefix probability F_k used by F_T_approx.
int anchor_order(ApproximationId id);

struct ApproxOptions {
  IntegrationConfig integration{};
  int eigen_nodes = 300;
  double eigen_trunc = 8.0;
  /// A8 needs F_5; it is refused unless explicitly enabled.
  bool allow_expensive = false;
};

struct ResultMeta {
  int nodes = 0;  // per-axis tensor nodes or Nystrom nodes; 0 when unused
  double trunc = 0.0;
};

struct SheppResult {
  double h = 0.0;
  ApproximationId id = ApproximationId::A0;
  double lambda = 1.0;
  double Lambda = 0.0;
  ResultMeta meta;
};

struct BoundsResult {
  int n = 0;
  double h = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Computation failure annotated with the approximation and level.
class ApproximationError : public std::runtime_error {
 public:
  ApproximationError(ApproximationId id, double h, const std::string& what);
  ApproximationId id() const { return id_; }
  double h() const { return h_; }

 private:
  ApproximationId id_;
  double h_;
};

SheppResult lambda_approx(ApproximationId id, double h, const ApproxOptions& opts = {});
double Lambda_approx(ApproximationId id, double h, const ApproxOptions& opts = {});

/// F_k(h) lambda^(id)(h)^(T-k) with k = anchor_order(id); A0 is
/// exp(-h phi(h) T). T need not be an integer. Throws std::invalid_argument
/// for T < k.
double F_T_approx(ApproximationId id, double T, double h, const ApproxOptions& opts = {});

/// -log F_n / (n+1) <= Lambda <= -log F_n / n, n in 1..4.
BoundsResult bounds(int n, double h, const IntegrationConfig& cfg = {});

/// lambda^(i)(h) / lambda^(7)(h) - 1 for i = 0..6 (rows) over `grid` (columns).
struct RelativeErrorTable {
  std::vector<double> grid;
  std::vector<std::vector<double>> rel;   // rel[i][k]
  std::vector<std::vector<double>> lambda;  // lambda[i][k], i = 0..7
};
RelativeErrorTable relative_errors(const std::vector<double>& grid, const ApproxOptions& opts = {});

/// Large-h expansions without their remainder terms (h > 0).
double asympt_F1(double h);
double asympt_F2(double h);
double asympt_Lambda4(double h);

}  // namespace shepp
