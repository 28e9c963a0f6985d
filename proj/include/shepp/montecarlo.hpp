#pragma once

// Path simulation of the Slepian process and three comparison stationary
// Gaussian processes with unit variance and rho'(0+) = -1:
//   OrnsteinUhlenbeck  rho(t) = exp(-|t|)
//   BrokenA(a)         broken-line process built from W(t), W(t+alpha), W(t+2 alpha)
//   BrokenC(c)         broken-line process built from W(t), W(t+beta), W(t+(c+1)beta), W(t+1)

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace shepp {

enum class ProcessKind { Slepian, OrnsteinUhlenbeck, BrokenA, BrokenC };

class ProcessSpec {
 public:
  static ProcessSpec slepian() { return ProcessSpec(ProcessKind::Slepian, 0.0); }
  static ProcessSpec ornstein_uhlenbeck() { return ProcessSpec(ProcessKind::OrnsteinUhlenbeck, 0.0); }
  /// a > 0
  static ProcessSpec broken_a(double a);
  /// c >= 1
  static ProcessSpec broken_c(double c);

  ProcessKind kind() const { return kind_; }
  double param() const { return param_; }
  /// (1+a+a^2)/(2+2a+a^2); BrokenA only.
  double alpha() const;
  /// 1/(c+2); BrokenC only.
  double beta() const;
  /// Look-ahead of the Wiener representation beyond t (0 for OU).
  double span() const;
  std::string name() const;

 private:
  ProcessSpec(ProcessKind kind, double param) : kind_(kind), param_(param) {}
  ProcessKind kind_;
  double param_;
};

/// Correlation function of the process at lag t.
double rho(const ProcessSpec& spec, double t);

/// X(t) = sum_m coeffs[m] W(t + offsets[m]); empty for OU.
struct WienerCombination {
  std::vector<double> offsets;
  std::vector<double> coeffs;
};
WienerCombination wiener_combination(const ProcessSpec& spec);

/// xoshiro256** seeded through SplitMix64. stream(seed, index) gives the
/// independent generator of replication `index`.
class ReplicationRng {
 public:
  using result_type = std::uint64_t;
  explicit ReplicationRng(std::uint64_t seed);
  static ReplicationRng stream(std::uint64_t seed, std::uint64_t index);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t s_[4];
};

/// Generates the process on the grid t_k = k * step, k = 0..steps. Wiener
/// values are produced lazily in time order, so a caller that stops early
/// consumes a prefix of the same random stream.
class PathSampler {
 public:
  PathSampler(const ProcessSpec& spec, double step, double horizon);

  int steps() const { return steps_; }
  double step() const { return step_; }

  /// Starts a new path; values are then read with next().
  void begin(ReplicationRng& rng);
  /// Value at the next grid point.
  double next(ReplicationRng& rng);

  /// Whole path in one call.
  std::vector<double> sample(ReplicationRng& rng);

 private:
  ProcessSpec spec_;
  double step_;
  int steps_;
  // Wiener representation on the merged grid of all t_k + offsets.
  std::vector<double> times_;
  std::vector<double> root_dt_;
  std::vector<std::vector<int>> index_;  // index_[k][m] into times_
  std::vector<double> coeffs_;
  std::vector<double> w_;
  std::normal_distribution<double> normal_;
  int generated_ = 0;
  int k_ = 0;
  double prev_ = 0.0;  // OU state
  double ou_decay_ = 0.0;
  double ou_noise_ = 0.0;
};

struct McConfig {
  double T = 1.0;
  double h = 0.0;
  double step = 0.01;
  std::uint64_t reps = 100000;
  std::uint64_t seed = 1;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
  /// Brownian-bridge crossing test between grid points. With false only the
  /// grid values are compared with h.
  bool bridge = true;
};

struct McEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::uint64_t reps = 0;
};

/// One replication: true iff the path stays below cfg.h on [0, cfg.T].
bool simulate_max_indicator(const ProcessSpec& spec, const McConfig& cfg, ReplicationRng& rng);

/// Fraction of cfg.reps independent replications that stay below h.
/// Deterministic for fixed (seed, reps, step), whatever the worker count.
McEstimate estimate_F(const ProcessSpec& spec, const McConfig& cfg);

struct LambdaEstimate {
  double Lambda = 0.0;
  double std_error = 0.0;
  McEstimate previous;  // horizon j-1
  McEstimate current;   // horizon j
};

/// -log(F_j / F_{j-1}) from paired paths: every path of length j also
/// decides the horizon j-1 event. cfg.T and cfg.h are ignored.
LambdaEstimate estimate_Lambda(const ProcessSpec& spec, double h, int j, const McConfig& cfg);

struct CorrelationEstimate {
  double lag = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

/// Sample correlation of X(0) and X(lag) over `paths` independent paths.
/// Lags are rounded to the grid of spacing `step`.
std::vector<CorrelationEstimate> empirical_correlation(const ProcessSpec& spec,
                                                       const std::vector<double>& lags,
                                                       std::uint64_t paths, double step,
                                                       std::uint64_t seed);

}  // namespace shepp
