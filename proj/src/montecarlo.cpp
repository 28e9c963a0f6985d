#include "shepp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <thread>

namespace shepp {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// exp(-a) below this is dropped from the bridge survival factor.
constexpr double kBridgeCutoff = 40.0;

std::string labelled(const char* base, double param) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s(%g)", base, param);
  return buf;
}

int grid_steps(double horizon, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("grid step must be positive");
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
  const double ratio = horizon / step;
  const long long m = std::llround(ratio);
  if (std::abs(ratio - static_cast<double>(m)) > 1e-6)
    throw std::invalid_argument("horizon must be an integer multiple of the grid step");
  return static_cast<int>(m);
}

unsigned resolve_workers(unsigned requested, std::uint64_t reps) {
  unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(reps, 1)));
}

struct PathOutcome {
  bool prefix = false;
  bool full = false;
};

// Survival of one path up to prefix_steps and up to the sampler's horizon.
// A single uniform decides both events through the running bridge survival
// probability, so the full-horizon survival implies the prefix survival.
PathOutcome run_path(PathSampler& sampler, ReplicationRng& rng, double h, int prefix_steps,
                     bool bridge) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  sampler.begin(rng);
  const double step = sampler.step();
  double survival = 1.0;
  double prev = 0.0;
  for (int k = 0; k <= sampler.steps(); ++k) {
    const double x = sampler.next(rng);
    bool crossed = x >= h;
    if (!crossed && bridge && k > 0) {
      const double a = (h - prev) * (h - x) / step;
      if (a < kBridgeCutoff) survival *= -std::expm1(-a);
      crossed = survival <= u;
    }
    if (crossed) return {k > prefix_steps, false};
    prev = x;
  }
  return {true, true};
}

void validate(const McConfig& cfg) {
  if (!(cfg.step > 0.0)) throw std::invalid_argument("McConfig: step must be positive");
  if (cfg.reps < 1) throw std::invalid_argument("McConfig: reps must be at least 1");
}

// Counts of prefix and full-horizon survivals over replications [0, reps).
std::pair<std::uint64_t, std::uint64_t> count_survivals(const ProcessSpec& spec, const McConfig& cfg,
                                                        double horizon, int prefix_steps) {
  const PathSampler prototype(spec, cfg.step, horizon);
  const unsigned workers = resolve_workers(cfg.workers, cfg.reps);
  std::vector<std::uint64_t> prefix(workers, 0), full(workers, 0);

  auto work = [&](unsigned w) {
    PathSampler sampler = prototype;
    const std::uint64_t begin = cfg.reps * w / workers;
    const std::uint64_t end = cfg.reps * (w + 1) / workers;
    for (std::uint64_t r = begin; r < end; ++r) {
      ReplicationRng rng = ReplicationRng::stream(cfg.seed, r);
      const PathOutcome o = run_path(sampler, rng, cfg.h, prefix_steps, cfg.bridge);
      prefix[w] += o.prefix;
      full[w] += o.full;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::uint64_t p = 0, f = 0;
  for (unsigned w = 0; w < workers; ++w) {
    p += prefix[w];
    f += full[w];
  }
  return {p, f};
}

McEstimate make_estimate(std::uint64_t successes, std::uint64_t reps) {
  McEstimate e;
  e.reps = reps;
  e.p_hat = static_cast<double>(successes) / static_cast<double>(reps);
  e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(reps));
  return e;
}

}  // namespace

// ProcessSpec ---------------------------------------------------------------

ProcessSpec ProcessSpec::broken_a(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("BrokenA: a must be positive");
  return ProcessSpec(ProcessKind::BrokenA, a);
}

ProcessSpec ProcessSpec::broken_c(double c) {
  if (!(c >= 1.0) || !std::isfinite(c)) throw std::invalid_argument("BrokenC: c must be >= 1");
  return ProcessSpec(ProcessKind::BrokenC, c);
}

double ProcessSpec::alpha() const {
  if (kind_ != ProcessKind::BrokenA) throw std::logic_error("alpha is defined for BrokenA only");
  const double a = param_;
  return (1.0 + a + a * a) / (2.0 + 2.0 * a + a * a);
}

double ProcessSpec::beta() const {
  if (kind_ != ProcessKind::BrokenC) throw std::logic_error("beta is defined for BrokenC only");
  return 1.0 / (param_ + 2.0);
}

double ProcessSpec::span() const {
  switch (kind_) {
    case ProcessKind::Slepian:
    case ProcessKind::BrokenC:
      return 1.0;
    case ProcessKind::BrokenA:
      return 2.0 * alpha();
    case ProcessKind::OrnsteinUhlenbeck:
      return 0.0;
  }
  return 0.0;
}

std::string ProcessSpec::name() const {
  switch (kind_) {
    case ProcessKind::Slepian:
      return "slepian";
    case ProcessKind::OrnsteinUhlenbeck:
      return "ou";
    case ProcessKind::BrokenA:
      return labelled("broken-a", param_);
    case ProcessKind::BrokenC:
      return labelled("broken-c", param_);
  }
  return "";
}

double rho(const ProcessSpec& spec, double t) {
  const double s = std::abs(t);
  switch (spec.kind()) {
    case ProcessKind::Slepian:
      return std::max(0.0, 1.0 - s);
    case ProcessKind::OrnsteinUhlenbeck:
      return std::exp(-s);
    case ProcessKind::BrokenA: {
      const double a = spec.param();
      const double al = spec.alpha();
      if (s <= al) return 1.0 - s;
      if (s <= 2.0 * al) return (1.0 + a) * (2.0 * al - s) / (1.0 + a + a * a);
      return 0.0;
    }
    case ProcessKind::BrokenC: {
      const double c = spec.param();
      const double b = spec.beta();
      const double norm = 1.0 + c * c;
      if (s <= b) return 1.0 - s;
      if (s <= c * b) return (1.0 + c) * (1.0 + c * c * b - s * (1.0 + c)) / norm;
      if (s <= (c + 1.0) * b) return (1.0 + c + c * c * b - s * (1.0 + 2.0 * c)) / norm;
      if (s <= 1.0) return (1.0 - s) / norm;
      return 0.0;
    }
  }
  return 0.0;
}

WienerCombination wiener_combination(const ProcessSpec& spec) {
  switch (spec.kind()) {
    case ProcessKind::Slepian:
      return {{0.0, 1.0}, {-1.0, 1.0}};
    case ProcessKind::OrnsteinUhlenbeck:
      return {};
    case ProcessKind::BrokenA: {
      const double a = spec.param();
      const double al = spec.alpha();
      const double n = 1.0 / std::sqrt(1.0 + a + a * a);
      return {{0.0, al, 2.0 * al}, {-n, -a * n, (1.0 + a) * n}};
    }
    case ProcessKind::BrokenC: {
      const double c = spec.param();
      const double b = spec.beta();
      const double n = 1.0 / std::sqrt(1.0 + c * c);
      return {{0.0, b, (c + 1.0) * b, 1.0}, {-n, -c * n, c * n, n}};
    }
  }
  return {};
}

// ReplicationRng --------------------------------------------------------------

ReplicationRng::ReplicationRng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

ReplicationRng ReplicationRng::stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t sm = index;
  return ReplicationRng(seed ^ splitmix64(sm));
}

ReplicationRng::result_type ReplicationRng::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

// PathSampler -----------------------------------------------------------------

PathSampler::PathSampler(const ProcessSpec& spec, double step, double horizon)
    : spec_(spec), step_(step), steps_(grid_steps(horizon, step)) {
  if (spec.kind() == ProcessKind::OrnsteinUhlenbeck) {
    ou_decay_ = std::exp(-step);
    ou_noise_ = std::sqrt(-std::expm1(-2.0 * step));
    return;
  }
  const WienerCombination comb = wiener_combination(spec);
  coeffs_ = comb.coeffs;
  const double tol = 1e-9 * step;

  std::vector<double> all;
  all.reserve((steps_ + 1) * comb.offsets.size());
  for (int k = 0; k <= steps_; ++k)
    for (double o : comb.offsets) all.push_back(k * step + o);
  std::sort(all.begin(), all.end());
  for (double t : all)
    if (times_.empty() || t - times_.back() > tol) times_.push_back(t);

  root_dt_.resize(times_.size());
  root_dt_[0] = std::sqrt(times_[0]);
  for (std::size_t p = 1; p < times_.size(); ++p) root_dt_[p] = std::sqrt(times_[p] - times_[p - 1]);

  index_.assign(steps_ + 1, std::vector<int>(comb.offsets.size()));
  for (int k = 0; k <= steps_; ++k) {
    for (std::size_t m = 0; m < comb.offsets.size(); ++m) {
      const double t = k * step + comb.offsets[m];
      auto it = std::lower_bound(times_.begin(), times_.end(), t - tol);
      index_[k][m] = static_cast<int>(it - times_.begin());
    }
  }
  w_.resize(times_.size());
}

void PathSampler::begin(ReplicationRng&) {
  generated_ = 0;
  k_ = 0;
  prev_ = 0.0;
  normal_.reset();
}

double PathSampler::next(ReplicationRng& rng) {
  if (k_ > steps_) throw std::out_of_range("PathSampler: path already complete");
  if (spec_.kind() == ProcessKind::OrnsteinUhlenbeck) {
    const double z = normal_(rng);
    prev_ = (k_ == 0) ? z : ou_decay_ * prev_ + ou_noise_ * z;
    ++k_;
    return prev_;
  }
  const std::vector<int>& idx = index_[k_];
  const int need = *std::max_element(idx.begin(), idx.end());
  while (generated_ <= need) {
    const double base = generated_ == 0 ? 0.0 : w_[generated_ - 1];
    w_[generated_] = base + root_dt_[generated_] * normal_(rng);
    ++generated_;
  }
  double x = 0.0;
  for (std::size_t m = 0; m < idx.size(); ++m) x += coeffs_[m] * w_[idx[m]];
  ++k_;
  return x;
}

std::vector<double> PathSampler::sample(ReplicationRng& rng) {
  begin(rng);
  std::vector<double> out(steps_ + 1);
  for (auto& x : out) x = next(rng);
  return out;
}

// Estimators ------------------------------------------------------------------

bool simulate_max_indicator(const ProcessSpec& spec, const McConfig& cfg, ReplicationRng& rng) {
  validate(cfg);
  PathSampler sampler(spec, cfg.step, cfg.T);
  return run_path(sampler, rng, cfg.h, sampler.steps(), cfg.bridge).full;
}

McEstimate estimate_F(const ProcessSpec& spec, const McConfig& cfg) {
  validate(cfg);
  const int steps = grid_steps(cfg.T, cfg.step);
  const auto counts = count_survivals(spec, cfg, cfg.T, steps);
  return make_estimate(counts.second, cfg.reps);
}

LambdaEstimate estimate_Lambda(const ProcessSpec& spec, double h, int j, const McConfig& cfg) {
  if (j < 2) throw std::invalid_argument("estimate_Lambda: j must be at least 2");
  McConfig c = cfg;
  c.h = h;
  c.T = j;
  validate(c);
  const int prefix_steps = grid_steps(j - 1.0, c.step);
  const auto [prev, curr] = count_survivals(spec, c, c.T, prefix_steps);
  if (prev == 0 || curr == 0)
    throw std::runtime_error("estimate_Lambda: no surviving paths at h=" + std::to_string(h) +
                             "; increase reps");
  LambdaEstimate e;
  e.previous = make_estimate(prev, c.reps);
  e.current = make_estimate(curr, c.reps);
  const double ratio = static_cast<double>(curr) / static_cast<double>(prev);
  e.Lambda = -std::log(ratio);
  e.std_error = std::sqrt(ratio * (1.0 - ratio) / static_cast<double>(prev)) / ratio;
  return e;
}

std::vector<CorrelationEstimate> empirical_correlation(const ProcessSpec& spec,
                                                       const std::vector<double>& lags,
                                                       std::uint64_t paths, double step,
                                                       std::uint64_t seed) {
  if (paths < 3) throw std::invalid_argument("empirical_correlation: need at least 3 paths");
  std::vector<int> lag_steps;
  for (double lag : lags) lag_steps.push_back(static_cast<int>(std::llround(std::abs(lag) / step)));
  const int max_steps = lag_steps.empty() ? 0 : *std::max_element(lag_steps.begin(), lag_steps.end());
  PathSampler sampler(spec, step, max_steps * step);

  const std::size_t L = lags.size();
  double s0 = 0.0, s00 = 0.0;
  std::vector<double> s1(L, 0.0), s11(L, 0.0), s01(L, 0.0);
  for (std::uint64_t p = 0; p < paths; ++p) {
    ReplicationRng rng = ReplicationRng::stream(seed, p);
    const std::vector<double> x = sampler.sample(rng);
    s0 += x[0];
    s00 += x[0] * x[0];
    for (std::size_t i = 0; i < L; ++i) {
      const double y = x[lag_steps[i]];
      s1[i] += y;
      s11[i] += y * y;
      s01[i] += x[0] * y;
    }
  }
  const double n = static_cast<double>(paths);
  std::vector<CorrelationEstimate> out;
  for (std::size_t i = 0; i < L; ++i) {
    const double cov = s01[i] / n - (s0 / n) * (s1[i] / n);
    const double v0 = s00 / n - (s0 / n) * (s0 / n);
    const double v1 = s11[i] / n - (s1[i] / n) * (s1[i] / n);
    const double r = cov / std::sqrt(v0 * v1);
    out.push_back({lag_steps[i] * step, r, (1.0 - r * r) / std::sqrt(n - 1.0)});
  }
  return out;
}

}  // namespace shepp
