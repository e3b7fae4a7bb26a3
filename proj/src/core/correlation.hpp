#pragma once

// Covariances of selection indicators, the pair-count function f(n, eps),
// and tail estimates of the Correlation Condition exponent delta.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grid.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "selection.hpp"

namespace fhl {

struct CovEstimate {
  int level = 0;
  std::uint64_t a = 0;  // linear cube indices
  std::uint64_t b = 0;
  double value = 0;
  std::optional<Rational> exact;  // present for exact sources when rational
  bool monte_carlo = false;
  std::uint64_t trials = 0;
  double radius = 0;

  std::string source() const { return monte_carlo ? "monte_carlo" : "exact"; }
};

/// P(Z(a) = 1, Z(b) = 1) for one point-process level with `count` points:
/// 1 - 2(1-p)^C + (1 - |a u b|)^C with p = 2^-n.
double pp_joint(int n, std::uint64_t count, bool same_cube);
std::optional<Rational> pp_joint_exact(int n, std::uint64_t count, bool same_cube);

/// Exact Cov(Z_n(a), Z_n(b)) for a point-process model (d = 1).
CovEstimate exact_pp_cov(const PointProcessSpec& spec, int n, const Cube& a, const Cube& b);
/// Same with an explicit block count.
CovEstimate exact_pp_cov_count(int n, std::uint64_t count, std::uint64_t a, std::uint64_t b);

/// Sample covariances over `trials` independent level selections, radius
/// 3 sd / sqrt(T) from the per-trial products (Z_a - mean)(Z_b - mean).
std::vector<CovEstimate> empirical_cov(const SelectionModel& model, int n,
                                       const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                                       std::uint64_t trials, const TrialRng& rng);

struct SignSweep {
  int max_level = 0;
  std::uint64_t max_count = 0;
  std::uint64_t configurations = 0;
  bool all_negative = true;
  int first_failure_level = 0;
  std::uint64_t first_failure_count = 0;
};

/// Checks Cov < 0 for distinct cubes at every n in [1, max_level] and
/// C in [1, max_count] by exact integer comparison of
/// ((2^n - 2) 2^n)^C against ((2^n - 1)^2)^C.
SignSweep pp_cov_sign_sweep(int max_level, std::uint64_t max_count);

struct LevelF {
  int level = 0;
  Integer f = 0;
  double log2f_over_n = 0;
  std::string source;  // "exact" or "monte_carlo"
};

struct CorrelationReport {
  Rational epsilon;
  std::size_t window = 0;
  std::vector<LevelF> levels;
  double delta_est = 0;  // max of log2 f / n over the last `window` levels
};

/// f(n, eps) = max_Q #{Q' : Cov(Z(Q), Z(Q')) >= eps P(Q) P(Q')} for every n in
/// [n_lo, n_hi], using the fact that both models only distinguish the self
/// pair from distinct pairs. Ties count. Window 0 means the last half.
CorrelationReport f_and_delta(const SelectionModel& model, int n_lo, int n_hi, const Rational& epsilon,
                              std::size_t window = 0);

/// Monte Carlo variant: covariances of the self, adjacent and separated pair
/// classes are estimated from `trials` selections. InsufficientPrecision when
/// a confidence interval straddles the threshold.
CorrelationReport f_and_delta_empirical(const SelectionModel& model, int n_lo, int n_hi, const Rational& epsilon,
                                        std::uint64_t trials, const TrialRng& rng, std::size_t window = 0);

}  // namespace fhl
