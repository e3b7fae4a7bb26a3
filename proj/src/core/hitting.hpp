#pragma once

// Verification experiments: finite-window hitting probabilities, the
// second-moment statistic S_n, the upper-bound statistic H_n, box-counting
// slopes, Lemma 2.3 coverage, the Prop 1.4 counting recursions, and the
// Prop 1.3 summability chain.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cantor.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "selection.hpp"

namespace fhl {

/// Monte Carlo agreement: |empirical - oracle| within the larger of the
/// reported radius and the 3 sigma radius under the oracle itself.
bool within_radius(double empirical, double radius, double oracle, std::uint64_t trials);

struct WindowHit {
  int n_lo = 0;
  int n_hi = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double empirical = 0;
  double radius = 0;           // 3 sqrt(p(1-p)/T) at the empirical p
  std::optional<double> oracle;
  double log_miss = 0;         // log P(no hit) under the oracle
  std::vector<Integer> counts;  // N_n for n in the window
  bool agrees = true;
};

/// Event: S_n > 0 for some n in [n_lo, n_hi], with S_n summing Z_n(closure Q)
/// over the half-open cells Q meeting the target. The oracle is
/// 1 - prod (1 - P_n)^N_n for Bernoulli models and 1 - prod (1 - N_n 2^-n)^C_n
/// for point processes.
WindowHit window_hit_probability(const SelectionModel& model, const TargetSet& target, int n_lo, int n_hi,
                                 std::uint64_t trials, const TrialRng& rng);

/// Oracle only: log P(miss) and the hit probability.
std::pair<double, double> window_hit_oracle(const SelectionModel& model, const TargetSet& target, int n_lo,
                                            int n_hi);

struct HitStatistics {
  int level = 0;
  Integer cells = 0;   // N_n
  double p = 0;        // P_n
  double exact_mean = 0;
  double exact_second = 0;
  double exact_var = 0;
  double pz_bound = 0;
  double exact_pos = 0;  // P(S_n > 0)
  std::optional<Rational> exact_mean_q, pz_bound_q, exact_pos_q;
  std::uint64_t trials = 0;
  double empirical_mean = 0;
  double empirical_pos_freq = 0;
  double radius = 0;
  bool pz_holds = true;        // empirical_pos_freq + radius >= pz_bound
  bool pz_exact_holds = true;  // exact_pos >= pz_bound
};

HitStatistics sn_statistics(const SelectionModel& model, const TargetSet& target, int n, std::uint64_t trials,
                            const TrialRng& rng);

struct HnStatistics {
  int level = 0;
  std::uint64_t balls = 0;
  std::uint64_t gamma_total = 0;  // sum over balls of #Gamma_n(B)
  std::uint64_t gamma_max = 0;
  std::uint64_t neighbour_bound = 3;
  double p = 0;
  double expected_h = 0;
  double gamma1_hat = 0;
  double beta_bar = 0;
  double epsilon = 0.05;
  double exponent = 0;   // n (beta_bar - gamma1_hat + 2 eps)
  double constant = 0;   // E H_n / 2^exponent
  bool bound_holds = true;
};

/// E H_n = sum over a minimal cover of G by closed intervals of length 2^-n
/// of P_n * #{Q in Q_n : Q meets B}. When `beta_bar` is empty it is the
/// least-squares box slope of the covering counts over [max(1, n-8), n].
HnStatistics hn_upper_statistic(const SelectionModel& model, const TargetSet& target, int n,
                                std::optional<double> beta_bar = std::nullopt, double epsilon = 0.05);

struct BoxDim {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root mean square of the fit
  std::size_t used = 0;
};

/// Least squares of log2 N_n against n over the non-zero counts.
BoxDim box_dim_estimate(const std::vector<std::pair<int, double>>& counts);

struct Lemma23Result {
  int level = 0;
  std::uint64_t block = 0;  // C_n
  std::uint64_t trials = 0;
  std::uint64_t covered = 0;
  double empirical_coverage = 0;
  double empirical_noncover = 0;
  double radius = 0;
  double bound_paper = 0;   // 2^n (1 - 2^(-n beta - 1))^(2^(n (1 - gamma0)))
  double bound_actual = 0;  // same with exponent C_n
  bool bound_holds = true;  // empirical_noncover <= bound_actual + radius
};

/// Non-coverage bound 2^n (1 - 2^(-n beta - 1))^exponent, evaluated in the
/// log domain.
double lemma23_bound(int n, const Rational& beta, double exponent);

Lemma23Result lemma23_coverage(const Rational& gamma0, const Rational& beta, int n, std::uint64_t trials,
                               const TrialRng& rng);

struct CountingRow {
  std::size_t k = 0;
  std::optional<Integer> f_count;  // #F_k when it fits the bit budget
  std::optional<Integer> g_count;  // #G'_k
  double log2_f = 0;
  double log2_g = 0;
  double ratio_f = 0;  // log2 #F_k / m_k
  double ratio_g = 0;  // log2 #G'_k / M_k
};

struct CountingTrace {
  Rational t;
  std::vector<CountingRow> rows;
  double ratio_f_tail = 0;
  double ratio_g_tail = 0;
};

struct Prop14CountingInput {
  Rational t;
  std::vector<Integer> n;    // n_1..n_K (n_{K+1} is needed too, see below)
  std::vector<Integer> m;    // m_1..m_K
  std::vector<Rational> tm;  // t_{m_k}
};

/// #G'_1 = N_1 = floor(2^(n_1 t)),
/// #F_k = (floor(l_k 2^(m_k t_{m_k})) - 2) #G'_k,
/// #G'_{k+1} = (floor(2^-m_k floor(2^(n_{k+1} t)) / l_k) - 2) #F_k,
/// with l_k = 2^-(n_1 + ... + n_k). Needs K+1 values of n. Counts are kept as
/// exact integers while they fit `max_bits`, then as log2 values.
/// SideConditionViolated unless m_k > (M_k + 1) / t_{m_k} and every factor
/// is at least 1.
CountingTrace prop14_counting(const Prop14CountingInput& input, std::size_t depth,
                              std::uint64_t max_bits = 1u << 20);

/// A schedule meeting the side conditions whose ratios approach 1 - gamma0
/// and t: t_{m_k} = (1 - gamma0)(1 - 2^-(k+3)), m_k = growth * M_k and
/// n_{k+1} = growth * m_k.
Prop14CountingInput conforming_prop14_schedule(const Rational& gamma0, const Rational& t, std::int64_t n1,
                                               std::size_t depth, std::int64_t growth = 30);

struct SummabilityRow {
  std::size_t k = 0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  std::int64_t block_start = 0;   // M_k
  std::int64_t log2_count = 0;    // log2 N_k
  bool exact = false;             // E_k from enumerated cells; otherwise an upper bound
  std::optional<Integer> cells;   // closed level-M_k cubes meeting G_k, when enumerated
  double log2_expected = 0;       // log2 E_k (or of its upper bound)
  double log2_chain = 0;          // log2 (2 n_k N_k l_k 2^(M_k t_k))
  bool chain_holds = true;        // E_k <= chain <= 2^(1-k)
};

struct SummabilityTrace {
  std::vector<SummabilityRow> rows;
  double partial_sum = 0;  // sum of E_k (upper bounds where not exact)
  bool all_hold = true;
};

/// E_k = P_{M_k} #{Q in Q_{M_k} : Q meets G_k}; the blocks between M_{k-1}
/// and M_k carry no points except at n = M_k.
SummabilityTrace prop13_summability(const Prop13Schedule& schedule, std::size_t depth);

}  // namespace fhl
