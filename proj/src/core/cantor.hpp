#pragma once

// Homogeneous Cantor sets on [0,1]: generation schedules (uniform, Prop 1.3
// tuned, Prop 1.4 floor-ary), exact interval levels, FWW dimension
// sequences, and target-set oracles for dyadic intersection and counting.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grid.hpp"
#include "numeric.hpp"

namespace fhl {

/// One generation: every parent interval holds `count` children, each of
/// length `ratio` times the parent length. Children sit first flush left,
/// last flush right, equal gaps in between.
struct Generation {
  ScaledInt count;
  ScaledRational ratio;
};

class CantorSchedule {
 public:
  CantorSchedule() = default;
  /// DegenerateGeneration unless every count >= 2 and count * ratio <= 1.
  explicit CantorSchedule(std::vector<Generation> generations, std::string label = "custom");

  std::size_t depth() const { return gens_.size(); }
  const std::vector<Generation>& generations() const { return gens_; }
  const Generation& generation(std::size_t k) const { return gens_.at(k - 1); }  // 1-based
  const std::string& label() const { return label_; }

  /// N_k, with N_0 = 1.
  ScaledInt interval_count(std::size_t k) const;
  /// l_k, with l_0 = 1.
  ScaledRational interval_length(std::size_t k) const;
  /// Smallest k with l_k <= 2^-n, if the schedule is deep enough.
  std::optional<std::size_t> depth_for_level(int n) const;

 private:
  std::vector<Generation> gens_;
  std::string label_;
};

/// c children of length ratio * parent, repeated `depth` times.
CantorSchedule schedule_uniform(const Integer& count, const Rational& ratio, std::size_t depth);

struct Prop13Schedule {
  std::vector<Rational> t;      // t_1..t_K
  std::vector<std::int64_t> m;  // m_1..m_{K+1}
  std::vector<std::int64_t> n;  // n_1..n_{K+1}
  CantorSchedule schedule;      // K+1 generations: (2^m_k, 2^-n_k)

  std::int64_t block_start(std::size_t k) const;  // M_k
  std::int64_t count_exponent(std::size_t k) const;  // log2 N_k = m_1 + ... + m_k
};

/// Tuned Prop 1.3 schedule. m_{k+1} is the smallest integer > m_k with
/// 2^(m_{k+1}(1-t_k)) N_k l_k^t_k >= 1 and n_k the smallest integer above
/// both m_k and n_{k-1} with n_k N_k l_k 2^(M_k t_k) <= 2^-k. `t` must hold
/// K+1 values since the last generation's n needs t_{K+1}. SearchOverflow if
/// a value would pass 2^62.
Prop13Schedule schedule_prop13(const std::vector<Rational>& t, std::int64_t m1, std::size_t depth);

/// The default t_k = 1 - 2^-k sequence.
std::vector<Rational> prop13_default_t(std::size_t count);

struct Prop14Schedule {
  Rational t;
  std::vector<std::int64_t> n;  // n_1..n_K
  double tail_sum = 0;          // sum over the prefix of 2^(-n_k t)
  CantorSchedule schedule;      // (floor(2^(n_k t)), 2^-n_k)
};

/// Prop 1.4 schedule. If `n_seq` is shorter than `depth`, its last entry
/// repeats. DegenerateGeneration when floor(2^(n_k t)) < 2.
Prop14Schedule schedule_prop14(const Rational& t, const std::vector<std::int64_t>& n_seq, std::size_t depth);

using CantorLevels = std::vector<std::vector<RationalInterval>>;  // [k-1] = generation k

/// Materialized generations 1..K. BudgetExceeded past `max_intervals`.
CantorLevels build_levels(const CantorSchedule& schedule, std::size_t depth,
                          std::uint64_t max_intervals = 1u << 22);

/// "generation index left right" rows with p/q endpoints.
std::string export_levels(const CantorLevels& levels);

struct FwwDims {
  std::size_t horizon = 0;
  std::size_t window = 0;
  std::vector<double> hdim_seq;  // h_k, k = 1..K
  std::vector<double> pdim_seq;  // p_k
  std::vector<std::optional<Rational>> hdim_exact;  // when N and l are powers of two
  std::vector<std::optional<Rational>> pdim_exact;
  double hdim_limit_est = 0;  // min over the last `window` terms
  double pdim_limit_est = 0;  // max over the last `window` terms
};

/// h_k = log N_{k+1} / -log l_k, p_k = log N_{k+1} / (-log l_k + log(N_{k+1}/N_k)).
/// Needs schedule depth >= K+1. Window 0 means the last K/2 terms.
FwwDims fww_dims(const CantorSchedule& schedule, std::size_t horizon, std::size_t window = 0);

/// A compact target G in [0,1]: the whole interval, a single point, or the
/// generation-K union G_K of a Cantor schedule.
///
/// Counting convention for half-open cells: a cell counts when its
/// intersection with a target piece has positive length, or when it contains
/// a target piece that is a single point. Closed cubes count on any contact.
class TargetSet {
 public:
  enum class Kind { Full, Point, Cantor };

  static TargetSet full();
  static TargetSet point(Rational x);
  /// Endpoints of generations 1..K are kept exact; BudgetExceeded if they
  /// are too large to represent.
  static TargetSet cantor(const CantorSchedule& schedule, std::size_t depth);

  Kind kind() const { return kind_; }
  std::size_t depth() const { return depth_; }
  std::string describe() const;

  /// DepthInsufficient unless the target resolves level n (Cantor targets
  /// need l_K <= 2^-n).
  void require_depth(int n) const;

  bool intersects(const Cube& cube) const;

  /// #{Q in Q'_n : Q meets G} under the half-open convention above, by dyadic
  /// tree descent with pruning.
  Integer covering_count(int n) const;
  /// Same cells, as sorted linear indices. BudgetExceeded past `max_cells`.
  std::vector<std::uint64_t> covering_cells(int n, std::uint64_t max_cells = 1u << 26) const;
  /// #{Q in Q_n : Q meets G} for closed cubes.
  Integer closed_count(int n) const;

  /// inf (G intersect (z, 1]) if that set is non-empty.
  std::optional<Rational> next_point_after(const Rational& z) const;
  std::optional<Rational> min_point() const;

 private:
  struct Level {
    Integer count;
    Rational length;
    Rational step;  // distance between consecutive child left endpoints
    Integer length_scaled;  // length * scale_
    Integer step_scaled;
  };

  // Dyadic interval [k 2^-n, (k+1) 2^-n] in scaled coordinates.
  std::pair<Integer, Integer> scaled_cell(int n, std::uint64_t k) const;
  // open: positive-length overlap with (x,y); closed: contact with [x,y].
  bool meets_scaled(const Integer& x, const Integer& y, bool open) const;
  bool inside_scaled(const Integer& x, const Integer& y) const;
  bool meets_cell(int n, std::uint64_t k, bool open) const;
  bool inside_cell(int n, std::uint64_t k) const;
  template <class Emit>
  void descend(int n, bool open, Emit&& emit) const;

  Kind kind_ = Kind::Full;
  Rational point_;
  std::size_t depth_ = 0;
  std::vector<Level> levels_;  // [j] = generation j+1
  Integer scale_;              // common denominator of all endpoints, a multiple of 2^62
  std::string label_;
};

}  // namespace fhl
