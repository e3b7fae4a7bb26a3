#pragma once

// Random selection families {Z_n(Q)}: independent Bernoulli selections and
// the uniform point-process selections built from blocks of i.i.d. points.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "grid.hpp"
#include "numeric.hpp"
#include "rng.hpp"

namespace fhl {

/// Z_n(Q) independent across cubes and across levels, P_n(Q) = P_n for all Q.
struct BernoulliSpec {
  enum class Rule { PowerLaw, Table };

  Rule rule = Rule::PowerLaw;
  Rational gamma = 0;         // PowerLaw: P_n = 2^(-n gamma)
  std::vector<double> table;  // Table: P_n = table[n - 1]
  std::size_t dim = 1;

  static BernoulliSpec power_law(Rational gamma, std::size_t dim = 1);
  static BernoulliSpec per_level(std::vector<double> probs, std::size_t dim = 1);

  double prob(int n) const;
};

/// Z_n(Q) = 1 iff one of the points xi_m with m in [b_{n-1}, b_n) lands in
/// the closed cube Q. The xi_m are i.i.d. uniform on [0,1].
///
/// Prop13 rule: M_k = n_1 + ... + n_k and b_n = 2^(M_k t_k) for
/// n in [M_k, M_{k+1}); b_n = 1 before the first block; the last listed block
/// extends forever. Prop14 rule: b_n = a_n = 2^(n (1 - gamma0)).
///
/// Block point counts are integer index counts C_n = ceil(b_n) - ceil(b_{n-1}).
struct PointProcessSpec {
  enum class Kind { Prop13, Prop14 };

  Kind kind = Kind::Prop14;
  Rational gamma0 = 0;
  std::vector<std::int64_t> block_lengths;  // n_k
  std::vector<Rational> t_seq;              // t_k

  static PointProcessSpec prop14(Rational gamma0);
  static PointProcessSpec prop13(std::vector<std::int64_t> block_lengths, std::vector<Rational> t_seq);

  /// M_1, ..., M_K.
  std::vector<std::int64_t> block_starts() const;
  /// log2 b_n, exact.
  Rational boundary_exponent(std::int64_t n) const;
};

class SelectionModel {
 public:
  SelectionModel(BernoulliSpec spec);       // NOLINT(google-explicit-constructor)
  SelectionModel(PointProcessSpec spec);    // NOLINT(google-explicit-constructor)

  bool is_bernoulli() const { return std::holds_alternative<BernoulliSpec>(spec_); }
  const BernoulliSpec& bernoulli() const { return std::get<BernoulliSpec>(spec_); }
  const PointProcessSpec& point_process() const { return std::get<PointProcessSpec>(spec_); }
  std::size_t dim() const;
  std::string kind_name() const;

  /// block_count(point_process(), n), memoized per level. Copies share the
  /// table, which is filled once and is safe to read from any thread.
  std::uint64_t block_count(int n) const;

 private:
  struct CountTable;

  std::variant<BernoulliSpec, PointProcessSpec> spec_;
  std::shared_ptr<CountTable> counts_;
};

struct LevelSelection {
  int level = 0;
  std::vector<std::uint64_t> chosen;  // sorted linear cube indices with Z_n(Q) = 1
  std::vector<std::uint64_t> points;  // point-process draws, as x = u / 2^64

  std::vector<Cube> chosen_cubes(std::size_t dim) const;
};

/// C_n = ceil(b_n) - ceil(b_{n-1}), n >= 1.
Integer block_count_exact(const PointProcessSpec& spec, std::int64_t n);
/// block_count_exact narrowed to 64 bits (BudgetExceeded if it does not fit).
std::uint64_t block_count(const PointProcessSpec& spec, std::int64_t n);

/// 1 - (1 - 2^-n)^C as an exact rational.
Rational pp_hit_prob_exact(int n, std::uint64_t count);
/// Same quantity in double precision, computed as -expm1(C log1p(-2^-n)).
double pp_hit_prob(int n, std::uint64_t count);

/// P_n(Q). Every supported model is homogeneous, so the cube only matters for
/// validation (level and dimension).
double exact_hit_prob(const SelectionModel& model, int n);
double exact_hit_prob(const SelectionModel& model, const Cube& cube);

/// Exact rational P_n when available (point process, or a Bernoulli power law
/// with integer n*gamma).
std::optional<Rational> exact_hit_prob_rational(const SelectionModel& model, int n);

/// Draws {Z_n(Q)} for every level-n cube.
LevelSelection sample_level(const SelectionModel& model, int n, Stream& stream);

/// Draws Z_n for the listed cubes only (sorted, distinct linear indices) and
/// returns the positions, within `cells`, of the chosen ones. For Bernoulli
/// models this touches only the listed cubes; for point processes all C_n
/// points are drawn.
std::vector<std::size_t> sample_among(const SelectionModel& model, int n,
                                      std::span<const std::uint64_t> cells, Stream& stream);

struct IndexEstimate {
  int level = 0;
  double gamma1 = 0;  // -log2(max_Q P_n(Q)) / n, +inf when that max is 0
  double gamma2 = 0;  // -log2(min_Q P_n(Q)) / n
};

std::vector<IndexEstimate> index_estimates(const SelectionModel& model, int n_lo, int n_hi);

}  // namespace fhl
