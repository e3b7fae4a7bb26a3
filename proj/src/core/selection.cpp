#include "selection.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "limits.hpp"

namespace fhl {

BernoulliSpec BernoulliSpec::power_law(Rational gamma, std::size_t dim) {
  require(gamma >= 0, Errc::InvalidArgument, "Bernoulli gamma must be >= 0");
  require(dim >= 1, Errc::InvalidArgument, "dimension must be >= 1");
  BernoulliSpec s;
  s.rule = Rule::PowerLaw;
  s.gamma = std::move(gamma);
  s.dim = dim;
  return s;
}

BernoulliSpec BernoulliSpec::per_level(std::vector<double> probs, std::size_t dim) {
  require(dim >= 1, Errc::InvalidArgument, "dimension must be >= 1");
  for (double p : probs) {
    require(p >= 0.0 && p <= 1.0, Errc::InvalidArgument, "table probability outside [0,1]");
  }
  BernoulliSpec s;
  s.rule = Rule::Table;
  s.table = std::move(probs);
  s.dim = dim;
  return s;
}

double BernoulliSpec::prob(int n) const {
  require(n >= 1, Errc::InvalidArgument, "level must be >= 1");
  if (rule == Rule::Table) {
    require(static_cast<std::size_t>(n) <= table.size(), Errc::InvalidArgument,
            "probability table has no entry for level " + std::to_string(n));
    return table[static_cast<std::size_t>(n) - 1];
  }
  Rational e = gamma * n;
  return std::exp2(-e.get_d());
}

PointProcessSpec PointProcessSpec::prop14(Rational gamma0) {
  require(gamma0 >= 0 && gamma0 < 1, Errc::InvalidArgument, "gamma0 must lie in [0,1)");
  PointProcessSpec s;
  s.kind = Kind::Prop14;
  s.gamma0 = std::move(gamma0);
  return s;
}

PointProcessSpec PointProcessSpec::prop13(std::vector<std::int64_t> block_lengths,
                                          std::vector<Rational> t_seq) {
  require(!block_lengths.empty(), Errc::InvalidArgument, "prop13 needs at least one block");
  require(block_lengths.size() == t_seq.size(), Errc::InvalidArgument,
          "prop13 block_lengths and t_seq differ in length");
  for (std::size_t i = 0; i < t_seq.size(); ++i) {
    require(block_lengths[i] >= 1, Errc::InvalidArgument, "prop13 block length must be >= 1");
    require(t_seq[i] > 0 && t_seq[i] < 1, Errc::InvalidArgument, "prop13 t_k must lie in (0,1)");
    if (i > 0) require(t_seq[i] > t_seq[i - 1], Errc::InvalidArgument, "prop13 t_k must increase");
  }
  PointProcessSpec s;
  s.kind = Kind::Prop13;
  s.block_lengths = std::move(block_lengths);
  s.t_seq = std::move(t_seq);
  return s;
}

std::vector<std::int64_t> PointProcessSpec::block_starts() const {
  std::vector<std::int64_t> out;
  std::int64_t m = 0;
  for (auto len : block_lengths) {
    m += len;
    out.push_back(m);
  }
  return out;
}

Rational PointProcessSpec::boundary_exponent(std::int64_t n) const {
  if (n <= 0) return 0;
  if (kind == Kind::Prop14) return (1 - gamma0) * n;
  auto starts = block_starts();
  // last k with M_k <= n
  auto it = std::upper_bound(starts.begin(), starts.end(), n);
  if (it == starts.begin()) return 0;
  std::size_t k = static_cast<std::size_t>(it - starts.begin()) - 1;
  return t_seq[k] * starts[k];
}

SelectionModel::SelectionModel(BernoulliSpec spec) : spec_(std::move(spec)) {}
// Counts for levels 1..kHardLevelCap; a level whose count does not fit
// (or is otherwise invalid) is left empty and recomputed to raise the error.
struct SelectionModel::CountTable {
  std::once_flag once;
  std::array<std::optional<std::uint64_t>, kHardLevelCap + 1> counts;
};

SelectionModel::SelectionModel(PointProcessSpec spec)
    : spec_(std::move(spec)), counts_(std::make_shared<CountTable>()) {}

std::uint64_t SelectionModel::block_count(int n) const {
  const PointProcessSpec& spec = point_process();
  if (n < 1 || n > kHardLevelCap) return fhl::block_count(spec, n);
  std::call_once(counts_->once, [&] {
    for (int k = 1; k <= kHardLevelCap; ++k) {
      try {
        counts_->counts[static_cast<std::size_t>(k)] = fhl::block_count(spec, k);
      } catch (const Error&) {
      }
    }
  });
  const auto& c = counts_->counts[static_cast<std::size_t>(n)];
  return c ? *c : fhl::block_count(spec, n);
}

std::size_t SelectionModel::dim() const {
  return is_bernoulli() ? bernoulli().dim : 1;
}

std::string SelectionModel::kind_name() const {
  if (is_bernoulli()) return "bernoulli";
  return point_process().kind == PointProcessSpec::Kind::Prop13 ? "prop13" : "prop14";
}

std::vector<Cube> LevelSelection::chosen_cubes(std::size_t dim) const {
  std::vector<Cube> out;
  out.reserve(chosen.size());
  for (auto idx : chosen) out.push_back(cube_from_linear(level, dim, idx));
  return out;
}

Integer block_count_exact(const PointProcessSpec& spec, std::int64_t n) {
  require(n >= 1, Errc::InvalidArgument, "block_count needs n >= 1");
  Rational hi = spec.boundary_exponent(n);
  Rational lo = spec.boundary_exponent(n - 1);
  if (hi == lo) return 0;
  return ceil_exp2(hi) - ceil_exp2(lo);
}

std::uint64_t block_count(const PointProcessSpec& spec, std::int64_t n) {
  Integer c = block_count_exact(spec, n);
  require(mpz_sizeinbase(c.get_mpz_t(), 2) <= 63, Errc::BudgetExceeded,
          "block count at level " + std::to_string(n) + " exceeds 63 bits");
  return static_cast<std::uint64_t>(c.get_ui());
}

Rational pp_hit_prob_exact(int n, std::uint64_t count) {
  require(n >= 0, Errc::InvalidArgument, "negative level");
  if (count == 0) return 0;
  require(count <= (1ull << 24), Errc::BudgetExceeded, "exact hit probability limited to C <= 2^24");
  Integer miss_num;
  Integer base = pow2_int(static_cast<std::uint64_t>(n)) - 1;
  mpz_pow_ui(miss_num.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(count));
  Rational miss(miss_num, pow2_int(static_cast<std::uint64_t>(n) * count));
  miss.canonicalize();
  return 1 - miss;
}

double pp_hit_prob(int n, std::uint64_t count) {
  if (count == 0) return 0.0;
  return -std::expm1(static_cast<double>(count) * std::log1p(-std::ldexp(1.0, -n)));
}

double exact_hit_prob(const SelectionModel& model, int n) {
  require(n >= 1, Errc::InvalidArgument, "level must be >= 1");
  if (model.is_bernoulli()) return model.bernoulli().prob(n);
  return pp_hit_prob(n, model.block_count(n));
}

double exact_hit_prob(const SelectionModel& model, const Cube& cube) {
  if (!model.is_bernoulli()) {
    require(cube.dim() == 1, Errc::UnsupportedDimension, "point-process models are one-dimensional");
  }
  require(cube.dim() == model.dim(), Errc::InvalidArgument, "cube dimension does not match the model");
  return exact_hit_prob(model, cube.level());
}

std::optional<Rational> exact_hit_prob_rational(const SelectionModel& model, int n) {
  require(n >= 1, Errc::InvalidArgument, "level must be >= 1");
  if (!model.is_bernoulli()) {
    return pp_hit_prob_exact(n, model.block_count(n));
  }
  const auto& b = model.bernoulli();
  if (b.rule == BernoulliSpec::Rule::Table) return Rational(b.prob(n));
  Rational e = b.gamma * n;
  if (!is_integer(e)) return std::nullopt;
  return pow2(-e.get_num().get_si());
}

namespace {

// Positions in [0, total) of the successes of `total` Bernoulli(p) trials.
std::vector<std::uint64_t> bernoulli_positions(std::uint64_t total, double p, Stream& stream) {
  std::vector<std::uint64_t> out;
  if (p <= 0.0 || total == 0) return out;
  if (p >= 1.0) {
    out.resize(total);
    for (std::uint64_t i = 0; i < total; ++i) out[i] = i;
    return out;
  }
  std::uint64_t pos = 0;
  for (;;) {
    std::uint64_t g = stream.geometric(p);
    if (g >= total - pos) break;
    pos += g;
    out.push_back(pos);
    if (++pos >= total) break;
  }
  return out;
}

// Level-n cells whose closed extent contains u / 2^64.
template <class Visit>
void cells_of_point(std::uint64_t u, int n, Visit&& visit) {
  std::uint64_t k = u >> (64 - n);
  visit(k);
  if (k > 0 && (u << n) == 0) visit(k - 1);
}

}  // namespace

LevelSelection sample_level(const SelectionModel& model, int n, Stream& stream) {
  check_level(n);
  require(n >= 1, Errc::InvalidArgument, "level must be >= 1");
  LevelSelection sel;
  sel.level = n;
  if (model.is_bernoulli()) {
    std::size_t d = model.dim();
    require(d * static_cast<std::size_t>(n) <= 62, Errc::LevelCapExceeded, "d*n exceeds 62 bits");
    sel.chosen = bernoulli_positions(1ull << (d * n), model.bernoulli().prob(n), stream);
    return sel;
  }
  std::uint64_t count = model.block_count(n);
  sel.points.resize(count);
  for (auto& u : sel.points) u = stream.next_u64();
  sel.chosen.reserve(count + 1);
  for (auto u : sel.points) cells_of_point(u, n, [&](std::uint64_t k) { sel.chosen.push_back(k); });
  std::sort(sel.chosen.begin(), sel.chosen.end());
  sel.chosen.erase(std::unique(sel.chosen.begin(), sel.chosen.end()), sel.chosen.end());
  return sel;
}

std::vector<std::size_t> sample_among(const SelectionModel& model, int n,
                                      std::span<const std::uint64_t> cells, Stream& stream) {
  check_level(n);
  require(n >= 1, Errc::InvalidArgument, "level must be >= 1");
  std::vector<std::size_t> out;
  if (model.is_bernoulli()) {
    for (auto pos : bernoulli_positions(cells.size(), model.bernoulli().prob(n), stream)) {
      out.push_back(static_cast<std::size_t>(pos));
    }
    return out;
  }
  std::uint64_t count = model.block_count(n);
  for (std::uint64_t i = 0; i < count; ++i) {
    cells_of_point(stream.next_u64(), n, [&](std::uint64_t k) {
      auto it = std::lower_bound(cells.begin(), cells.end(), k);
      if (it != cells.end() && *it == k) out.push_back(static_cast<std::size_t>(it - cells.begin()));
    });
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<IndexEstimate> index_estimates(const SelectionModel& model, int n_lo, int n_hi) {
  require(n_lo >= 1 && n_lo <= n_hi, Errc::InvalidArgument, "index_estimates needs 1 <= n_lo <= n_hi");
  std::vector<IndexEstimate> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    double p = exact_hit_prob(model, n);
    double g = p > 0.0 ? -std::log2(p) / n : std::numeric_limits<double>::infinity();
    // Both models are homogeneous: max and min over cubes coincide.
    out.push_back({n, g, g});
  }
  return out;
}

}  // namespace fhl
