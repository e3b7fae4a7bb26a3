#include "cantor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "limits.hpp"

namespace fhl {

namespace {

constexpr std::int64_t kSearchLimit = std::int64_t{1} << 62;

bool le_one(const ScaledRational& v) {
  if (v.mant <= 0) return true;
  double lv = v.log2();
  if (lv < -1.0) return true;
  if (lv > 1.0) return false;
  return v.mant * pow2(v.exp2) <= 1;
}

ScaledRational as_rational(const ScaledInt& z) { return ScaledRational{Rational(z.mant), z.exp2}; }

// Sign of log2(n) - r, exactly.
int compare_log2(std::int64_t n, const Rational& r) {
  auto un = static_cast<std::uint64_t>(n);
  if ((un & (un - 1)) == 0) {
    Rational k(static_cast<long>(std::countr_zero(un)));
    return k < r ? -1 : (k > r ? 1 : 0);
  }
  init_mpfr_range();
  for (long prec = 128; prec <= (1L << 16); prec *= 2) {
    BigFloat lo(prec), hi(prec), rlo(prec), rhi(prec);
    mpfr_set_ui(lo.get(), static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_set_ui(hi.get(), static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_log2(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_log2(hi.get(), hi.get(), MPFR_RNDU);
    mpfr_set_q(rlo.get(), r.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(rhi.get(), r.get_mpq_t(), MPFR_RNDU);
    if (mpfr_less_p(hi.get(), rlo.get())) return -1;
    if (mpfr_greater_p(lo.get(), rhi.get())) return 1;
  }
  fail(Errc::InsufficientPrecision, "cannot compare log2(" + std::to_string(n) + ") with " + to_string(r));
}

// Smallest n >= lower with log2(n) <= (base + n) * (1 - t) - offset.
std::int64_t search_block_length(std::int64_t lower, std::int64_t base, const Rational& t, const Rational& offset) {
  Rational slope = 1 - t;
  auto pred = [&](std::int64_t n) {
    Rational rhs = slope * Rational(Integer(std::to_string(base + n))) - offset;
    return compare_log2(n, rhs) <= 0;
  };
  // log2(n) - slope*n increases up to 1/(slope ln 2) and decreases after it,
  // so the predicate is monotone past that point.
  double turn = 1.0 / (slope.get_d() * std::log(2.0));
  std::int64_t scan_end = std::max(lower, static_cast<std::int64_t>(std::ceil(turn)) + 1);
  for (std::int64_t n = lower; n <= scan_end; ++n) {
    if (pred(n)) return n;
  }
  std::int64_t lo = scan_end;  // predicate false here
  std::int64_t step = 1;
  std::int64_t hi = scan_end + step;
  while (!pred(hi)) {
    lo = hi;
    if (step > kSearchLimit / 2 || hi > kSearchLimit - 2 * step) {
      fail(Errc::SearchOverflow, "block length search passed 2^62");
    }
    step *= 2;
    hi = scan_end + step;
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

Integer to_integer(std::int64_t v) { return Integer(std::to_string(v)); }

}  // namespace

// ---------------------------------------------------------------------------

CantorSchedule::CantorSchedule(std::vector<Generation> generations, std::string label)
    : gens_(std::move(generations)), label_(std::move(label)) {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    auto& g = gens_[i];
    g.count.normalize();
    g.ratio.normalize();
    std::string where = "generation " + std::to_string(i + 1);
    bool two_or_more = g.count.mant > 0 && (g.count.exp2 >= 1 || g.count.mant >= 2);
    require(two_or_more, Errc::DegenerateGeneration, where + " has fewer than 2 children");
    require(g.ratio.mant > 0, Errc::DegenerateGeneration, where + " has non-positive length ratio");
    require(le_one(as_rational(g.count) * g.ratio), Errc::DegenerateGeneration,
            where + ": children do not fit inside the parent");
  }
}

ScaledInt CantorSchedule::interval_count(std::size_t k) const {
  require(k <= depth(), Errc::DepthInsufficient, "schedule has only " + std::to_string(depth()) + " generations");
  ScaledInt n{1, 0};
  for (std::size_t i = 0; i < k; ++i) n = n * gens_[i].count;
  return n;
}

ScaledRational CantorSchedule::interval_length(std::size_t k) const {
  require(k <= depth(), Errc::DepthInsufficient, "schedule has only " + std::to_string(depth()) + " generations");
  ScaledRational l{1, 0};
  for (std::size_t i = 0; i < k; ++i) l = l * gens_[i].ratio;
  return l;
}

std::optional<std::size_t> CantorSchedule::depth_for_level(int n) const {
  ScaledRational l{1, n};
  for (std::size_t k = 0; k <= depth(); ++k) {
    if (le_one(l)) return k;
    if (k < depth()) l = l * gens_[k].ratio;
  }
  return std::nullopt;
}

CantorSchedule schedule_uniform(const Integer& count, const Rational& ratio, std::size_t depth) {
  require(depth >= 1, Errc::InvalidArgument, "depth must be >= 1");
  std::vector<Generation> gens(depth, Generation{ScaledInt::of(count), ScaledRational::of(ratio)});
  return CantorSchedule(std::move(gens), "uniform c=" + count.get_str() + " ratio=" + to_string(ratio));
}

std::int64_t Prop13Schedule::block_start(std::size_t k) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < k; ++i) s += n.at(i);
  return s;
}

std::int64_t Prop13Schedule::count_exponent(std::size_t k) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < k; ++i) s += m.at(i);
  return s;
}

std::vector<Rational> prop13_default_t(std::size_t count) {
  std::vector<Rational> t;
  for (std::size_t k = 1; k <= count; ++k) t.push_back(1 - pow2(-static_cast<std::int64_t>(k)));
  return t;
}

Prop13Schedule schedule_prop13(const std::vector<Rational>& t, std::int64_t m1, std::size_t depth) {
  require(depth >= 1, Errc::InvalidArgument, "prop13 depth must be >= 1");
  require(m1 >= 1, Errc::InvalidArgument, "m_1 must be >= 1");
  require(t.size() >= depth + 1, Errc::InvalidArgument,
          "prop13 needs t_1..t_{K+1} (" + std::to_string(depth + 1) + " values)");
  for (std::size_t i = 0; i <= depth; ++i) {
    require(t[i] > 0 && t[i] < 1, Errc::InvalidArgument, "t_k must lie in (0,1)");
    if (i > 0) require(t[i] > t[i - 1], Errc::InvalidArgument, "t_k must be increasing");
  }
  Prop13Schedule out;
  out.t.assign(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(depth + 1));
  out.m.push_back(m1);
  std::int64_t count_exp = m1;  // log2 N_k
  std::int64_t start = 0;       // M_{k-1}
  for (std::size_t k = 1; k <= depth + 1; ++k) {
    const Rational& tk = t[k - 1];
    std::int64_t lower = out.m.back() + 1;
    if (!out.n.empty()) lower = std::max(lower, out.n.back() + 1);
    // n N_k l_k 2^(M_k t_k) <= 2^-k  <=>  log2 n <= (M_{k-1} + n)(1 - t_k) - log2 N_k - k
    Rational offset(to_integer(count_exp + static_cast<std::int64_t>(k)));
    std::int64_t nk = search_block_length(lower, start, tk, offset);
    require(start <= kSearchLimit - nk, Errc::SearchOverflow, "M_k passed 2^62");
    out.n.push_back(nk);
    start += nk;
    if (k == depth + 1) break;
    // 2^(m (1 - t_k)) N_k l_k^t_k >= 1  <=>  m >= (t_k M_k - log2 N_k) / (1 - t_k)
    Rational bound = (tk * to_integer(start) - to_integer(count_exp)) / (1 - tk);
    Integer need = ceil_of(bound);
    std::int64_t next = out.m.back() + 1;
    if (need > to_integer(next)) {
      require(need <= to_integer(kSearchLimit), Errc::SearchOverflow, "m_k search passed 2^62");
      next = need.get_si();
    }
    require(count_exp <= kSearchLimit - next, Errc::SearchOverflow, "log2 N_k passed 2^62");
    out.m.push_back(next);
    count_exp += next;
  }
  std::vector<Generation> gens;
  for (std::size_t k = 0; k <= depth; ++k) {
    gens.push_back(Generation{ScaledInt::pow2(out.m[k]), ScaledRational::pow2(-out.n[k])});
  }
  out.schedule = CantorSchedule(std::move(gens), "prop13 m1=" + std::to_string(m1));
  return out;
}

Prop14Schedule schedule_prop14(const Rational& t, const std::vector<std::int64_t>& n_seq, std::size_t depth) {
  require(t >= 0 && t <= 1, Errc::InvalidArgument, "prop14 t must lie in [0,1]");
  require(!n_seq.empty(), Errc::InvalidArgument, "prop14 needs at least one n_k");
  require(depth >= 1, Errc::InvalidArgument, "prop14 depth must be >= 1");
  Prop14Schedule out;
  out.t = t;
  std::vector<Generation> gens;
  for (std::size_t k = 0; k < depth; ++k) {
    std::int64_t nk = n_seq[std::min(k, n_seq.size() - 1)];
    require(nk >= 1, Errc::InvalidArgument, "n_k must be >= 1");
    Integer c = floor_exp2(t * to_integer(nk));
    require(c >= 2, Errc::DegenerateGeneration,
            "generation " + std::to_string(k + 1) + ": floor(2^(" + std::to_string(nk) + " t)) = " + c.get_str());
    out.n.push_back(nk);
    out.tail_sum += std::exp2(-Rational(t * to_integer(nk)).get_d());
    gens.push_back(Generation{ScaledInt::of(c), ScaledRational::pow2(-nk)});
  }
  out.schedule = CantorSchedule(std::move(gens), "prop14 t=" + to_string(t));
  return out;
}

CantorLevels build_levels(const CantorSchedule& schedule, std::size_t depth, std::uint64_t max_intervals) {
  require(depth <= schedule.depth(), Errc::DepthInsufficient,
          "requested " + std::to_string(depth) + " generations of " + std::to_string(schedule.depth()));
  CantorLevels out;
  std::vector<RationalInterval> current{closed_interval(0, 1)};
  Rational parent_len = 1;
  std::uint64_t total = 1;
  for (std::size_t k = 1; k <= depth; ++k) {
    const auto& g = schedule.generation(k);
    Integer c = g.count.value(64);
    require(c.fits_ulong_p() && total <= max_intervals / c.get_ui(), Errc::BudgetExceeded,
            "generation " + std::to_string(k) + " exceeds " + std::to_string(max_intervals) + " intervals");
    std::uint64_t cu = c.get_ui();
    total *= cu;
    Rational len = parent_len * g.ratio.value();
    Rational step = (parent_len - len) / Rational(c - 1);
    std::vector<RationalInterval> next;
    next.reserve(total);
    for (const auto& parent_iv : current) {
      for (std::uint64_t i = 0; i < cu; ++i) {
        Rational left = parent_iv.left + step * Rational(Integer(static_cast<unsigned long>(i)));
        next.push_back(closed_interval(left, left + len));
      }
    }
    current = std::move(next);
    out.push_back(current);
    parent_len = len;
  }
  return out;
}

std::string export_levels(const CantorLevels& levels) {
  std::ostringstream os;
  os << "generation\tindex\tleft\tright\n";
  for (std::size_t k = 0; k < levels.size(); ++k) {
    for (std::size_t i = 0; i < levels[k].size(); ++i) {
      os << k + 1 << '\t' << i << '\t' << to_string(levels[k][i].left) << '\t' << to_string(levels[k][i].right)
         << '\n';
    }
  }
  return os.str();
}

FwwDims fww_dims(const CantorSchedule& schedule, std::size_t horizon, std::size_t window) {
  require(horizon >= 2, Errc::InvalidArgument, "fww horizon must be >= 2");
  require(schedule.depth() >= horizon + 1, Errc::DepthInsufficient,
          "fww horizon " + std::to_string(horizon) + " needs " + std::to_string(horizon + 1) + " generations");
  FwwDims out;
  out.horizon = horizon;
  out.window = window == 0 ? std::max<std::size_t>(1, horizon / 2) : std::min(window, horizon);
  ScaledInt count{1, 0};
  ScaledRational length{1, 0};
  for (std::size_t k = 1; k <= horizon; ++k) {
    count = count * schedule.generation(k).count;
    length = length * schedule.generation(k).ratio;
    const ScaledInt& c_next = schedule.generation(k + 1).count;
    ScaledInt count_next = count * c_next;
    double num = count_next.log2();
    double neg_log_l = -length.log2();
    out.hdim_seq.push_back(num / neg_log_l);
    out.pdim_seq.push_back(num / (neg_log_l + c_next.log2()));
    auto en = count_next.exact_log2();
    auto el = length.exact_log2();
    auto ec = c_next.exact_log2();
    if (en && el) {
      Rational h(to_integer(*en), to_integer(-*el));
      h.canonicalize();
      out.hdim_exact.emplace_back(h);
    } else {
      out.hdim_exact.emplace_back(std::nullopt);
    }
    if (en && el && ec) {
      Rational p(to_integer(*en), to_integer(-*el + *ec));
      p.canonicalize();
      out.pdim_exact.emplace_back(p);
    } else {
      out.pdim_exact.emplace_back(std::nullopt);
    }
  }
  auto tail_begin = static_cast<std::ptrdiff_t>(horizon - out.window);
  out.hdim_limit_est = *std::min_element(out.hdim_seq.begin() + tail_begin, out.hdim_seq.end());
  out.pdim_limit_est = *std::max_element(out.pdim_seq.begin() + tail_begin, out.pdim_seq.end());
  return out;
}

// ---------------------------------------------------------------------------

TargetSet TargetSet::full() {
  TargetSet t;
  t.kind_ = Kind::Full;
  t.label_ = "full [0,1]";
  return t;
}

TargetSet TargetSet::point(Rational x) {
  require(x >= 0 && x <= 1, Errc::InvalidArgument, "point target must lie in [0,1]");
  TargetSet t;
  t.kind_ = Kind::Point;
  t.point_ = std::move(x);
  t.label_ = "point " + to_string(t.point_);
  return t;
}

TargetSet TargetSet::cantor(const CantorSchedule& schedule, std::size_t depth) {
  require(depth >= 1, Errc::InvalidArgument, "Cantor target depth must be >= 1");
  require(depth <= schedule.depth(), Errc::DepthInsufficient,
          "target depth " + std::to_string(depth) + " exceeds schedule depth " + std::to_string(schedule.depth()));
  TargetSet t;
  t.kind_ = Kind::Cantor;
  t.depth_ = depth;
  t.label_ = schedule.label() + " depth=" + std::to_string(depth);
  Rational parent_len = 1;
  Integer scale = pow2_int(kHardLevelCap);
  for (std::size_t k = 1; k <= depth; ++k) {
    const auto& g = schedule.generation(k);
    Level lv;
    lv.count = g.count.value(1u << 20);
    lv.length = parent_len * g.ratio.value(1u << 20);
    lv.step = (parent_len - lv.length) / Rational(lv.count - 1);
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), lv.length.get_den_mpz_t());
    mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), lv.step.get_den_mpz_t());
    parent_len = lv.length;
    t.levels_.push_back(std::move(lv));
  }
  for (auto& lv : t.levels_) {
    lv.length_scaled = Rational(lv.length * scale).get_num();
    lv.step_scaled = Rational(lv.step * scale).get_num();
  }
  t.scale_ = std::move(scale);
  return t;
}

std::string TargetSet::describe() const { return label_; }

void TargetSet::require_depth(int n) const {
  if (kind_ != Kind::Cantor) return;
  const Rational& l = levels_.back().length;
  require(l <= pow2(-n), Errc::DepthInsufficient,
          "target depth " + std::to_string(depth_) + " does not resolve level " + std::to_string(n));
}

std::pair<Integer, Integer> TargetSet::scaled_cell(int n, std::uint64_t k) const {
  Integer side = scale_;
  mpz_tdiv_q_2exp(side.get_mpz_t(), side.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
  Integer x = side * Integer(static_cast<unsigned long>(k));
  return {x, x + side};
}

// Every piece of G_j contains the flush-left and flush-right pieces of G_K
// at its own endpoints. So a piece that meets the cell and has an endpoint
// inside it settles the question; only a piece containing the whole cell
// needs another generation, and at most one child can contain it.
bool TargetSet::meets_scaled(const Integer& x, const Integer& y, bool open) const {
  Integer a = 0;
  Integer b = scale_;
  for (std::size_t gen = 0;; ++gen) {
    if (open ? !(a < y && b > x) : !(a <= y && b >= x)) return false;
    if (a >= x || b <= y || gen == depth_) return true;
    const Level& ch = levels_[gen];
    // first child whose right end passes x (reaches x when closed)
    Integer num = x - a - ch.length_scaled;
    Integer i;
    if (open) {
      mpz_fdiv_q(i.get_mpz_t(), num.get_mpz_t(), ch.step_scaled.get_mpz_t());
      i += 1;
    } else {
      mpz_cdiv_q(i.get_mpz_t(), num.get_mpz_t(), ch.step_scaled.get_mpz_t());
    }
    if (i < 0) i = 0;
    if (i >= ch.count) return false;
    a += ch.step_scaled * i;
    b = a + ch.length_scaled;
  }
}

bool TargetSet::inside_scaled(const Integer& x, const Integer& y) const {
  Integer a = 0;
  for (std::size_t gen = 0; gen < depth_; ++gen) {
    const Level& ch = levels_[gen];
    Integer i;
    Integer num = x - a;
    mpz_fdiv_q(i.get_mpz_t(), num.get_mpz_t(), ch.step_scaled.get_mpz_t());
    if (i < 0) return false;
    if (i >= ch.count) i = ch.count - 1;
    a += ch.step_scaled * i;
    if (!(a <= x && y <= a + ch.length_scaled)) return false;
  }
  return true;
}

bool TargetSet::meets_cell(int n, std::uint64_t k, bool open) const {
  switch (kind_) {
    case Kind::Full:
      return true;
    case Kind::Point: {
      Rational x = Rational(Integer(static_cast<unsigned long>(k))) * pow2(-n);
      Rational y = x + pow2(-n);
      if (open) return (x <= point_ && point_ < y) || (point_ == 1 && y == 1);
      return x <= point_ && point_ <= y;
    }
    case Kind::Cantor: {
      auto [x, y] = scaled_cell(n, k);
      return meets_scaled(x, y, open);
    }
  }
  return false;
}

bool TargetSet::inside_cell(int n, std::uint64_t k) const {
  if (kind_ == Kind::Full) return true;
  if (kind_ == Kind::Point) return false;
  auto [x, y] = scaled_cell(n, k);
  return inside_scaled(x, y);
}

template <class Emit>
void TargetSet::descend(int n, bool open, Emit&& emit) const {
  struct Node {
    int level;
    std::uint64_t index;
  };
  std::vector<Node> stack{{0, 0}};
  while (!stack.empty()) {
    Node node = stack.back();
    stack.pop_back();
    if (!meets_cell(node.level, node.index, open)) continue;
    int rest = n - node.level;
    if (rest == 0) {
      emit(node.index, std::uint64_t{1});
      continue;
    }
    if (inside_cell(node.level, node.index)) {
      emit(node.index << rest, std::uint64_t{1} << rest);
      continue;
    }
    stack.push_back({node.level + 1, 2 * node.index + 1});
    stack.push_back({node.level + 1, 2 * node.index});
  }
}

bool TargetSet::intersects(const Cube& cube) const {
  require(cube.dim() == 1, Errc::UnsupportedDimension, "targets live in [0,1]");
  return meets_cell(cube.level(), cube.coord(), cube.closure() == Closure::HalfOpen);
}

Integer TargetSet::covering_count(int n) const {
  check_level(n);
  if (kind_ == Kind::Full) return pow2_int(static_cast<std::uint64_t>(n));
  if (kind_ == Kind::Point) return 1;
  Integer total = 0;
  descend(n, true, [&](std::uint64_t, std::uint64_t len) { total += Integer(static_cast<unsigned long>(len)); });
  return total;
}

std::vector<std::uint64_t> TargetSet::covering_cells(int n, std::uint64_t max_cells) const {
  check_level(n);
  std::vector<std::uint64_t> out;
  if (kind_ == Kind::Point) {
    Integer k = floor_of(point_ * pow2(n));
    if (point_ == 1) k -= 1;
    out.push_back(k.get_ui());
    return out;
  }
  descend(n, true, [&](std::uint64_t first, std::uint64_t len) {
    require(out.size() + len <= max_cells, Errc::BudgetExceeded,
            "more than " + std::to_string(max_cells) + " covering cells at level " + std::to_string(n));
    for (std::uint64_t i = 0; i < len; ++i) out.push_back(first + i);
  });
  return out;
}

Integer TargetSet::closed_count(int n) const {
  check_level(n);
  if (kind_ == Kind::Full) return pow2_int(static_cast<std::uint64_t>(n));
  if (kind_ == Kind::Point) {
    Rational scaled = point_ * pow2(n);
    return (is_integer(scaled) && point_ > 0 && point_ < 1) ? 2 : 1;
  }
  Integer total = 0;
  descend(n, false, [&](std::uint64_t, std::uint64_t len) { total += Integer(static_cast<unsigned long>(len)); });
  return total;
}

std::optional<Rational> TargetSet::min_point() const {
  if (kind_ == Kind::Point) return point_;
  return Rational(0);
}

std::optional<Rational> TargetSet::next_point_after(const Rational& z) const {
  if (kind_ == Kind::Point) {
    if (point_ > z) return point_;
    return std::nullopt;
  }
  if (z >= 1) return std::nullopt;
  if (kind_ == Kind::Full) return std::max(z, Rational(0));
  Rational a = 0;
  for (std::size_t gen = 0; gen < depth_; ++gen) {
    const Level& ch = levels_[gen];
    // first child whose right end a + i*step + length exceeds z
    Integer i = floor_of((z - a - ch.length) / ch.step) + 1;
    if (i < 0) i = 0;
    if (i > ch.count - 1) i = ch.count - 1;
    a += ch.step * Rational(i);
  }
  return std::max(a, z);
}

}  // namespace fhl
