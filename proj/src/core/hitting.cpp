#include "hitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "correlation.hpp"
#include "error.hpp"
#include "limits.hpp"

namespace fhl {

namespace {

double to_double(const Integer& z) { return z.get_d(); }

double binomial_radius(double p, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return 3.0 * std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

// Per-level log P(no selected cell among N target cells).
double level_log_miss(const SelectionModel& model, int n, const Integer& cells) {
  if (cells == 0) return 0.0;
  double nd = to_double(cells);
  if (model.is_bernoulli()) {
    double p = model.bernoulli().prob(n);
    if (p >= 1.0) return -std::numeric_limits<double>::infinity();
    return nd * std::log1p(-p);
  }
  std::uint64_t count = model.block_count(n);
  if (count == 0) return 0.0;
  double frac = std::ldexp(nd, -n);
  if (frac >= 1.0) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(count) * std::log1p(-frac);
}

Integer to_integer(std::int64_t v) { return Integer(std::to_string(v)); }

}  // namespace

bool within_radius(double empirical, double radius, double oracle, std::uint64_t trials) {
  double tol = std::max(radius, binomial_radius(oracle, trials));
  return std::fabs(empirical - oracle) <= tol + 1e-12;
}

std::pair<double, double> window_hit_oracle(const SelectionModel& model, const TargetSet& target, int n_lo,
                                            int n_hi) {
  require(n_lo >= 1 && n_lo <= n_hi, Errc::InvalidArgument, "window needs 1 <= n_lo <= n_hi");
  check_level(n_hi);
  double log_miss = 0.0;
  for (int n = n_lo; n <= n_hi; ++n) {
    target.require_depth(n);
    log_miss += level_log_miss(model, n, target.covering_count(n));
  }
  return {log_miss, -std::expm1(log_miss)};
}

WindowHit window_hit_probability(const SelectionModel& model, const TargetSet& target, int n_lo, int n_hi,
                                 std::uint64_t trials, const TrialRng& rng) {
  require(model.dim() == 1, Errc::UnsupportedDimension, "targets live in [0,1]");
  require(trials >= 1, Errc::InvalidArgument, "trials must be >= 1");
  WindowHit out;
  out.n_lo = n_lo;
  out.n_hi = n_hi;
  out.trials = trials;
  auto [log_miss, oracle] = window_hit_oracle(model, target, n_lo, n_hi);
  out.log_miss = log_miss;
  out.oracle = oracle;

  std::vector<std::vector<std::uint64_t>> cells;
  for (int n = n_lo; n <= n_hi; ++n) {
    cells.push_back(target.covering_cells(n));
    out.counts.emplace_back(static_cast<unsigned long>(cells.back().size()));
  }
  auto hits = map_trials<std::uint8_t>(trials, rng.workers, [&](std::uint64_t i) -> std::uint8_t {
    Stream stream = rng.stream(i);
    for (int n = n_lo; n <= n_hi; ++n) {
      if (!sample_among(model, n, cells[static_cast<std::size_t>(n - n_lo)], stream).empty()) return 1;
    }
    return 0;
  });
  for (auto h : hits) out.hits += h;
  out.empirical = static_cast<double>(out.hits) / static_cast<double>(trials);
  out.radius = binomial_radius(out.empirical, trials);
  out.agrees = within_radius(out.empirical, out.radius, oracle, trials);
  return out;
}

HitStatistics sn_statistics(const SelectionModel& model, const TargetSet& target, int n, std::uint64_t trials,
                            const TrialRng& rng) {
  require(model.dim() == 1, Errc::UnsupportedDimension, "targets live in [0,1]");
  require(n >= 1, Errc::InvalidArgument, "level must be >= 1");
  check_level(n);
  target.require_depth(n);
  HitStatistics st;
  st.level = n;
  auto cells = target.covering_cells(n);
  st.cells = Integer(static_cast<unsigned long>(cells.size()));
  const double nd = static_cast<double>(cells.size());
  st.p = exact_hit_prob(model, n);

  double joint = st.p * st.p;
  std::uint64_t count = 0;
  if (!model.is_bernoulli()) {
    count = model.block_count(n);
    joint = pp_joint(n, count, false);
  }
  st.exact_mean = nd * st.p;
  st.exact_second = nd * st.p + nd * (nd - 1.0) * joint;
  st.exact_var = st.exact_second - st.exact_mean * st.exact_mean;
  if (model.is_bernoulli()) st.exact_var = nd * st.p * (1.0 - st.p);
  st.pz_bound = st.exact_second > 0.0 ? st.exact_mean * st.exact_mean / st.exact_second : 0.0;
  st.exact_pos = -std::expm1(level_log_miss(model, n, st.cells));

  // Rational forms when every ingredient is rational and small.
  auto pq = exact_hit_prob_rational(model, n);
  if (pq && cells.size() <= 4096) {
    std::optional<Rational> jq = model.is_bernoulli() ? std::optional<Rational>(*pq * *pq)
                                                      : pp_joint_exact(n, count, false);
    if (jq) {
      Rational nq(static_cast<long>(cells.size()));
      Rational mean = nq * *pq;
      Rational second = nq * *pq + nq * (nq - 1) * *jq;
      st.exact_mean_q = mean;
      st.pz_bound_q = second > 0 ? Rational(mean * mean / second) : Rational(0);
      Rational miss_one = model.is_bernoulli() ? Rational(1 - *pq) : Rational(1 - nq * pow2(-n));
      std::uint64_t power = model.is_bernoulli() ? cells.size() : count;
      if (miss_one >= 0 && power <= 4096) {
        Rational miss(1);
        for (std::uint64_t i = 0; i < power; ++i) miss *= miss_one;
        st.exact_pos_q = 1 - miss;
      }
    }
  }
  st.pz_exact_holds = st.exact_pos + 1e-12 >= st.pz_bound;

  st.trials = trials;
  if (trials > 0) {
    auto sums = map_trials<std::uint64_t>(trials, rng.workers, [&](std::uint64_t i) -> std::uint64_t {
      Stream stream = rng.stream(i);
      return sample_among(model, n, cells, stream).size();
    });
    double total = 0;
    std::uint64_t positive = 0;
    for (auto s : sums) {
      total += static_cast<double>(s);
      positive += s > 0 ? 1 : 0;
    }
    const double t = static_cast<double>(trials);
    st.empirical_mean = total / t;
    st.empirical_pos_freq = static_cast<double>(positive) / t;
    // Agresti-Coull centre keeps the radius honest at frequencies 0 and 1.
    double adj = (static_cast<double>(positive) + 2.0) / (t + 4.0);
    st.radius = 3.0 * std::sqrt(adj * (1.0 - adj) / (t + 4.0));
    st.pz_holds = st.empirical_pos_freq + st.radius + 1e-12 >= st.pz_bound;
  }
  return st;
}

HnStatistics hn_upper_statistic(const SelectionModel& model, const TargetSet& target, int n,
                                std::optional<double> beta_bar, double epsilon) {
  require(model.dim() == 1, Errc::UnsupportedDimension, "targets live in [0,1]");
  require(n >= 1, Errc::InvalidArgument, "level must be >= 1");
  check_level(n);
  target.require_depth(n);
  HnStatistics st;
  st.level = n;
  st.epsilon = epsilon;

  const std::uint64_t cells = std::uint64_t{1} << n;
  if (target.kind() == TargetSet::Kind::Full) {
    st.balls = cells;
    st.gamma_total = 3 * cells - 2;
    st.gamma_max = n >= 1 ? 3 : 1;
  } else {
    // Greedy cover: each ball starts at the infimum of what is still uncovered.
    const Rational h = pow2(-n);
    const Rational scale = pow2(n);
    std::optional<Rational> start = target.min_point();
    constexpr std::uint64_t kMaxBalls = 1u << 24;
    while (start) {
      require(st.balls < kMaxBalls, Errc::BudgetExceeded, "cover needs more than 2^24 balls");
      Rational s = *start * scale;
      Integer lo = ceil_of(s) - 1;
      Integer hi = floor_of(s) + 1;
      if (lo < 0) lo = 0;
      if (hi > Integer(static_cast<unsigned long>(cells - 1))) hi = Integer(static_cast<unsigned long>(cells - 1));
      std::uint64_t gamma = Integer(hi - lo + 1).get_ui();
      st.gamma_total += gamma;
      st.gamma_max = std::max(st.gamma_max, gamma);
      ++st.balls;
      start = target.next_point_after(*start + h);
    }
  }

  st.p = exact_hit_prob(model, n);
  st.expected_h = st.p * static_cast<double>(st.gamma_total);
  st.gamma1_hat = st.p > 0.0 ? -std::log2(st.p) / n : std::numeric_limits<double>::infinity();
  if (beta_bar) {
    st.beta_bar = *beta_bar;
  } else if (n >= 3) {
    std::vector<std::pair<int, double>> counts;
    for (int j = std::max(1, n - 8); j <= n; ++j) counts.emplace_back(j, to_double(target.covering_count(j)));
    st.beta_bar = box_dim_estimate(counts).slope;
  } else {
    st.beta_bar = log2_of(target.covering_count(n)) / n;
  }
  if (st.p > 0.0) {
    st.exponent = n * (st.beta_bar - st.gamma1_hat + 2.0 * epsilon);
    st.constant = st.expected_h / std::exp2(st.exponent);
  } else {
    st.exponent = -std::numeric_limits<double>::infinity();
    st.constant = 0.0;
  }
  st.bound_holds = st.gamma_max <= st.neighbour_bound && st.constant <= static_cast<double>(st.neighbour_bound);
  return st;
}

BoxDim box_dim_estimate(const std::vector<std::pair<int, double>>& counts) {
  std::set<int> levels;
  for (const auto& c : counts) levels.insert(c.first);
  require(levels.size() >= 3, Errc::InvalidArgument, "box dimension needs at least 3 distinct levels");
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, v] : counts) {
    if (v > 0) pts.emplace_back(static_cast<double>(n), std::log2(v));
  }
  require(!pts.empty(), Errc::DegenerateInput, "all counts are zero");
  std::set<double> xs;
  for (const auto& p : pts) xs.insert(p.first);
  require(xs.size() >= 2, Errc::DegenerateInput, "fewer than two levels with non-zero counts");
  double mx = 0, my = 0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  BoxDim out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double rss = 0;
  for (const auto& [x, y] : pts) {
    double r = y - (out.intercept + out.slope * x);
    rss += r * r;
  }
  out.residual = std::sqrt(rss / static_cast<double>(pts.size()));
  out.used = pts.size();
  return out;
}

double lemma23_bound(int n, const Rational& beta, double exponent) {
  double shrink = std::exp2(-(Rational(beta * n).get_d()) - 1.0);
  double log_bound = n * std::log(2.0) + exponent * std::log1p(-shrink);
  return std::exp(log_bound);
}

Lemma23Result lemma23_coverage(const Rational& gamma0, const Rational& beta, int n, std::uint64_t trials,
                               const TrialRng& rng) {
  require(gamma0 >= 0 && gamma0 < 1, Errc::InvalidArgument, "gamma0 must lie in [0,1)");
  require(beta > 0 && beta < 1 - gamma0, Errc::InvalidArgument, "beta must lie in (0, 1 - gamma0)");
  require(n >= 1, Errc::InvalidArgument, "level must be >= 1");
  check_level(n);
  SelectionModel model(PointProcessSpec::prop14(gamma0));
  Lemma23Result out;
  out.level = n;
  out.block = model.block_count(n);
  require(out.block >= 1, Errc::InvalidArgument, "block at level " + std::to_string(n) + " is empty");
  out.trials = trials;
  out.bound_paper = lemma23_bound(n, beta, std::exp2(Rational((1 - gamma0) * n).get_d()));
  out.bound_actual = lemma23_bound(n, beta, static_cast<double>(out.block));

  // Q^beta for cell k is centred at (k + 1/2) 2^-n with length 2^(-n beta).
  // Every coverage condition reads j 2^-n <= 2^(-n beta) for an integer j,
  // i.e. j <= floor(2^(n (1 - beta))).
  const Integer reach_z = floor_exp2((1 - beta) * n);
  const std::uint64_t reach = reach_z.get_ui();
  const std::uint64_t cells = std::uint64_t{1} << n;
  auto covered = map_trials<std::uint8_t>(trials, rng.workers, [&](std::uint64_t i) -> std::uint8_t {
    Stream stream = rng.stream(i);
    LevelSelection sel = sample_level(model, n, stream);
    if (sel.chosen.empty()) return 0;
    if (2 * sel.chosen.front() + 1 > reach) return 0;
    for (std::size_t j = 1; j < sel.chosen.size(); ++j) {
      if (sel.chosen[j] - sel.chosen[j - 1] > reach) return 0;
    }
    if (2 * (cells - sel.chosen.back()) - 1 > reach) return 0;
    return 1;
  });
  for (auto c : covered) out.covered += c;
  const double t = static_cast<double>(std::max<std::uint64_t>(trials, 1));
  out.empirical_coverage = static_cast<double>(out.covered) / t;
  out.empirical_noncover = 1.0 - out.empirical_coverage;
  out.radius = binomial_radius(out.empirical_coverage, trials);
  out.bound_holds = out.empirical_noncover <= out.bound_actual + out.radius + 1e-12;
  return out;
}

CountingTrace prop14_counting(const Prop14CountingInput& in, std::size_t depth, std::uint64_t max_bits) {
  require(depth >= 1, Errc::InvalidArgument, "counting depth must be >= 1");
  require(in.t > 0 && in.t <= 1, Errc::InvalidArgument, "t must lie in (0,1]");
  require(in.n.size() >= depth + 1, Errc::InvalidArgument, "counting to depth K needs n_1..n_{K+1}");
  require(in.m.size() >= depth && in.tm.size() >= depth, Errc::InvalidArgument,
          "counting to depth K needs m_1..m_K and t_{m_1}..t_{m_K}");
  CountingTrace trace;
  trace.t = in.t;

  // A count held exactly while it fits, otherwise by its log2.
  struct Count {
    std::optional<Integer> exact;
    double log2 = 0;
  };
  auto from_exp2_floor = [&](const Rational& x, std::size_t k, const char* what) {
    Count c;
    if (x <= Rational(static_cast<long>(max_bits))) {
      Integer v = floor_exp2(x, max_bits + 1) - 2;
      require(v >= 1, Errc::SideConditionViolated,
              std::string(what) + " factor " + v.get_str() + " < 1 at k=" + std::to_string(k));
      c.log2 = log2_of(v);
      c.exact = std::move(v);
    } else {
      c.log2 = x.get_d();  // floor(2^x) - 2 = 2^x (1 - O(2^-x))
    }
    return c;
  };
  auto times = [&](const Count& a, const Count& b) {
    Count c;
    c.log2 = a.log2 + b.log2;
    if (a.exact && b.exact && c.log2 < static_cast<double>(max_bits)) c.exact = *a.exact * *b.exact;
    return c;
  };

  for (std::size_t k = 0; k < depth; ++k) {
    require(in.n[k] >= 1 && in.m[k] >= 1, Errc::InvalidArgument, "n_k and m_k must be positive");
    require(in.tm[k] > 0 && in.tm[k] < 1, Errc::InvalidArgument, "t_{m_k} must lie in (0,1)");
  }

  Integer block = in.n[0];  // M_k
  Count g;
  {
    Rational x = in.t * Rational(in.n[0]);
    Integer n1 = floor_exp2(x, max_bits + 1);
    require(n1 >= 1, Errc::SideConditionViolated, "N_1 = 0");
    g.log2 = log2_of(n1);
    g.exact = n1;
  }
  for (std::size_t k = 1; k <= depth; ++k) {
    const Integer& mk = in.m[k - 1];
    const Rational& tk = in.tm[k - 1];
    Rational need = Rational(block + 1) / tk;
    require(Rational(mk) > need, Errc::SideConditionViolated,
            "k=" + std::to_string(k) + ": m_k = " + mk.get_str() + " must exceed (M_k + 1)/t_{m_k} = " +
                std::to_string(need.get_d()));
    Count factor_f = from_exp2_floor(Rational(mk) * tk - Rational(block), k, "#F_k");
    Count f = times(factor_f, g);

    CountingRow row;
    row.k = k;
    row.f_count = f.exact;
    row.g_count = g.exact;
    row.log2_f = f.log2;
    row.log2_g = g.log2;
    row.ratio_f = f.log2 / mk.get_d();
    row.ratio_g = g.log2 / block.get_d();
    trace.rows.push_back(row);

    const Integer& next_n = in.n[k];
    Count factor_g = from_exp2_floor(in.t * Rational(next_n) - Rational(mk - block), k, "#G'_{k+1}");
    g = times(factor_g, f);
    block += next_n;
  }
  trace.ratio_f_tail = trace.rows.back().ratio_f;
  trace.ratio_g_tail = trace.rows.back().ratio_g;
  return trace;
}

Prop14CountingInput conforming_prop14_schedule(const Rational& gamma0, const Rational& t, std::int64_t n1,
                                               std::size_t depth, std::int64_t growth) {
  require(gamma0 > 0 && gamma0 < 1, Errc::InvalidArgument, "gamma0 must lie in (0,1)");
  require(n1 >= 1 && growth >= 2, Errc::InvalidArgument, "n_1 >= 1 and growth >= 2 required");
  Prop14CountingInput in;
  in.t = t;
  in.n.push_back(to_integer(n1));
  Integer block = to_integer(n1);
  for (std::size_t k = 1; k <= depth; ++k) {
    Rational tk = (1 - gamma0) * (1 - pow2(-static_cast<std::int64_t>(k) - 3));
    Integer mk = block * growth;
    Integer least = floor_of(Rational(block + 1) / tk) + 1;
    if (mk < least) mk = least;
    in.tm.push_back(tk);
    in.m.push_back(mk);
    Integer next = mk * growth;
    in.n.push_back(next);
    block += next;
  }
  return in;
}

SummabilityTrace prop13_summability(const Prop13Schedule& sch, std::size_t depth) {
  require(depth >= 1 && depth < sch.n.size(), Errc::DepthInsufficient,
          "schedule too short for summability depth " + std::to_string(depth));
  SummabilityTrace trace;
  init_mpfr_range();
  for (std::size_t k = 1; k <= depth; ++k) {
    SummabilityRow row;
    row.k = k;
    row.n = sch.n[k - 1];
    row.m = sch.m[k - 1];
    row.block_start = sch.block_start(k);
    row.log2_count = sch.count_exponent(k);
    const Rational& tk = sch.t[k - 1];
    const Rational mk_t = tk * to_integer(row.block_start);

    // log2 (n_k N_k l_k 2^(M_k t_k)) + 1
    Rational base = Rational(to_integer(row.log2_count - row.block_start)) + mk_t;
    row.log2_chain = 1.0 + std::log2(static_cast<double>(row.n)) + base.get_d();
    // chain <= 2^(1-k)  <=>  n_k <= 2^(-k - base)
    Integer limit = floor_exp2(Rational(-static_cast<long>(k)) - base, 1u << 20);
    bool chain_ok = to_integer(row.n) <= limit;

    // P_{M_k} and the cells of G_k it can hit.
    const std::int64_t mk = row.block_start;
    double log2_p = 0;
    Rational top_exp = mk_t;
    Rational prev_exp = k >= 2 ? Rational(sch.t[k - 2] * to_integer(sch.block_start(k - 1))) : Rational(0);
    bool have_count = top_exp < Rational(1 << 20);
    if (have_count) {
      Integer count = ceil_exp2(top_exp, 1u << 21) - ceil_exp2(prev_exp, 1u << 21);
      BigFloat c(Rational(count), 320), q(320L), p(320L);
      mpfr_set_si_2exp(q.get(), -1, -mk, MPFR_RNDN);  // -2^-M
      mpfr_log1p(q.get(), q.get(), MPFR_RNDN);
      mpfr_mul(q.get(), q.get(), c.get(), MPFR_RNDN);
      mpfr_expm1(p.get(), q.get(), MPFR_RNDN);
      mpfr_neg(p.get(), p.get(), MPFR_RNDN);
      mpfr_log2(p.get(), p.get(), MPFR_RNDN);
      log2_p = p.to_double();
    } else {
      // P <= C 2^-M <= (2^(M t) + 1) 2^-M
      log2_p = Rational(mk_t - to_integer(mk)).get_d() + 1e-9;
    }

    if (row.log2_count <= 22 && mk <= (1 << 16)) {
      auto levels = build_levels(sch.schedule, k);
      const Rational scale = pow2(mk);
      std::set<Integer> hit;
      for (const auto& iv : levels.back()) {
        // half-open cells with positive overlap
        Integer lo = floor_of(iv.left * scale);
        Integer hi = ceil_of(iv.right * scale) - 1;
        for (Integer j = lo; j <= hi; ++j) hit.insert(j);
      }
      row.cells = Integer(static_cast<unsigned long>(hit.size()));
      row.exact = have_count;
      row.log2_expected = log2_p + log2_of(*row.cells);
    } else {
      row.log2_expected = log2_p + 1.0 + static_cast<double>(row.log2_count);  // at most 2 cells per interval
    }
    row.chain_holds = chain_ok && row.log2_expected <= row.log2_chain;
    trace.partial_sum += std::exp2(row.log2_expected);
    trace.all_hold = trace.all_hold && row.chain_holds;
    trace.rows.push_back(row);
  }
  return trace;
}

}  // namespace fhl
