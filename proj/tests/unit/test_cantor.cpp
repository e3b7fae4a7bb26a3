#include <doctest.h>

#include "support.hpp"

#include <random>
#include <set>

#include "cantor.hpp"
#include "error.hpp"
#include "grid.hpp"

using namespace fhl;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc{};
}

// Cells of level n meeting G_K, by direct enumeration of the generation-K
// intervals. open: positive overlap or a degenerate point; closed: contact.
std::pair<Integer, Integer> brute_counts(const CantorLevels& lv, int n) {
  std::set<std::uint64_t> open, closed;
  Rational h = pow2(-n);
  std::uint64_t cells = std::uint64_t{1} << n;
  for (const auto& iv : lv.back()) {
    std::int64_t lo = floor_of(iv.left / h).get_si() - 1;
    std::int64_t hi = ceil_of(iv.right / h).get_si() + 1;
    for (std::int64_t k = std::max<std::int64_t>(lo, 0); k <= hi && k < static_cast<std::int64_t>(cells); ++k) {
      Rational x = h * Rational(k), y = x + h;
      if (iv.left < y && iv.right > x) open.insert(static_cast<std::uint64_t>(k));
      if (iv.left <= y && iv.right >= x) closed.insert(static_cast<std::uint64_t>(k));
    }
  }
  return {Integer(static_cast<unsigned long>(open.size())), Integer(static_cast<unsigned long>(closed.size()))};
}

}  // namespace

TEST_CASE("schedule invariants") {
  auto s = schedule_uniform(4, Q(1, 16), 3);
  CHECK(s.interval_count(2).value() == 16);
  CHECK(s.interval_length(2).value() == Q(1, 256));
  CHECK(s.depth_for_level(8) == 2u);
  CHECK(s.depth_for_level(9) == 3u);
  CHECK(code_of([] { schedule_uniform(1, Q(1, 2), 1); }) == Errc::DegenerateGeneration);
  CHECK(code_of([] { schedule_uniform(3, Q(1, 2), 1); }) == Errc::DegenerateGeneration);
  CHECK_NOTHROW(schedule_uniform(2, Q(1, 2), 1));  // children touch
}

TEST_CASE("prop13 tuned schedule") {
  auto s = schedule_prop13(prop13_default_t(7), 2, 6);
  std::vector<std::int64_t> n = {14, 67, 1685, 173185, 78564289, 151258144801, 1201160848988611};
  std::vector<std::int64_t> m = {2, 10, 195, 10706, 2449657, 2362178200, 9382886813303};
  CHECK(s.n == n);
  CHECK(s.m == m);
  CHECK(s.block_start(1) == 14);
  CHECK(s.block_start(2) == 81);
  CHECK(s.count_exponent(2) == 12);

  // both defining inequalities, substituted back exactly, and minimality
  std::int64_t sum_m = 0, big_m = 0;
  for (std::size_t k = 1; k <= s.n.size(); ++k) {
    const Rational& t = s.t[k - 1];
    sum_m += s.m[k - 1];
    big_m += s.n[k - 1];
    // n_k N_k l_k 2^(M_k t_k) <= 2^-k  <=>  n_k <= 2^(M_k (1 - t_k) - sum m - k)
    auto limit = [&](std::int64_t nk) {
      Rational x = Rational(big_m - s.n[k - 1] + nk) * (1 - t) - Rational(sum_m) - Rational(static_cast<long>(k));
      return floor_exp2(x, 1u << 16);
    };
    CHECK(Integer(static_cast<long>(s.n[k - 1])) <= limit(s.n[k - 1]));
    std::int64_t floor_n = std::max(s.m[k - 1], k > 1 ? s.n[k - 2] : 0);
    if (s.n[k - 1] - 1 > floor_n) CHECK(Integer(static_cast<long>(s.n[k - 1] - 1)) > limit(s.n[k - 1] - 1));
    if (k < s.n.size()) {
      // 2^(m_{k+1}(1 - t_k)) N_k l_k^t_k >= 1, smallest such m_{k+1} > m_k
      auto ok = [&](std::int64_t mk1) { return Rational(mk1) * (1 - t) + Rational(sum_m) - t * Rational(big_m) >= 0; };
      CHECK(ok(s.m[k]));
      if (s.m[k] - 1 > s.m[k - 1]) CHECK_FALSE(ok(s.m[k] - 1));
    }
  }
}

TEST_CASE("prop13 n_1 grows with t_1") {
  std::int64_t prev = 0;
  for (auto t : {Q(1, 2), Q(7, 10), Q(9, 10)}) {
    auto s = schedule_prop13({t, Q(99, 100)}, 2, 1);
    CHECK(s.n[0] >= prev);
    prev = s.n[0];
  }
  CHECK(schedule_prop13({Q(1, 2), Q(99, 100)}, 2, 1).n[0] == 14);
}

TEST_CASE("prop13 search overflow") {
  // t close to 1 pushes n past 2^62 within a few generations
  CHECK(code_of([] { schedule_prop13(prop13_default_t(12), 2, 11); }) == Errc::SearchOverflow);
}

TEST_CASE("prop14 schedule") {
  auto a = schedule_prop14(Q(1, 2), {4}, 3);
  for (std::size_t k = 1; k <= 3; ++k) {
    CHECK(a.schedule.generation(k).count.value() == 4);
    CHECK(a.schedule.interval_length(k).value() == pow2(-4 * static_cast<std::int64_t>(k)));
  }
  auto b = schedule_prop14(Q(3, 10), {4}, 1);
  CHECK(b.schedule.generation(1).count.value() == 2);
  CHECK(code_of([] { schedule_prop14(Q(1, 10), {4}, 1); }) == Errc::DegenerateGeneration);
}

TEST_CASE("build_levels") {
  auto two = build_levels(schedule_uniform(2, Q(1, 4), 1), 1);
  REQUIRE(two.size() == 1);
  REQUIRE(two[0].size() == 2);
  CHECK(two[0][0] == closed_interval(0, Q(1, 4)));
  CHECK(two[0][1] == closed_interval(Q(3, 4), 1));

  auto p14 = build_levels(schedule_prop14(Q(1, 2), {4}, 1).schedule, 1);
  REQUIRE(p14[0].size() == 4);
  CHECK(p14[0][0] == closed_interval(0, Q(1, 16)));
  CHECK(p14[0][1] == closed_interval(Q(5, 16), Q(3, 8)));
  CHECK(p14[0][3] == closed_interval(Q(15, 16), 1));

  auto deep = build_levels(schedule_uniform(3, Q(1, 5), 3), 3);
  for (std::size_t k = 1; k < deep.size(); ++k) {
    CHECK(deep[k].size() == deep[k - 1].size() * 3);
    for (const auto& iv : deep[k]) {
      int parents = 0;
      for (const auto& p : deep[k - 1]) parents += (p.left <= iv.left && iv.right <= p.right);
      CHECK(parents == 1);
    }
    for (std::size_t i = 1; i < deep[k].size(); ++i) CHECK(deep[k][i - 1].right <= deep[k][i].left);
  }
  CHECK(export_levels(two) == "generation\tindex\tleft\tright\n1\t0\t0/1\t1/4\n1\t1\t3/4\t1/1\n");
  CHECK(code_of([] { build_levels(schedule_uniform(4, Q(1, 16), 20), 20, 1000); }) == Errc::BudgetExceeded);
}

TEST_CASE("FWW dimension formulas") {
  auto u = fww_dims(schedule_uniform(4, Q(1, 16), 51), 50);
  for (std::size_t k = 1; k <= 50; ++k) {
    REQUIRE(u.hdim_exact[k - 1].has_value());
    CHECK(*u.hdim_exact[k - 1] == Q(static_cast<long>(2 * (k + 1)), static_cast<long>(4 * k)));
    CHECK(*u.pdim_exact[k - 1] == Q(static_cast<long>(2 * (k + 1)), static_cast<long>(4 * k + 2)));
  }
  CHECK(std::abs(u.hdim_limit_est - 0.5) <= 0.02);
  CHECK(std::abs(u.pdim_limit_est - 0.5) <= 0.02);

  auto p14 = fww_dims(schedule_prop14(Q(1, 2), {4}, 51).schedule, 50);
  CHECK(std::abs(p14.hdim_limit_est - 0.5) <= 0.02);

  auto p13 = schedule_prop13(prop13_default_t(7), 2, 6);
  auto d = fww_dims(p13.schedule, 6);
  for (std::size_t k = 1; k <= 6; ++k) {
    REQUIRE(d.pdim_exact[k - 1].has_value());
    CHECK(*d.pdim_exact[k - 1] >= p13.t[k - 1]);
  }
  CHECK(code_of([] { fww_dims(schedule_uniform(4, Q(1, 16), 5), 5); }) == Errc::DepthInsufficient);
}

TEST_CASE("covering counts: closed forms") {
  for (int n : {0, 1, 5, 20}) CHECK(TargetSet::full().covering_count(n) == pow2_int(static_cast<std::uint64_t>(n)));
  for (int n : {1, 7, 30}) CHECK(TargetSet::point(0).covering_count(n) == 1);
  auto g = TargetSet::cantor(schedule_uniform(4, Q(1, 16), 2), 2);
  CHECK(g.covering_count(8) == 16);
  auto deep = TargetSet::cantor(schedule_uniform(4, Q(1, 16), 4), 4);
  CHECK(deep.covering_count(4) == 4);
  CHECK(deep.covering_count(8) == 16);
  CHECK(deep.covering_count(12) == 64);
  CHECK(deep.covering_count(16) == 256);
  CHECK(code_of([&] { g.require_depth(9); }) == Errc::DepthInsufficient);
  CHECK_NOTHROW(g.require_depth(8));
}

TEST_CASE("covering counts match brute force on random schedules") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Generation> gens;
    std::size_t depth = 1 + rng() % 3;
    for (std::size_t k = 0; k < depth; ++k) {
      long c = 2 + static_cast<long>(rng() % 4);
      long q = c + static_cast<long>(rng() % 12);  // ratio p/q with c * p <= q
      long p = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(q / c));
      gens.push_back(Generation{ScaledInt::of(c), ScaledRational::of(Q(p, q))});
    }
    CantorSchedule s(gens);
    auto lv = build_levels(s, depth);
    auto t = TargetSet::cantor(s, depth);
    for (int n = 0; n <= 12; ++n) {
      auto [open, closed] = brute_counts(lv, n);
      CHECK(t.covering_count(n) == open);
      CHECK(t.closed_count(n) == closed);
      CHECK(Integer(static_cast<unsigned long>(t.covering_cells(n).size())) == open);
    }
  }
}

TEST_CASE("intersects follows closure semantics") {
  auto g = TargetSet::cantor(schedule_uniform(2, Q(1, 4), 1), 1);
  CHECK(g.intersects(make_cube(2, {0}, Closure::Closed)));
  CHECK_FALSE(g.intersects(make_cube(2, {1}, Closure::HalfOpen)));
  CHECK(g.intersects(make_cube(2, {1}, Closure::Closed)));
  CHECK(g.intersects(make_cube(2, {3}, Closure::HalfOpen)));
  auto pt = TargetSet::point(1);
  CHECK(pt.intersects(make_cube(3, {7}, Closure::HalfOpen)));
}

TEST_CASE("next_point_after walks the target left to right") {
  auto g = TargetSet::cantor(schedule_uniform(2, Q(1, 4), 2), 2);
  CHECK(g.min_point() == Rational(0));
  CHECK(g.next_point_after(Q(1, 16)) == Q(3, 16));
  CHECK(g.next_point_after(Q(1, 8)) == Q(3, 16));
  CHECK(g.next_point_after(Q(1, 4)) == Q(3, 4));
  CHECK_FALSE(g.next_point_after(1).has_value());
}
