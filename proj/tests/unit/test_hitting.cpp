#include <doctest.h>

#include "support.hpp"

#include <cmath>

#include "error.hpp"
#include "hitting.hpp"

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
TrialRng rng_for(const char* tag) { return TrialRng{2024, stream_tag(tag), 2}; }
}  // namespace

TEST_CASE("window-hit oracle and Monte Carlo") {
  SelectionModel bern(BernoulliSpec::power_law(Q(1, 2)));
  auto w = window_hit_probability(bern, TargetSet::point(0), 4, 6, 10000, rng_for("w"));
  REQUIRE(w.oracle.has_value());
  double expect = 1 - (1 - std::pow(2, -2)) * (1 - std::pow(2, -2.5)) * (1 - std::pow(2, -3));
  CHECK(*w.oracle == doctest::Approx(expect).epsilon(1e-12));
  CHECK(*w.oracle == doctest::Approx(0.4597597).epsilon(1e-6));
  CHECK(w.agrees);

  SelectionModel one(BernoulliSpec::power_law(0));
  auto all = window_hit_probability(one, TargetSet::full(), 2, 3, 100, rng_for("w1"));
  CHECK(*all.oracle == 1);
  CHECK(all.empirical == 1);
  SelectionModel zero(BernoulliSpec::per_level({0, 0, 0, 0}));
  auto none = window_hit_probability(zero, TargetSet::full(), 2, 3, 100, rng_for("w0"));
  CHECK(*none.oracle == 0);
  CHECK(none.empirical == 0);

  SelectionModel p14(PointProcessSpec::prop14(Q(1, 2)));
  auto g = TargetSet::cantor(schedule_uniform(2, Q(1, 4), 4), 4);
  auto pw = window_hit_probability(p14, g, 4, 8, 20000, rng_for("pp"));
  CHECK(pw.agrees);
  CHECK(code_of([&] { window_hit_probability(bern, g, 4, 9, 10, rng_for("x")); }) == Errc::DepthInsufficient);
}

TEST_CASE("S_n statistics") {
  SelectionModel b1(BernoulliSpec::power_law(1));
  auto s = sn_statistics(b1, TargetSet::full(), 3, 20000, rng_for("sn"));
  CHECK(s.exact_mean == doctest::Approx(1));
  CHECK(s.exact_var == doctest::Approx(7.0 / 8));
  REQUIRE(s.pz_bound_q.has_value());
  CHECK(*s.pz_bound_q == Q(8, 15));
  CHECK(s.exact_pos == doctest::Approx(1 - std::pow(7.0 / 8, 8)));
  CHECK(s.exact_pos >= s.pz_bound);
  CHECK(s.pz_holds);
  CHECK(std::abs(s.empirical_pos_freq - s.exact_pos) <= s.radius);

  SelectionModel one(BernoulliSpec::power_law(0));
  auto c = sn_statistics(one, TargetSet::full(), 4, 100, rng_for("sn1"));
  CHECK(c.pz_bound == 1);
  CHECK(c.empirical_pos_freq == 1);
  CHECK(c.empirical_mean == 16);
}

TEST_CASE("H_n statistic") {
  SelectionModel bern(BernoulliSpec::power_law(Q(1, 2)));
  auto h = hn_upper_statistic(bern, TargetSet::full(), 10);
  double scale = std::pow(2.0, 10 * 0.5);
  CHECK(h.expected_h <= 3 * scale);
  CHECK(h.expected_h >= scale / 3);
  auto pt = hn_upper_statistic(bern, TargetSet::point(Q(1, 3)), 10);
  CHECK(pt.balls == 1);
  CHECK(pt.expected_h <= 3 * exact_hit_prob(bern, 10));
  SelectionModel zero(BernoulliSpec::per_level(std::vector<double>(12, 0.0)));
  CHECK(hn_upper_statistic(zero, TargetSet::full(), 10).expected_h == 0);
}

TEST_CASE("box-counting slope") {
  std::vector<std::pair<int, double>> full, flat, cantor;
  for (int n = 1; n <= 10; ++n) {
    full.emplace_back(n, std::pow(2.0, n));
    flat.emplace_back(n, 1.0);
  }
  CHECK(box_dim_estimate(full).slope == doctest::Approx(1));
  CHECK(box_dim_estimate(flat).slope == doctest::Approx(0));
  auto g = TargetSet::cantor(schedule_uniform(4, Q(1, 16), 4), 4);
  for (int n : {4, 8, 12, 16}) cantor.emplace_back(n, g.covering_count(n).get_d());
  CHECK(std::abs(box_dim_estimate(cantor).slope - 0.5) <= 0.01);
  CHECK(code_of([] { box_dim_estimate({{1, 2.0}, {2, 4.0}}); }) == Errc::InvalidArgument);
  CHECK(code_of([] { box_dim_estimate({{1, 0.0}, {2, 0.0}, {3, 0.0}}); }) == Errc::DegenerateInput);
}

TEST_CASE("Lemma 2.3 bound and coverage") {
  // 2^20 (1 - 2^-6)^1024, evaluated independently in long double
  long double direct = std::ldexp(1.0L, 20) * std::pow(1.0L - 1.0L / 64, 1024.0L);
  CHECK(lemma23_bound(20, Q(1, 4), 1024) == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
  CHECK(lemma23_bound(20, Q(1, 4), 1024) == doctest::Approx(0.10399900739391373).epsilon(1e-12));
  CHECK(lemma23_bound(30, Q(1, 4), 32768) == doctest::Approx(5e-31).epsilon(0.15));
  auto r = lemma23_coverage(Q(1, 2), Q(1, 4), 16, 200, rng_for("l23"));
  CHECK(r.bound_holds);
  CHECK(code_of([] { lemma23_coverage(Q(1, 2), Q(0, 1), 10, 10, rng_for("x")); }) == Errc::InvalidArgument);
  CHECK(code_of([] { lemma23_coverage(Q(1, 2), Q(1, 2), 10, 10, rng_for("x")); }) == Errc::InvalidArgument);
}

TEST_CASE("Prop 1.4 counting") {
  Prop14CountingInput in{Q(1, 2), {4, 100}, {20}, {Q(2, 5)}};
  auto tr = prop14_counting(in, 1);
  REQUIRE(tr.rows.size() == 1);
  CHECK(*tr.rows[0].g_count == 4);
  CHECK(*tr.rows[0].f_count == 56);
  // side condition m_1 > (M_1 + 1) / t_m1 = 12.5 fails at m_1 = 12
  Prop14CountingInput badm{Q(1, 2), {4, 100}, {12}, {Q(2, 5)}};
  CHECK(code_of([&] { prop14_counting(badm, 1); }) == Errc::SideConditionViolated);

  auto conf = conforming_prop14_schedule(Q(1, 4), Q(1, 2), 4, 20);
  auto ct = prop14_counting(conf, 20);
  REQUIRE(ct.rows.size() == 20);
  for (const auto& row : ct.rows) {
    CHECK(row.log2_f > 0);
    CHECK(row.log2_g > 0);
  }
  CHECK(std::abs(ct.rows.back().ratio_f - 0.75) <= 0.05);
  CHECK(std::abs(ct.rows.back().ratio_g - 0.5) <= 0.05);
}

TEST_CASE("Prop 1.3 summability chain") {
  auto s = schedule_prop13(prop13_default_t(7), 2, 6);
  auto tr = prop13_summability(s, 6);
  REQUIRE(tr.rows.size() == 6);
  CHECK(tr.rows[0].exact);
  CHECK(*tr.rows[0].cells == 4);
  double sum = 0;
  for (const auto& r : tr.rows) {
    CHECK(r.log2_expected <= 1.0 - static_cast<double>(r.k));
    CHECK(r.chain_holds);
    sum += std::exp2(r.log2_expected);
  }
  CHECK(tr.partial_sum == doctest::Approx(sum));
  CHECK(tr.partial_sum <= 2.0);
  CHECK(tr.all_hold);
}
