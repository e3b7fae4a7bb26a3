#include <doctest.h>

#include "support.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"
#include "rng.hpp"
#include "selection.hpp"

using namespace fhl;

TEST_CASE("block counts") {
  auto p14 = PointProcessSpec::prop14(Q(1, 2));
  CHECK(block_count(p14, 4) == 1);   // ceil(4) - ceil(2^1.5)
  CHECK(block_count(p14, 10) == 9);  // 32 - 23
  // prop13 with M_1 = 14, t_1 = 1/2; b_n = 1 before the first block
  auto p13 = PointProcessSpec::prop13({14, 67}, {Q(1, 2), Q(3, 4)});
  CHECK(block_count(p13, 13) == 0);
  CHECK(block_count(p13, 14) == 127);
  CHECK(block_count(p13, 15) == 0);
  CHECK(block_count(p13, 80) == 0);
  // M_2 = 81: C_81 = ceil(2^(81 * 3/4)) - ceil(2^7)
  CHECK(block_count_exact(p13, 81) == ceil_exp2(Q(243, 4)) - 128);
}

TEST_CASE("exact hit probabilities") {
  CHECK(pp_hit_prob_exact(2, 3) == Q(37, 64));
  CHECK(pp_hit_prob(2, 3) == doctest::Approx(0.578125));
  CHECK(pp_hit_prob_exact(5, 0) == 0);
  SelectionModel bern(BernoulliSpec::power_law(Q(1, 2)));
  CHECK(exact_hit_prob(bern, 4) == 0.25);
  CHECK(exact_hit_prob_rational(bern, 4) == Q(1, 4));
  CHECK_FALSE(exact_hit_prob_rational(bern, 3).has_value());
  SelectionModel p14(PointProcessSpec::prop14(Q(1, 2)));
  CHECK(exact_hit_prob(p14, 10) == doctest::Approx(0.0087548).epsilon(1e-4));
}

TEST_CASE("sample_level extremes") {
  Stream s(1, 2, 3);
  SelectionModel one(BernoulliSpec::power_law(0));
  CHECK(sample_level(one, 5, s).chosen.size() == 32);
  SelectionModel zero(BernoulliSpec::per_level({0, 0, 0, 0, 0}));
  CHECK(sample_level(zero, 5, s).chosen.empty());
  SelectionModel two_d(BernoulliSpec::power_law(0, 2));
  CHECK(sample_level(two_d, 3, s).chosen.size() == 64);
}

TEST_CASE("point process mean |chosen| at n = 2, C = 3") {
  // one prop13 block at n = 2 with t = 9/10: C_2 = ceil(2^1.8) - 1 = 3
  auto spec = PointProcessSpec::prop13({2}, {Q(9, 10)});
  REQUIRE(block_count(spec, 2) == 3);
  SelectionModel m(spec);
  const int T = 100000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < T; ++i) {
    Stream s(42, stream_tag("mean"), static_cast<std::uint64_t>(i));
    double k = static_cast<double>(sample_level(m, 2, s).chosen.size());
    sum += k;
    sum2 += k * k;
  }
  double mean = sum / T;
  double sd = std::sqrt(sum2 / T - mean * mean);
  CHECK(std::abs(mean - 2.3125) <= 3 * sd / std::sqrt(double(T)));
}

TEST_CASE("inclusion frequency converges to exact_hit_prob") {
  SelectionModel bern(BernoulliSpec::power_law(Q(1, 2)));
  SelectionModel p14(PointProcessSpec::prop14(Q(1, 2)));
  const int T = 100000;
  for (const SelectionModel* m : {&bern, &p14}) {
    int n = 4;
    std::uint64_t cells[] = {5};
    int hits = 0;
    for (int i = 0; i < T; ++i) {
      Stream s(9, stream_tag("incl"), static_cast<std::uint64_t>(i));
      hits += static_cast<int>(sample_among(*m, n, cells, s).size());
    }
    double p = exact_hit_prob(*m, n);
    CHECK(std::abs(hits / double(T) - p) <= 3 * std::sqrt(p * (1 - p) / T));
  }
}

TEST_CASE("point-process levels are independent") {
  SelectionModel p14(PointProcessSpec::prop14(Q(1, 2)));
  const int T = 100000;
  double a = 0, b = 0, ab = 0;
  std::uint64_t cell[] = {0};
  for (int i = 0; i < T; ++i) {
    Stream s(5, stream_tag("indep"), static_cast<std::uint64_t>(i));
    double x = static_cast<double>(sample_among(p14, 3, cell, s).size());
    double y = static_cast<double>(sample_among(p14, 4, cell, s).size());
    a += x;
    b += y;
    ab += x * y;
  }
  a /= T;
  b /= T;
  double cov = ab / T - a * b;
  double sd = std::sqrt(a * (1 - a) * b * (1 - b));
  CHECK(std::abs(cov) <= 3 * sd / std::sqrt(double(T)) + 1e-12);
}

TEST_CASE("index estimates") {
  SelectionModel b07(BernoulliSpec::power_law(Q(7, 10)));
  for (const auto& e : index_estimates(b07, 1, 20)) {
    CHECK(e.gamma1 == doctest::Approx(0.7));
    CHECK(e.gamma2 == doctest::Approx(0.7));
  }
  SelectionModel p14(PointProcessSpec::prop14(Q(1, 2)));
  auto e = index_estimates(p14, 10, 10).at(0);
  CHECK(e.gamma1 == doctest::Approx(0.6836).epsilon(1e-3));
  // prop14 trend bound |g(n) - g0| <= (log2 C_n - n(1 - g0) + 2) / n, checked
  // in absolute value since log2 C_n sits just below n(1 - g0)
  for (const auto& r : index_estimates(p14, 2, 30)) {
    double c = static_cast<double>(block_count(p14.point_process(), r.level));
    if (c == 0) continue;
    double bound = (std::abs(std::log2(c) - r.level * 0.5) + 2) / r.level;
    CHECK(std::abs(r.gamma1 - 0.5) <= bound);
  }
  SelectionModel p13(PointProcessSpec::prop13({14, 67}, {Q(1, 2), Q(3, 4)}));
  auto inside = index_estimates(p13, 15, 15).at(0);
  CHECK(std::isinf(inside.gamma1));
  CHECK(inside.gamma1 > 0);
}

TEST_CASE("invalid specs") {
  CHECK_THROWS_AS(BernoulliSpec::power_law(-1), Error);
  CHECK_THROWS_AS(PointProcessSpec::prop14(Q(3, 2)), Error);
  CHECK_THROWS_AS(BernoulliSpec::per_level({0.5, 1.5}), Error);
}
