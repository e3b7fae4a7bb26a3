#include <doctest.h>

#include "support.hpp"

#include <cmath>

#include "correlation.hpp"
#include "error.hpp"
#include "grid.hpp"
#include "rng.hpp"

using namespace fhl;

namespace {
// one prop13 block at n = 2 with C_2 = 3 points
PointProcessSpec three_points() { return PointProcessSpec::prop13({2}, {Q(9, 10)}); }
}  // namespace

TEST_CASE("exact point-process covariance") {
  auto spec = three_points();
  REQUIRE(block_count(spec, 2) == 3);
  auto c = exact_pp_cov(spec, 2, make_cube(2, {0}), make_cube(2, {3}));
  REQUIRE(c.exact.has_value());
  CHECK(*c.exact == Q(18, 64) - Q(37, 64) * Q(37, 64));
  CHECK(c.value == doctest::Approx(-0.052979).epsilon(1e-4));
  CHECK(pp_joint_exact(2, 3, false) == Q(18, 64));

  auto self = exact_pp_cov(spec, 2, make_cube(2, {1}), make_cube(2, {1}));
  CHECK(*self.exact == Q(37, 64) * Q(27, 64));
  CHECK(self.value == doctest::Approx(0.243896).epsilon(1e-4));

  // adjacent closed cubes share an endpoint, which has probability zero
  auto adj = exact_pp_cov(spec, 2, make_cube(2, {1}), make_cube(2, {2}));
  CHECK(*adj.exact == *c.exact);

  auto empty = exact_pp_cov_count(5, 0, 1, 2);
  CHECK(empty.value == 0);
  CHECK(exact_pp_cov_count(5, 0, 3, 3).value == 0);
}

TEST_CASE("empirical covariance") {
  TrialRng rng{11, stream_tag("cov"), 2};
  SelectionModel pp(three_points());
  auto est = empirical_cov(pp, 2, {{0, 3}, {1, 1}}, 100000, rng);
  REQUIRE(est.size() == 2);
  CHECK(std::abs(est[0].value - (-0.0529785)) <= est[0].radius);
  CHECK(std::abs(est[1].value - 0.2438965) <= est[1].radius);
  CHECK(est[0].source() == "monte_carlo");

  SelectionModel bern(BernoulliSpec::power_law(1));  // P_2 = 1/4
  auto b = empirical_cov(bern, 2, {{0, 2}, {1, 1}}, 100000, rng);
  CHECK(std::abs(b[0].value) <= b[0].radius);
  CHECK(std::abs(b[1].value - 3.0 / 16) <= b[1].radius);
  CHECK_THROWS_AS(empirical_cov(bern, 2, {{0, 1}}, 10, rng), Error);
}

TEST_CASE("sign sweep") {
  auto s = pp_cov_sign_sweep(8, 256);
  CHECK(s.all_negative);
  CHECK(s.configurations == 8u * 256u);
}

TEST_CASE("f(n, eps) and delta") {
  SelectionModel bern(BernoulliSpec::power_law(1));
  auto r = f_and_delta(bern, 2, 2, Q(1, 1));
  CHECK(r.levels.at(0).f == 1);
  CHECK(r.delta_est == 0);
  // self covariance P(1-P) >= eps P^2 iff eps <= (1-P)/P = 3 at P = 1/4
  CHECK(f_and_delta(bern, 2, 2, Q(3, 1)).levels.at(0).f == 1);
  CHECK(f_and_delta(bern, 2, 2, Q(4, 1)).levels.at(0).f == 0);

  SelectionModel pp(three_points());
  CHECK(f_and_delta(pp, 2, 2, Q(1, 10)).levels.at(0).f == 1);

  SelectionModel p14(PointProcessSpec::prop14(Q(1, 2)));
  auto d = f_and_delta(p14, 8, 16, Q(1, 2));
  CHECK(d.delta_est <= 0.05);
  for (const auto& lv : d.levels) CHECK(lv.f == 1);

  TrialRng rng{3, stream_tag("corr"), 2};
  auto e = f_and_delta_empirical(bern, 3, 4, Q(1, 1), 20000, rng);
  for (const auto& lv : e.levels) {
    CHECK(lv.f == 1);
    CHECK(lv.source == "monte_carlo");
  }
  // at P = 1/32 the threshold eps P^2 sits inside the sampling noise
  try {
    f_and_delta_empirical(bern, 5, 5, Q(1, 2), 2000, rng);
    FAIL("expected InsufficientPrecision");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::InsufficientPrecision);
  }
}
