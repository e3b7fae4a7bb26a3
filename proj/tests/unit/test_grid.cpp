#include <doctest.h>

#include "support.hpp"

#include <vector>

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
}  // namespace

TEST_CASE("make_cube extents") {
  Cube root = make_cube(0, {0});
  CHECK(root.lower() == 0);
  CHECK(root.upper() == 1);
  Cube q = make_cube(3, {5});
  CHECK(q.lower() == Q(5, 8));
  CHECK(q.upper() == Q(6, 8));
  CHECK(code_of([] { make_cube(2, {4}); }) == Errc::CoordOutOfRange);
  CHECK(make_cube(3, {5}, Closure::HalfOpen).extent().right_closed == false);
  CHECK(make_cube(2, {1, 3}).volume() == Q(1, 16));
}

TEST_CASE("navigation") {
  CHECK(parent(make_cube(3, {5})) == make_cube(2, {2}));
  auto ch = children(make_cube(1, {0}));
  REQUIRE(ch.size() == 2);
  CHECK(ch[0] == make_cube(2, {0}));
  CHECK(ch[1] == make_cube(2, {1}));
  CHECK(code_of([] { parent(make_cube(0, {0})); }) == Errc::NoParent);
  CHECK(children(make_cube(1, {1, 0})).size() == 4);
  for (std::uint64_t k = 0; k < 8; ++k) {
    Cube c = make_cube(3, {k});
    auto sib = children(parent(c));
    CHECK(std::find(sib.begin(), sib.end(), c) != sib.end());
  }
}

TEST_CASE("min_distance") {
  CHECK(min_distance(make_cube(2, {0}), make_cube(2, {3})) == Q(1, 2));
  CHECK(min_distance(make_cube(2, {0}), make_cube(2, {1})) == 0);
  CHECK(min_distance(make_cube(5, {9}), make_cube(5, {9})) == 0);
  CHECK(code_of([] { min_distance(make_cube(2, {0}), make_cube(3, {0})); }) == Errc::LevelMismatch);
}

TEST_CASE("enlarge_beta") {
  auto a = enlarge_beta(make_cube(2, {1}), Q(1, 2));
  CHECK(a.left == Q(1, 8));
  CHECK(a.right == Q(5, 8));
  auto root = enlarge_beta(make_cube(0, {0}), Q(1, 3));
  CHECK(root.left == 0);
  CHECK(root.right == 1);
  auto c = enlarge_beta(make_cube(4, {0}), Q(1, 4));
  CHECK(c.left == Q(1, 32) - Q(1, 4));
  CHECK(c.right == Q(1, 32) + Q(1, 4));
  // non-integer n*beta: 2^(-3/2) to 256 bits
  auto d = enlarge_beta(make_cube(3, {0}), Q(1, 2));
  CHECK(d.width().get_d() == doctest::Approx(0.35355339059327373));
}

TEST_CASE("half-open cubes tile [0,1)") {
  Rational x(3, 8);
  std::vector<Rational> pt{x};
  Cube q = locate(3, pt);
  CHECK(q.coord() == 3);
  CHECK(q.contains(pt));
  CHECK_FALSE(make_cube(3, {2}, Closure::HalfOpen).contains(pt));
  CHECK(make_cube(3, {2}, Closure::Closed).contains(pt));
  CHECK(cube_from_linear(2, 2, 7).coord(0) == 1);
  CHECK(cube_from_linear(2, 2, 7).coord(1) == 3);
  CHECK(cube_from_linear(2, 2, 7).linear_index() == 7);
}
