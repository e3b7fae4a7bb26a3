#include "grid.hpp"

#include <sstream>

#include "error.hpp"
#include "limits.hpp"

namespace fhl {

Rational Cube::lower(std::size_t axis) const {
  return Rational(Integer(static_cast<unsigned long>(coord(axis)))) * side();
}

Rational Cube::upper(std::size_t axis) const {
  return Rational(Integer(static_cast<unsigned long>(coord(axis))) + 1) * side();
}

RationalInterval Cube::extent(std::size_t axis) const {
  return RationalInterval{lower(axis), upper(axis), true, closure_ == Closure::Closed};
}

bool Cube::contains(std::span<const Rational> point) const {
  require(point.size() == dim(), Errc::InvalidArgument, "point dimension does not match cube");
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!extent(i).contains(point[i])) return false;
  }
  return true;
}

Cube Cube::with_closure(Closure c) const { return Cube(level_, coords_, c); }

std::uint64_t Cube::linear_index() const {
  std::uint64_t idx = 0;
  for (auto k : coords_) idx = (idx << level_) | k;
  return idx;
}

Cube make_cube(int level, std::vector<std::uint64_t> coords, Closure closure) {
  check_level(level);
  require(!coords.empty(), Errc::InvalidArgument, "cube needs at least one coordinate");
  require(static_cast<long>(coords.size()) * level <= kHardLevelCap, Errc::LevelCapExceeded,
          "level * dimension exceeds 62 bits");
  const std::uint64_t limit = std::uint64_t{1} << level;
  for (auto k : coords) {
    if (k >= limit) {
      fail(Errc::CoordOutOfRange, "coordinate " + std::to_string(k) + " not in [0, " +
                                      std::to_string(limit - 1) + "] at level " + std::to_string(level));
    }
  }
  return Cube(level, std::move(coords), closure);
}

Cube cube_from_linear(int level, std::size_t dim, std::uint64_t index, Closure closure) {
  std::vector<std::uint64_t> coords(dim);
  const std::uint64_t mask = (std::uint64_t{1} << level) - 1;
  for (std::size_t i = dim; i-- > 0;) {
    coords[i] = index & mask;
    index >>= level;
  }
  return make_cube(level, std::move(coords), closure);
}

Cube parent(const Cube& cube) {
  require(cube.level() >= 1, Errc::NoParent, "the level-0 cube has no parent");
  std::vector<std::uint64_t> coords(cube.coords().begin(), cube.coords().end());
  for (auto& k : coords) k >>= 1;
  return make_cube(cube.level() - 1, std::move(coords), cube.closure());
}

std::vector<Cube> children(const Cube& cube) {
  const std::size_t d = cube.dim();
  std::vector<Cube> out;
  out.reserve(std::size_t{1} << d);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << d); ++bits) {
    std::vector<std::uint64_t> coords(d);
    for (std::size_t i = 0; i < d; ++i) {
      std::uint64_t bit = (bits >> (d - 1 - i)) & 1u;
      coords[i] = (cube.coord(i) << 1) | bit;
    }
    out.push_back(make_cube(cube.level() + 1, std::move(coords), cube.closure()));
  }
  return out;
}

Rational min_distance(const Cube& a, const Cube& b) {
  require(a.level() == b.level(), Errc::LevelMismatch,
          "cubes at levels " + std::to_string(a.level()) + " and " + std::to_string(b.level()));
  require(a.dim() == b.dim(), Errc::InvalidArgument, "cube dimensions differ");
  std::uint64_t gaps = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    std::uint64_t k = a.coord(i), j = b.coord(i);
    std::uint64_t diff = k > j ? k - j : j - k;
    if (diff > 0) gaps = std::max(gaps, diff - 1);
  }
  return Rational(Integer(static_cast<unsigned long>(gaps))) * a.side();
}

RationalInterval enlarge_beta(const Cube& cube, const Rational& beta, long bits) {
  require(cube.dim() == 1, Errc::UnsupportedDimension, "beta-enlargement is defined for d = 1 only");
  require(beta > 0 && beta < 1, Errc::InvalidArgument, "beta must lie in (0, 1)");
  Rational exponent = -beta * cube.level();
  Rational length = exp2_rounded(exponent, bits);
  Rational center = (cube.lower() + cube.upper()) / 2;
  Rational half = length / 2;
  return closed_interval(center - half, center + half);
}

Cube locate(int level, std::span<const Rational> point) {
  check_level(level);
  std::vector<std::uint64_t> coords;
  coords.reserve(point.size());
  for (const auto& x : point) {
    require(x >= 0 && x < 1, Errc::InvalidArgument, "point coordinate " + to_string(x) + " outside [0,1)");
    Integer k = floor_of(x * pow2(level));
    coords.push_back(k.get_ui());
  }
  return make_cube(level, std::move(coords), Closure::HalfOpen);
}

std::string describe(const Cube& cube) {
  std::ostringstream os;
  os << "level " << cube.level() << " coords (";
  for (std::size_t i = 0; i < cube.dim(); ++i) os << (i ? ", " : "") << cube.coord(i);
  os << ") " << (cube.closure() == Closure::Closed ? "closed" : "half-open");
  return os.str();
}

}  // namespace fhl
