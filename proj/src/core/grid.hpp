#pragma once

// Dyadic cubes of [0,1]^d: the closed family Q_n and the half-open family Q'_n.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace fhl {

enum class Closure { Closed, HalfOpen };

class Cube {
 public:
  int level() const { return level_; }
  std::size_t dim() const { return coords_.size(); }
  std::span<const std::uint64_t> coords() const { return coords_; }
  std::uint64_t coord(std::size_t axis = 0) const { return coords_.at(axis); }
  Closure closure() const { return closure_; }

  Rational side() const { return pow2(-level_); }
  Rational volume() const { return pow2(-level_ * static_cast<std::int64_t>(dim())); }
  Rational lower(std::size_t axis = 0) const;
  Rational upper(std::size_t axis = 0) const;
  /// [k 2^-n, (k+1) 2^-n], right-open for half-open cubes.
  RationalInterval extent(std::size_t axis = 0) const;

  /// Point membership with this cube's closure semantics.
  bool contains(std::span<const Rational> point) const;

  Cube with_closure(Closure c) const;

  /// Row-major index in [0, 2^(n d)).
  std::uint64_t linear_index() const;

  bool operator==(const Cube&) const = default;

 private:
  friend Cube make_cube(int, std::vector<std::uint64_t>, Closure);
  Cube(int level, std::vector<std::uint64_t> coords, Closure closure)
      : level_(level), coords_(std::move(coords)), closure_(closure) {}

  int level_ = 0;
  std::vector<std::uint64_t> coords_;
  Closure closure_ = Closure::Closed;
};

/// CoordOutOfRange unless 0 <= k_i < 2^level; LevelCapExceeded above the cap.
Cube make_cube(int level, std::vector<std::uint64_t> coords, Closure closure = Closure::Closed);
Cube cube_from_linear(int level, std::size_t dim, std::uint64_t index, Closure closure = Closure::Closed);

/// Level n-1 cube with coords floor(k_i / 2). NoParent at level 0.
Cube parent(const Cube& cube);
/// The 2^d level n+1 cubes whose parent is `cube`, in row-major order.
std::vector<Cube> children(const Cube& cube);

/// inf |x - y| over the two cubes, measured per axis and maximised:
/// max_i max(0, |k_i - j_i| - 1) 2^-n. LevelMismatch unless levels agree.
Rational min_distance(const Cube& a, const Cube& b);

/// Q^beta: the interval of length |Q|^beta = 2^(-n beta) with the same centre
/// as Q, not clipped to [0,1]. d = 1 only. Exact when n*beta is an integer;
/// otherwise the length is 2^(-n beta) rounded to `bits` significant bits.
RationalInterval enlarge_beta(const Cube& cube, const Rational& beta, long bits = 256);

/// The half-open level-n cube containing a point of [0,1)^d.
Cube locate(int level, std::span<const Rational> point);

std::string describe(const Cube& cube);

}  // namespace fhl
