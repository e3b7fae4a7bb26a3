#pragma once

// Exact arithmetic: GMP integers/rationals, dyadic rationals, closed or
// half-open rational intervals, and 2^x evaluation for rational x via MPFR.

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fhl {

using Integer = mpz_class;
// Rationals must be canonical: the two-argument mpq_class constructor does
// not canonicalize and comparisons assume it.
using Rational = mpq_class;

/// Exact 2^e for any signed exponent.
Rational pow2(std::int64_t e);
Integer pow2_int(std::uint64_t e);

/// The decimal number that prints as `x` under shortest round-trip formatting,
/// as an exact rational (0.3 -> 3/10, not the binary double nearest 0.3).
Rational decimal_rational(double x);

/// Parses "p/q", an integer, or a decimal literal ("0.25", "1e-3").
Rational parse_rational(std::string_view text);

/// "numerator/denominator", always with an explicit denominator.
std::string to_string(const Rational& q);

bool is_integer(const Rational& q);
Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);

double log2_of(const Integer& z);  // -inf for 0
double log2_of(const Rational& q);

/// floor(2^x) and ceil(2^x), exact. x is rational so 2^x is either an integer
/// power of two or irrational; the irrational case is resolved with
/// directed-rounding MPFR evaluations at increasing precision. Results larger
/// than `max_bits` bits raise BudgetExceeded.
Integer floor_exp2(const Rational& x, std::uint64_t max_bits = 1u << 26);
Integer ceil_exp2(const Rational& x, std::uint64_t max_bits = 1u << 26);

/// 2^x rounded to nearest with `bits` significant bits; exact when x is an
/// integer.
Rational exp2_rounded(const Rational& x, long bits = 256);

/// Value numerator / 2^exponent kept canonical (numerator odd or exponent 0).
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(Integer numerator, std::uint64_t exponent);
  static DyadicRational from_rational(const Rational& q);  // InvalidArgument if not dyadic

  const Integer& numerator() const { return num_; }
  std::uint64_t exponent() const { return exp_; }
  Rational to_rational() const;

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b);
  friend bool operator==(const DyadicRational& a, const DyadicRational& b);
  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);

 private:
  void canonicalize();

  Integer num_ = 0;
  std::uint64_t exp_ = 0;
};

struct RationalInterval {
  Rational left;
  Rational right;
  bool left_closed = true;
  bool right_closed = true;

  Rational width() const { return right - left; }
  bool contains(const Rational& x) const;
  bool operator==(const RationalInterval&) const = default;
};

RationalInterval closed_interval(Rational left, Rational right);
std::string to_string(const RationalInterval& iv);

/// mant * 2^exp2 with an integer mantissa. Keeps astronomically large
/// power-of-two counts (2^(10^11) intervals) representable.
struct ScaledInt {
  Integer mant = 1;
  std::int64_t exp2 = 0;

  static ScaledInt pow2(std::int64_t e) { return ScaledInt{1, e}; }
  static ScaledInt of(const Integer& z);

  void normalize();
  double log2() const;
  /// log2 as an exact integer when the value is a power of two.
  std::optional<std::int64_t> exact_log2() const;
  Integer value(std::uint64_t max_bits = 1u << 24) const;
  friend ScaledInt operator*(const ScaledInt& a, const ScaledInt& b);
};

/// mant * 2^exp2 with a rational mantissa.
struct ScaledRational {
  Rational mant = 1;
  std::int64_t exp2 = 0;

  static ScaledRational pow2(std::int64_t e) { return ScaledRational{1, e}; }
  static ScaledRational of(const Rational& q);

  void normalize();
  double log2() const;
  std::optional<std::int64_t> exact_log2() const;
  Rational value(std::uint64_t max_bits = 1u << 24) const;
  friend ScaledRational operator*(const ScaledRational& a, const ScaledRational& b);
};

/// Minimal RAII MPFR value with a generous exponent range, for closed forms
/// whose magnitudes leave double range (2^-(10^11) probabilities).
class BigFloat {
 public:
  explicit BigFloat(long precision_bits = 256);
  BigFloat(double v, long precision_bits = 256);
  BigFloat(const Rational& v, long precision_bits = 256);
  BigFloat(const BigFloat& other);
  BigFloat& operator=(const BigFloat& other);
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  long precision() const { return static_cast<long>(mpfr_get_prec(value_)); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

 private:
  mpfr_t value_;
};

/// Widens the MPFR exponent range once per process.
void init_mpfr_range();

}  // namespace fhl
