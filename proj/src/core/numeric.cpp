#include "numeric.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace fhl {

Rational pow2(std::int64_t e) {
  Rational q = 1;
  if (e >= 0) {
    mpz_mul_2exp(q.get_num_mpz_t(), q.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return q;
}

Integer pow2_int(std::uint64_t e) {
  Integer z = 1;
  mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  return z;
}

namespace {

Rational parse_decimal(std::string_view s) {
  if (s.empty()) fail(Errc::InvalidArgument, "empty number");
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) fail(Errc::InvalidArgument, "malformed number '" + std::string(s) + "'");
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') {
      fail(Errc::InvalidArgument, "malformed number '" + std::string(s) + "'");
    }
    ++i;
    auto rest = s.substr(i);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), exponent);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) {
      fail(Errc::InvalidArgument, "malformed exponent in '" + std::string(s) + "'");
    }
  }
  Rational q{Integer(digits, 10)};
  long scale = exponent - frac_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  if (scale >= 0) {
    q *= ten_pow;
  } else {
    q /= ten_pow;
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational decimal_rational(double x) {
  if (!std::isfinite(x)) fail(Errc::InvalidArgument, "non-finite parameter");
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) fail(Errc::InvalidArgument, "cannot format parameter");
  return parse_decimal(std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data())));
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  auto num = text.substr(0, slash);
  auto den = text.substr(slash + 1);
  auto check = [&](std::string_view part, bool allow_sign) {
    if (part.empty()) fail(Errc::InvalidArgument, "malformed fraction '" + std::string(text) + "'");
    for (std::size_t i = 0; i < part.size(); ++i) {
      char c = part[i];
      bool ok = (c >= '0' && c <= '9') || (allow_sign && i == 0 && (c == '-' || c == '+'));
      if (!ok) fail(Errc::InvalidArgument, "malformed fraction '" + std::string(text) + "'");
    }
  };
  check(num, true);
  check(den, false);
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  Integer d(std::string(den), 10);
  if (d == 0) fail(Errc::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
  Rational q(Integer(n, 10), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

double log2_of(const Integer& z) {
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

double log2_of(const Rational& q) {
  return log2_of(Integer(q.get_num())) - log2_of(Integer(q.get_den()));
}

void init_mpfr_range() {
  if (mpfr_get_emin() != mpfr_get_emin_min()) mpfr_set_emin(mpfr_get_emin_min());
  if (mpfr_get_emax() != mpfr_get_emax_max()) mpfr_set_emax(mpfr_get_emax_max());
}

BigFloat::BigFloat(long precision_bits) {
  init_mpfr_range();
  mpfr_init2(value_, precision_bits);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double v, long precision_bits) : BigFloat(precision_bits) {
  mpfr_set_d(value_, v, MPFR_RNDN);
}

BigFloat::BigFloat(const Rational& v, long precision_bits) : BigFloat(precision_bits) {
  mpfr_set_q(value_, v.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

namespace {

// Brackets 2^x between two MPFR values computed with directed rounding.
void exp2_bracket(const Rational& x, long prec, mpfr_t lo, mpfr_t hi) {
  mpfr_t xl, xh;
  mpfr_inits2(prec, xl, xh, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(xl, x.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(xh, x.get_mpq_t(), MPFR_RNDU);
  mpfr_exp2(lo, xl, MPFR_RNDD);
  mpfr_exp2(hi, xh, MPFR_RNDU);
  mpfr_clears(xl, xh, static_cast<mpfr_ptr>(nullptr));
}

Integer floor_exp2_irrational(const Rational& x, std::uint64_t max_bits) {
  Integer whole = floor_of(x);
  if (whole >= 0 && whole >= Integer(static_cast<unsigned long>(max_bits))) {
    fail(Errc::BudgetExceeded, "2^x with x=" + to_string(x) + " exceeds the bit budget");
  }
  init_mpfr_range();
  long prec = (whole > 0 ? static_cast<long>(whole.get_ui()) : 0) + 96;
  for (int attempt = 0; attempt < 12; ++attempt, prec *= 2) {
    mpfr_t lo, hi;
    mpfr_inits2(prec, lo, hi, static_cast<mpfr_ptr>(nullptr));
    exp2_bracket(x, prec, lo, hi);
    Integer zl, zh;
    mpfr_get_z(zl.get_mpz_t(), lo, MPFR_RNDD);
    mpfr_get_z(zh.get_mpz_t(), hi, MPFR_RNDD);
    mpfr_clears(lo, hi, static_cast<mpfr_ptr>(nullptr));
    if (zl == zh) return zl;
  }
  fail(Errc::InsufficientPrecision, "cannot resolve floor(2^x) for x=" + to_string(x));
}

}  // namespace

Integer floor_exp2(const Rational& x, std::uint64_t max_bits) {
  if (x < 0) return 0;
  if (is_integer(x)) {
    const Integer& e = x.get_num();
    if (e >= Integer(static_cast<unsigned long>(max_bits))) {
      fail(Errc::BudgetExceeded, "2^" + e.get_str() + " exceeds the bit budget");
    }
    return pow2_int(e.get_ui());
  }
  return floor_exp2_irrational(x, max_bits);
}

Integer ceil_exp2(const Rational& x, std::uint64_t max_bits) {
  if (x <= 0) return 1;
  if (is_integer(x)) return floor_exp2(x, max_bits);
  return floor_exp2_irrational(x, max_bits) + 1;
}

Rational exp2_rounded(const Rational& x, long bits) {
  if (is_integer(x)) {
    const Integer& e = x.get_num();
    if (!e.fits_slong_p()) fail(Errc::BudgetExceeded, "exponent out of range");
    return pow2(e.get_si());
  }
  init_mpfr_range();
  mpfr_t xv, y;
  mpfr_inits2(bits + 64, xv, static_cast<mpfr_ptr>(nullptr));
  mpfr_init2(y, bits);
  mpfr_set_q(xv, x.get_mpq_t(), MPFR_RNDN);
  mpfr_exp2(y, xv, MPFR_RNDN);
  Rational out;
  mpfr_get_q(out.get_mpq_t(), y);
  mpfr_clears(xv, y, static_cast<mpfr_ptr>(nullptr));
  return out;
}

// ---------------------------------------------------------------------------

DyadicRational::DyadicRational(Integer numerator, std::uint64_t exponent)
    : num_(std::move(numerator)), exp_(exponent) {
  canonicalize();
}

void DyadicRational::canonicalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  auto tz = static_cast<std::uint64_t>(mpz_scan1(num_.get_mpz_t(), 0));
  auto shift = std::min(tz, exp_);
  if (shift > 0) {
    mpz_fdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), shift);
    exp_ -= shift;
  }
}

DyadicRational DyadicRational::from_rational(const Rational& q) {
  const Integer& den = q.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) {
    fail(Errc::InvalidArgument, to_string(q) + " is not dyadic");
  }
  auto exp = static_cast<std::uint64_t>(mpz_scan1(den.get_mpz_t(), 0));
  return DyadicRational(q.get_num(), exp);
}

Rational DyadicRational::to_rational() const {
  Rational q(num_);
  mpz_mul_2exp(q.get_den_mpz_t(), q.get_den_mpz_t(), exp_);
  q.canonicalize();
  return q;
}

namespace {
Integer scaled_num(const DyadicRational& a, std::uint64_t exp) {
  Integer z = a.numerator();
  mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), exp - a.exponent());
  return z;
}
}  // namespace

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
  auto e = std::max(a.exp_, b.exp_);
  return DyadicRational(scaled_num(a, e) + scaled_num(b, e), e);
}

DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
  auto e = std::max(a.exp_, b.exp_);
  return DyadicRational(scaled_num(a, e) - scaled_num(b, e), e);
}

DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
  return DyadicRational(a.num_ * b.num_, a.exp_ + b.exp_);
}

bool operator==(const DyadicRational& a, const DyadicRational& b) {
  return a.exp_ == b.exp_ && a.num_ == b.num_;
}

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
  auto e = std::max(a.exp_, b.exp_);
  int c = cmp(scaled_num(a, e), scaled_num(b, e));
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------

bool RationalInterval::contains(const Rational& x) const {
  bool after_left = left_closed ? x >= left : x > left;
  bool before_right = right_closed ? x <= right : x < right;
  return after_left && before_right;
}

RationalInterval closed_interval(Rational left, Rational right) {
  return RationalInterval{std::move(left), std::move(right), true, true};
}

std::string to_string(const RationalInterval& iv) {
  return std::string(iv.left_closed ? "[" : "(") + to_string(iv.left) + ", " + to_string(iv.right) +
         (iv.right_closed ? "]" : ")");
}

// ---------------------------------------------------------------------------

ScaledInt ScaledInt::of(const Integer& z) {
  ScaledInt s{z, 0};
  s.normalize();
  return s;
}

void ScaledInt::normalize() {
  if (mant == 0) {
    exp2 = 0;
    return;
  }
  auto tz = mpz_scan1(mant.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_fdiv_q_2exp(mant.get_mpz_t(), mant.get_mpz_t(), tz);
    exp2 += static_cast<std::int64_t>(tz);
  }
}

double ScaledInt::log2() const { return log2_of(mant) + static_cast<double>(exp2); }

std::optional<std::int64_t> ScaledInt::exact_log2() const {
  if (mant == 1) return exp2;
  return std::nullopt;
}

Integer ScaledInt::value(std::uint64_t max_bits) const {
  if (exp2 < 0) fail(Errc::InvalidArgument, "ScaledInt with negative exponent");
  if (static_cast<std::uint64_t>(exp2) + mpz_sizeinbase(mant.get_mpz_t(), 2) > max_bits) {
    fail(Errc::BudgetExceeded, "count 2^" + std::to_string(exp2) + " too large to materialize");
  }
  Integer z = mant;
  mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(exp2));
  return z;
}

ScaledInt operator*(const ScaledInt& a, const ScaledInt& b) {
  ScaledInt s{a.mant * b.mant, a.exp2 + b.exp2};
  s.normalize();
  return s;
}

ScaledRational ScaledRational::of(const Rational& q) {
  ScaledRational s{q, 0};
  s.normalize();
  return s;
}

void ScaledRational::normalize() {
  mant.canonicalize();
  if (mant == 0) {
    exp2 = 0;
    return;
  }
  auto tzn = mpz_scan1(mant.get_num_mpz_t(), 0);
  auto tzd = mpz_scan1(mant.get_den_mpz_t(), 0);
  if (tzn > 0) {
    mpz_fdiv_q_2exp(mant.get_num_mpz_t(), mant.get_num_mpz_t(), tzn);
    exp2 += static_cast<std::int64_t>(tzn);
  }
  if (tzd > 0) {
    mpz_fdiv_q_2exp(mant.get_den_mpz_t(), mant.get_den_mpz_t(), tzd);
    exp2 -= static_cast<std::int64_t>(tzd);
  }
}

double ScaledRational::log2() const { return log2_of(mant) + static_cast<double>(exp2); }

std::optional<std::int64_t> ScaledRational::exact_log2() const {
  if (mant == 1) return exp2;
  return std::nullopt;
}

Rational ScaledRational::value(std::uint64_t max_bits) const {
  auto mag = static_cast<std::uint64_t>(exp2 < 0 ? -exp2 : exp2);
  if (mag > max_bits) {
    fail(Errc::BudgetExceeded, "length 2^" + std::to_string(exp2) + " too small to materialize");
  }
  return mant * fhl::pow2(exp2);
}

ScaledRational operator*(const ScaledRational& a, const ScaledRational& b) {
  ScaledRational s{a.mant * b.mant, a.exp2 + b.exp2};
  s.normalize();
  return s;
}

}  // namespace fhl
