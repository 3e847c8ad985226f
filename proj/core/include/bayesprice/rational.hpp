#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace bayesprice {

using Integer = mpz_class;

/// Exact fraction in lowest terms with a positive denominator.
///
/// Thin value wrapper over GMP's mpq_t. Every constructor canonicalizes, so
/// field-wise equality is numeric equality.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : value_(value) {}   // NOLINT(google-explicit-constructor)
  Rational(const Integer& value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& num, const Integer& den);
  explicit Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

  /// Parses "num/den" or a bare integer. Throws ParseError on malformed
  /// text and on a zero denominator.
  static Rational parse(std::string_view text);

  /// 2^exponent for any signed exponent.
  static Rational pow2(long exponent);

  Integer numerator() const { return value_.get_num(); }
  Integer denominator() const { return value_.get_den(); }
  const mpq_class& gmp() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  Integer floor() const;
  Integer ceil() const;
  Rational abs() const { return Rational(mpq_class(::abs(value_))); }
  double to_double() const { return value_.get_d(); }

  /// Always "num/den", including integral values ("5/1").
  std::string to_string() const;
  /// Decimal rendering for human consumption; not exact.
  std::string to_decimal(int digits = 17) const;

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class value_;
};

/// Integer power with a nonnegative exponent.
Rational pow(const Rational& base, unsigned long exponent);

/// Number of bits in |n| (0 for n == 0).
std::size_t bit_length(const Integer& n);

}  // namespace bayesprice
