#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bayesprice/rational.hpp"

namespace bayesprice {

/// floor(sqrt(n)) for n >= 0.
Integer sqrt_floor(const Integer& n);

/// Closed interval [lo, hi] whose endpoints have power-of-two denominators.
struct DyadicInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const DyadicInterval& o) const { return lo <= o.lo && o.hi <= hi; }
};

/// Interval of width <= 2^-bits containing sqrt(a). Collapses to a point when
/// a is a perfect square. Refinement is monotone: the interval for bits + 1
/// lies inside the interval for bits.
DyadicInterval sqrt_interval(const Integer& a, unsigned long bits);

/// coefficient * sqrt(radicand), radicand >= 0, not yet normalized.
struct SqrtTerm {
  Rational coefficient;
  Integer radicand;
};

/// Limits for square-free decomposition of radicands.
struct FactoringBudget {
  /// Trial division covers every prime below this bound.
  unsigned long trial_bound = 1UL << 16;
  /// Radicands wider than this are rejected outright.
  std::size_t max_bits = 256;
  /// Iteration cap for each Pollard-rho split of a cofactor.
  unsigned long rho_iterations = 1UL << 22;
};

/// n = square * kernel with kernel square-free.
struct SquareFreeSplit {
  Integer square_root;  // s with s^2 * kernel == n
  Integer kernel;
};

/// Throws InstanceTooLarge when n cannot be factored within the budget.
SquareFreeSplit squarefree_split(const Integer& n, const FactoringBudget& budget = {});

/// q + sum_d r_d * sqrt(d) over distinct square-free d >= 2 with r_d != 0.
///
/// The square roots of distinct square-free integers are linearly independent
/// over the rationals, so this representation is canonical: two expressions
/// denote the same real iff they compare equal field-wise.
class SqrtExpr {
 public:
  using TermMap = std::map<Integer, Rational>;

  SqrtExpr() = default;
  SqrtExpr(const Rational& q) : rational_(q) {}  // NOLINT(google-explicit-constructor)
  SqrtExpr(long q) : rational_(q) {}             // NOLINT(google-explicit-constructor)
  SqrtExpr(int q) : rational_(q) {}              // NOLINT(google-explicit-constructor)

  /// sqrt(n) for n >= 0, normalized.
  static SqrtExpr sqrt(const Integer& n, const FactoringBudget& budget = {});
  /// sqrt(q) for rational q >= 0: sqrt(num * den) / den.
  static SqrtExpr sqrt(const Rational& q, const FactoringBudget& budget = {});

  const Rational& rational_part() const { return rational_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty() && rational_.is_zero(); }
  bool is_rational() const { return terms_.empty(); }

  SqrtExpr operator-() const;
  SqrtExpr& operator+=(const SqrtExpr& o);
  SqrtExpr& operator-=(const SqrtExpr& o);
  SqrtExpr& operator*=(const Rational& r);
  SqrtExpr& operator*=(const SqrtExpr& o);

  friend SqrtExpr operator+(SqrtExpr a, const SqrtExpr& b) { return a += b; }
  friend SqrtExpr operator-(SqrtExpr a, const SqrtExpr& b) { return a -= b; }
  friend SqrtExpr operator*(SqrtExpr a, const SqrtExpr& b) { return a *= b; }
  friend SqrtExpr operator*(SqrtExpr a, const Rational& b) { return a *= b; }

  friend bool operator==(const SqrtExpr& a, const SqrtExpr& b) {
    return a.rational_ == b.rational_ && a.terms_ == b.terms_;
  }

  /// e.g. "3/2 + 2/1*sqrt(2) - 1/3*sqrt(5)".
  std::string to_string() const;
  double to_double() const;

 private:
  friend SqrtExpr normalize(std::span<const SqrtTerm>, const FactoringBudget&);
  void add_term(const Integer& kernel, const Rational& coefficient);

  Rational rational_;
  TermMap terms_;
};

/// Square-free normal form of sum coefficient_i * sqrt(radicand_i).
/// Throws InvalidInstance on a negative radicand and InstanceTooLarge when a
/// radicand exceeds the factoring budget.
SqrtExpr normalize(std::span<const SqrtTerm> terms, const FactoringBudget& budget = {});

enum class Sign { Negative = -1, Zero = 0, Positive = 1 };

/// Work done by one call to sign().
struct SignDiagnostics {
  unsigned rounds = 0;           // interval evaluations performed
  unsigned long final_bits = 0;  // precision of the deciding evaluation
};

/// Enclosure of e with width <= 2^-bits.
DyadicInterval enclose(const SqrtExpr& e, unsigned long bits);

/// Exact sign. Zero is read off the normal form; otherwise precision starts
/// at 64 bits and doubles until the enclosure excludes zero. There is no
/// precision cap: a nonzero normal form always separates eventually.
Sign sign(const SqrtExpr& e, SignDiagnostics* diagnostics = nullptr);

/// sign(a - b) as a three-way comparison.
int compare(const SqrtExpr& a, const SqrtExpr& b);

enum class Comparison { Less, Equal, Greater };

/// Trichotomy of sum_i sqrt(a_i) against K for positive integers.
Comparison sqrtsum_compare(std::span<const Integer> a, const Integer& k,
                           const FactoringBudget& budget = {});

std::string to_string(Sign s);
std::string to_string(Comparison c);

}  // namespace bayesprice
