#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bayesprice/rational.hpp"

namespace bayesprice {

using Value = std::int64_t;

/// Default cap on distinct partial sums tracked by sum_distribution().
inline constexpr std::size_t kDefaultStateBudget = 10'000'000;

/// Largest instance enumerate_outcomes() accepts.
inline constexpr std::size_t kMaxEnumeratedAttributes = 20;

/// Takes `high` with probability `p_high` and `low` otherwise. The two values
/// are not ordered; `high` is simply the one tied to `p_high`.
struct TwoPointAttribute {
  Value high = 0;
  Value low = 0;
  Rational p_high;

  /// Throws InvalidInstance on negative values or p_high outside [0, 1].
  void validate() const;

  friend bool operator==(const TwoPointAttribute&, const TwoPointAttribute&) = default;
};

struct SoapInstance {
  std::vector<TwoPointAttribute> attributes;

  /// Nonempty, every attribute valid.
  void validate() const;
  /// Sum of max(high, low); the largest achievable total.
  Value max_total() const;

  friend bool operator==(const SoapInstance&, const SoapInstance&) = default;
};

/// Exact distribution of a sum of independent attributes.
///
/// Point masses are kept as integer numerators over one shared denominator
/// (the product of the attribute denominators). Callers comparing revenues
/// across support points can work on numerators alone.
class SurvivalTable {
 public:
  struct Point {
    Value sum;
    Integer mass;  // numerator over denominator()
    Integer tail;  // numerator of Pr[S >= sum]
  };

  SurvivalTable(std::vector<Point> points, Integer denominator);

  std::size_t size() const { return points_.size(); }
  std::span<const Point> points() const { return points_; }
  const Integer& denominator() const { return denominator_; }

  Value sum(std::size_t i) const { return points_[i].sum; }
  Rational mass(std::size_t i) const { return Rational(points_[i].mass, denominator_); }
  Rational tail(std::size_t i) const { return Rational(points_[i].tail, denominator_); }

  /// Pr[S >= t]: the tail at the smallest support point >= t, or 0.
  Rational survival(Value t) const;
  /// Numerator of survival(t) over denominator().
  Integer survival_numerator(Value t) const;

 private:
  std::vector<Point> points_;
  Integer denominator_;
};

/// Sparse convolution over achievable sums, one step per attribute.
/// Throws BudgetExceeded when more than `max_states` distinct sums appear or
/// the total overflows Value.
SurvivalTable sum_distribution(const SoapInstance& instance,
                               std::size_t max_states = kDefaultStateBudget);

/// Pr[sum >= t].
Rational survival(const SoapInstance& instance, Value t,
                  std::size_t max_states = kDefaultStateBudget);

/// All 2^n (sum, probability) outcomes, unaggregated. Attribute 0 is the
/// slowest-varying choice and the high branch comes first.
/// Throws TooManyAttributes for n > kMaxEnumeratedAttributes.
std::vector<std::pair<Value, Rational>> enumerate_outcomes(const SoapInstance& instance);

}  // namespace bayesprice
