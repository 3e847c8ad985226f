#include "bayesprice/distmodel.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

#include "bayesprice/errors.hpp"

namespace bayesprice {

void TwoPointAttribute::validate() const {
  if (high < 0 || low < 0) throw InvalidInstance("attribute values must be nonnegative");
  if (p_high.sign() < 0 || p_high > Rational(1)) {
    throw InvalidInstance("attribute probability " + p_high.to_string() + " outside [0, 1]");
  }
}

void SoapInstance::validate() const {
  if (attributes.empty()) throw InvalidInstance("instance has no attributes");
  for (const auto& a : attributes) a.validate();
}

Value SoapInstance::max_total() const {
  Value total = 0;
  for (const auto& a : attributes) {
    if (__builtin_add_overflow(total, std::max(a.high, a.low), &total)) {
      throw BudgetExceeded("total attribute value overflows 64 bits");
    }
  }
  return total;
}

SurvivalTable::SurvivalTable(std::vector<Point> points, Integer denominator)
    : points_(std::move(points)), denominator_(std::move(denominator)) {}

Integer SurvivalTable::survival_numerator(Value t) const {
  const auto it = std::lower_bound(points_.begin(), points_.end(), t,
                                   [](const Point& p, Value v) { return p.sum < v; });
  return it == points_.end() ? Integer(0) : it->tail;
}

Rational SurvivalTable::survival(Value t) const {
  return Rational(survival_numerator(t), denominator_);
}

SurvivalTable sum_distribution(const SoapInstance& instance, std::size_t max_states) {
  instance.validate();
  instance.max_total();  // overflow guard for every partial sum

  std::map<Value, Integer> current{{0, Integer(1)}};
  Integer denominator = 1;
  for (const auto& attr : instance.attributes) {
    const Integer num = attr.p_high.numerator();
    const Integer den = attr.p_high.denominator();
    const Integer rest = den - num;
    std::map<Value, Integer> next;
    for (const auto& [s, w] : current) {
      if (num != 0) next[s + attr.high] += w * num;
      if (rest != 0) next[s + attr.low] += w * rest;
    }
    if (next.size() > max_states) {
      throw BudgetExceeded("sum distribution needs more than " + std::to_string(max_states) +
                           " states");
    }
    current = std::move(next);
    denominator *= den;
  }

  std::vector<SurvivalTable::Point> points;
  points.reserve(current.size());
  for (auto& [s, w] : current) points.push_back({s, std::move(w), Integer(0)});
  Integer running = 0;
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    running += it->mass;
    it->tail = running;
  }
  return SurvivalTable(std::move(points), std::move(denominator));
}

Rational survival(const SoapInstance& instance, Value t, std::size_t max_states) {
  return sum_distribution(instance, max_states).survival(t);
}

std::vector<std::pair<Value, Rational>> enumerate_outcomes(const SoapInstance& instance) {
  instance.validate();
  const std::size_t n = instance.attributes.size();
  if (n > kMaxEnumeratedAttributes) {
    throw TooManyAttributes("outcome enumeration supports at most " +
                            std::to_string(kMaxEnumeratedAttributes) + " attributes");
  }
  instance.max_total();
  std::vector<std::pair<Value, Rational>> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Value sum = 0;
    Rational prob = 1;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = instance.attributes[i];
      // Bit set means the low branch, so mask 0 is the all-high outcome.
      const bool low = (mask >> (n - 1 - i)) & 1U;
      sum += low ? a.low : a.high;
      prob *= low ? Rational(1) - a.p_high : a.p_high;
    }
    out.emplace_back(sum, std::move(prob));
  }
  return out;
}

}  // namespace bayesprice
