#include "bayesprice/soap.hpp"

#include <cmath>

#include "bayesprice/errors.hpp"

namespace bayesprice {

Rational revenue_at(const SurvivalTable& table, const Rational& price) {
  if (price.sign() < 0) throw InvalidInstance("price must be nonnegative");
  if (price.is_zero()) return Rational(0);
  // Sums are integers, so S >= price iff S >= ceil(price).
  const Integer threshold = price.ceil();
  if (!threshold.fits_slong_p()) return Rational(0);
  return price * table.survival(threshold.get_si());
}

Rational revenue_at(const SoapInstance& instance, const Rational& price, std::size_t max_states) {
  return revenue_at(sum_distribution(instance, max_states), price);
}

PriceReport optimal_price(const SurvivalTable& table, bool with_curve) {
  PriceReport report;
  if (with_curve) report.curve.emplace();
  Integer best = 0;  // price * tail numerator
  Integer candidate;
  for (const auto& point : table.points()) {
    if (point.sum <= 0) continue;
    candidate = point.tail * point.sum;
    if (report.curve) {
      report.curve->emplace_back(point.sum, Rational(candidate, table.denominator()));
    }
    if (candidate > best) {
      best = candidate;
      report.price = point.sum;
    }
  }
  report.revenue = Rational(best, table.denominator());
  return report;
}

PriceReport optimal_price(const SoapInstance& instance, bool with_curve, std::size_t max_states) {
  return optimal_price(sum_distribution(instance, max_states), with_curve);
}

PriceReport grand_bundle_price(std::span<const TwoPointAttribute> items, bool with_curve,
                               std::size_t max_states) {
  SoapInstance bundle{{items.begin(), items.end()}};
  return optimal_price(bundle, with_curve, max_states);
}

MonteCarloEstimate mc_revenue(const SoapInstance& instance, const Rational& price,
                              std::uint64_t samples, std::uint64_t seed) {
  instance.validate();
  if (samples == 0) throw InvalidInstance("samples must be positive");
  if (price.sign() < 0) throw InvalidInstance("price must be nonnegative");

  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(seed);
  const Integer threshold = price.ceil();
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    Integer total = 0;
    for (const auto& a : instance.attributes) {
      const Integer den = a.p_high.denominator();
      const bool high = rng.get_z_range(den) < a.p_high.numerator();
      total += high ? a.high : a.low;
    }
    if (total >= threshold) ++hits;
  }

  MonteCarloEstimate out;
  out.samples = samples;
  const Rational rate(Integer(static_cast<unsigned long>(hits)),
                      Integer(static_cast<unsigned long>(samples)));
  out.estimate = price * rate;
  const double f = rate.to_double();
  out.standard_error =
      price.to_double() * std::sqrt(f * (1.0 - f) / static_cast<double>(samples));
  return out;
}

}  // namespace bayesprice
