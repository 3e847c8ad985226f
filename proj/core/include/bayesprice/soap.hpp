#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bayesprice/distmodel.hpp"

namespace bayesprice {

/// Result of single-price optimization for a sum of attributes.
struct PriceReport {
  Value price = 0;
  Rational revenue;
  /// (candidate price, revenue) for every candidate, when requested.
  std::optional<std::vector<std::pair<Value, Rational>>> curve;
};

/// price * Pr[S >= price]. The buyer accepts when the value is at least the
/// price. Prices may be any nonnegative rational.
Rational revenue_at(const SoapInstance& instance, const Rational& price,
                    std::size_t max_states = kDefaultStateBudget);
Rational revenue_at(const SurvivalTable& table, const Rational& price);

/// Revenue-maximizing price among the positive support points of the sum.
/// Between adjacent support points the tail is constant, so the right
/// endpoint dominates every price in the gap. Ties go to the lowest price.
/// An instance whose sum is always 0 reports price 0 and revenue 0.
PriceReport optimal_price(const SoapInstance& instance, bool with_curve = false,
                          std::size_t max_states = kDefaultStateBudget);
PriceReport optimal_price(const SurvivalTable& table, bool with_curve = false);

/// Grand-bundle pricing for an additive buyer with independent item values;
/// the bundle's value is the sum of the items' values.
PriceReport grand_bundle_price(std::span<const TwoPointAttribute> items,
                               bool with_curve = false,
                               std::size_t max_states = kDefaultStateBudget);

struct MonteCarloEstimate {
  Rational estimate;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
};

/// Sample-mean estimate of revenue_at, deterministic for a given seed.
/// Each Bernoulli draw is exact for rational probabilities.
MonteCarloEstimate mc_revenue(const SoapInstance& instance, const Rational& price,
                              std::uint64_t samples, std::uint64_t seed);

}  // namespace bayesprice
