#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bayesprice/exactnum.hpp"

namespace bayesprice {

inline constexpr std::size_t kMaxUnitDemandItems = 20;
inline constexpr std::size_t kMaxCandidateVectors = 1'000'000;

/// How ties among utility-maximizing items are resolved.
/// Remaining ties after the price comparison go to the lowest index.
enum class TieBreak { MostExpensive, Cheapest, LowestIndex };

/// Which utilities make an item purchasable.
enum class PurchaseRule {
  StrictlyPositive,  // value - price > 0
  NonNegative,       // value - price >= 0; buying at zero utility
};

/// The library default: the buyer walks away from a zero-utility offer.
inline constexpr PurchaseRule kDefaultPurchaseRule = PurchaseRule::StrictlyPositive;

/// Convention under which the scheme revenues of the square-root reductions
/// are stated: items priced exactly at a value are bought, and a zero-utility
/// tie resolves to the most expensive item.
inline constexpr PurchaseRule kReductionPurchaseRule = PurchaseRule::NonNegative;

struct BuyerModel {
  TieBreak tie = TieBreak::MostExpensive;
  PurchaseRule purchase = kDefaultPurchaseRule;
};

/// Value `high` with probability `p_high`, `low` otherwise.
struct TwoPointItem {
  SqrtExpr high;
  SqrtExpr low;
  SqrtExpr p_high;

  /// Throws InvalidInstance unless 0 <= p_high <= 1 and low <= high.
  void validate() const;
};

/// A finite price, or std::nullopt for an item that is not offered.
using Price = std::optional<SqrtExpr>;
using PriceVector = std::vector<Price>;

/// Index of the purchased item, or nullopt when nothing is bought.
std::optional<std::size_t> buyer_choice(std::span<const SqrtExpr> values,
                                        const PriceVector& prices, BuyerModel model = {});

/// Exact expected payment over all 2^n value profiles.
SqrtExpr expected_revenue(std::span<const TwoPointItem> items, const PriceVector& prices,
                          BuyerModel model = {});

/// Probability that each item is the one purchased, in item order.
std::vector<SqrtExpr> purchase_probabilities(std::span<const TwoPointItem> items,
                                             const PriceVector& prices, BuyerModel model = {});

struct CandidateSearchResult {
  PriceVector prices;
  SqrtExpr revenue;
  std::size_t evaluated = 0;
};

/// Exhaustive maximization over the Cartesian product of per-item candidate
/// prices. Vectors are visited in lexicographic order of candidate indices and
/// the first maximizer wins.
CandidateSearchResult best_over_candidates(std::span<const TwoPointItem> items,
                                           const std::vector<std::vector<Price>>& candidates,
                                           BuyerModel model = {});

std::string to_string(TieBreak tie);
std::string to_string(PurchaseRule rule);

}  // namespace bayesprice
