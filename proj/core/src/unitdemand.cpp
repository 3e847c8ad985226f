#include "bayesprice/unitdemand.hpp"

#include <cstdint>

#include "bayesprice/errors.hpp"

namespace bayesprice {

void TwoPointItem::validate() const {
  if (sign(p_high) == Sign::Negative || compare(p_high, SqrtExpr(1)) > 0) {
    throw InvalidInstance("item probability " + p_high.to_string() + " outside [0, 1]");
  }
  if (compare(low, high) > 0) throw InvalidInstance("item low value exceeds high value");
}

namespace {

bool purchasable(Sign utility, PurchaseRule rule) {
  return rule == PurchaseRule::StrictlyPositive ? utility == Sign::Positive
                                                : utility != Sign::Negative;
}

// True when candidate should replace incumbent. `utility_cmp` and `price_cmp`
// return sign(candidate - incumbent); candidates arrive in increasing index
// order, so a full tie keeps the incumbent.
template <typename UtilityCmp, typename PriceCmp>
bool displaces(UtilityCmp utility_cmp, PriceCmp price_cmp, TieBreak tie) {
  const int u = utility_cmp();
  if (u != 0) return u > 0;
  switch (tie) {
    case TieBreak::MostExpensive: return price_cmp() > 0;
    case TieBreak::Cheapest: return price_cmp() < 0;
    case TieBreak::LowestIndex: return false;
  }
  return false;
}

// Lazily cached exact comparisons for one (items, prices, model) triple.
class ChoiceEvaluator {
 public:
  ChoiceEvaluator(std::span<const TwoPointItem> items, const PriceVector& prices,
                  BuyerModel model)
      : n_(items.size()), prices_(prices), model_(model),
        utility_(2 * n_), eligible_(2 * n_, false),
        utility_cmp_(4 * n_ * n_, kUnknown), price_cmp_(n_ * n_, kUnknown) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (!prices_[i]) continue;
      for (int high = 0; high < 2; ++high) {
        const auto slot = 2 * i + static_cast<std::size_t>(high);
        utility_[slot] = (high ? items[i].high : items[i].low) - *prices_[i];
        eligible_[slot] = purchasable(sign(utility_[slot]), model_.purchase);
      }
    }
  }

  // highs[i] is the state of item i.
  std::optional<std::size_t> choose(const std::vector<std::uint8_t>& highs) {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < n_; ++j) {
      const auto sj = 2 * j + highs[j];
      if (!eligible_[sj]) continue;
      if (!best) {
        best = j;
        continue;
      }
      const auto sb = 2 * *best + highs[*best];
      if (displaces([&] { return utility_cmp(sj, sb); },
                    [&] { return price_cmp(j, *best); }, model_.tie)) {
        best = j;
      }
    }
    return best;
  }

 private:
  static constexpr std::int8_t kUnknown = 2;

  int utility_cmp(std::size_t a, std::size_t b) {
    auto& c = utility_cmp_[a * 2 * n_ + b];
    if (c == kUnknown) c = static_cast<std::int8_t>(compare(utility_[a], utility_[b]));
    return c;
  }

  int price_cmp(std::size_t i, std::size_t j) {
    auto& c = price_cmp_[i * n_ + j];
    if (c == kUnknown) c = static_cast<std::int8_t>(compare(*prices_[i], *prices_[j]));
    return c;
  }

  std::size_t n_;
  const PriceVector& prices_;
  BuyerModel model_;
  std::vector<SqrtExpr> utility_;
  std::vector<bool> eligible_;
  std::vector<std::int8_t> utility_cmp_;
  std::vector<std::int8_t> price_cmp_;
};

void check_shape(std::span<const TwoPointItem> items, const PriceVector& prices) {
  if (items.size() > kMaxUnitDemandItems) {
    throw TooManyItems("at most " + std::to_string(kMaxUnitDemandItems) +
                       " items can be enumerated");
  }
  if (prices.size() != items.size()) {
    throw InvalidInstance("price vector length does not match the item count");
  }
}

}  // namespace

std::optional<std::size_t> buyer_choice(std::span<const SqrtExpr> values,
                                        const PriceVector& prices, BuyerModel model) {
  if (values.size() != prices.size()) {
    throw InvalidInstance("price vector length does not match the value count");
  }
  std::optional<std::size_t> best;
  SqrtExpr best_utility;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!prices[j]) continue;
    SqrtExpr u = values[j] - *prices[j];
    if (!purchasable(sign(u), model.purchase)) continue;
    if (!best || displaces([&] { return compare(u, best_utility); },
                           [&] { return compare(*prices[j], *prices[*best]); }, model.tie)) {
      best = j;
      best_utility = std::move(u);
    }
  }
  return best;
}

std::vector<SqrtExpr> purchase_probabilities(std::span<const TwoPointItem> items,
                                             const PriceVector& prices, BuyerModel model) {
  check_shape(items, prices);
  for (const auto& item : items) item.validate();
  const std::size_t n = items.size();

  std::vector<SqrtExpr> p_low(n);
  for (std::size_t i = 0; i < n; ++i) p_low[i] = SqrtExpr(1) - items[i].p_high;

  ChoiceEvaluator evaluator(items, prices, model);
  std::vector<SqrtExpr> mass(n);
  std::vector<std::uint8_t> highs(n, 0);

  // Depth-first over value profiles. Unpriced items never change the choice
  // and zero-probability branches carry no mass, so neither is expanded.
  auto walk = [&](auto&& self, std::size_t i, const SqrtExpr& prob) -> void {
    if (i == n) {
      if (const auto chosen = evaluator.choose(highs)) mass[*chosen] += prob;
      return;
    }
    if (!prices[i]) {
      highs[i] = 0;
      self(self, i + 1, prob);
      return;
    }
    for (std::uint8_t h : {std::uint8_t{1}, std::uint8_t{0}}) {
      const SqrtExpr& branch = h ? items[i].p_high : p_low[i];
      if (branch.is_zero()) continue;
      highs[i] = h;
      self(self, i + 1, prob * branch);
    }
  };
  walk(walk, 0, SqrtExpr(1));
  return mass;
}

SqrtExpr expected_revenue(std::span<const TwoPointItem> items, const PriceVector& prices,
                          BuyerModel model) {
  const auto mass = purchase_probabilities(items, prices, model);
  SqrtExpr revenue;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (prices[i] && !mass[i].is_zero()) revenue += mass[i] * *prices[i];
  }
  return revenue;
}

CandidateSearchResult best_over_candidates(std::span<const TwoPointItem> items,
                                           const std::vector<std::vector<Price>>& candidates,
                                           BuyerModel model) {
  if (items.size() > kMaxUnitDemandItems) {
    throw TooManyItems("at most " + std::to_string(kMaxUnitDemandItems) +
                       " items can be enumerated");
  }
  if (candidates.size() != items.size()) {
    throw InvalidInstance("one candidate set per item is required");
  }
  std::size_t total = 1;
  for (const auto& set : candidates) {
    if (set.empty()) throw InvalidInstance("empty candidate set");
    if (total > kMaxCandidateVectors / set.size()) {
      throw SearchTooLarge("candidate product exceeds " + std::to_string(kMaxCandidateVectors));
    }
    total *= set.size();
  }

  const std::size_t n = items.size();
  std::vector<std::size_t> index(n, 0);
  CandidateSearchResult result;
  PriceVector prices(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) prices[i] = candidates[i][index[i]];
    SqrtExpr revenue = expected_revenue(items, prices, model);
    if (result.evaluated == 0 || compare(revenue, result.revenue) > 0) {
      result.prices = prices;
      result.revenue = std::move(revenue);
    }
    ++result.evaluated;

    // Odometer with the last item varying fastest.
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++index[i] < candidates[i].size()) break;
      index[i] = 0;
      if (i == 0) return result;
    }
    if (n == 0) return result;
  }
}

std::string to_string(TieBreak tie) {
  switch (tie) {
    case TieBreak::MostExpensive: return "expensive";
    case TieBreak::Cheapest: return "cheapest";
    case TieBreak::LowestIndex: return "index";
  }
  return "?";
}

std::string to_string(PurchaseRule rule) {
  return rule == PurchaseRule::StrictlyPositive ? "strict" : "weak";
}

}  // namespace bayesprice
