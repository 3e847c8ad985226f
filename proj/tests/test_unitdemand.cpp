#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "bayesprice/errors.hpp"
#include "bayesprice/reductions.hpp"
#include "bayesprice/unitdemand.hpp"
#include "oracles.hpp"

namespace bayesprice {
namespace {

Rational R(const char* s) { return Rational::parse(s); }

constexpr BuyerModel kWeak{TieBreak::MostExpensive, PurchaseRule::NonNegative};
constexpr BuyerModel kStrict{TieBreak::MostExpensive, PurchaseRule::StrictlyPositive};

std::vector<SqrtExpr> values(std::initializer_list<long> vs) {
  return {vs.begin(), vs.end()};
}

PriceVector prices(std::initializer_list<long> ps) {
  PriceVector out;
  for (long p : ps) out.emplace_back(SqrtExpr(p));
  return out;
}

TEST(BuyerChoiceTest, Examples) {
  EXPECT_EQ(buyer_choice(values({5, 3}), prices({4, 1})), 1U);
  EXPECT_EQ(buyer_choice(values({5, 5}), prices({5, 5})), std::nullopt);
  EXPECT_EQ(buyer_choice(values({6, 6}), prices({5, 4})), 1U);
  EXPECT_EQ(buyer_choice(values({6, 6}), prices({4, 4})), 0U);
}

TEST(BuyerChoiceTest, TieRules) {
  // Utilities tie at 1; prices 2 and 4.
  const auto v = values({3, 5});
  const auto p = prices({2, 4});
  EXPECT_EQ(buyer_choice(v, p, {TieBreak::MostExpensive}), 1U);
  EXPECT_EQ(buyer_choice(v, p, {TieBreak::Cheapest}), 0U);
  EXPECT_EQ(buyer_choice(v, p, {TieBreak::LowestIndex}), 0U);
  // Unpriced items are never chosen.
  PriceVector q = p;
  q[1] = std::nullopt;
  EXPECT_EQ(buyer_choice(v, q), 0U);
  // Zero utility buys only under the weak rule.
  EXPECT_EQ(buyer_choice(values({5, 5}), prices({5, 5}), kWeak), 0U);
  EXPECT_THROW(buyer_choice(v, prices({1})), InvalidInstance);
}

TEST(BuyerChoiceTest, IrrationalUtilities) {
  // sqrt(2) - 1 ~= 0.414 vs 1/2.
  std::vector<SqrtExpr> v{SqrtExpr::sqrt(Integer(2)), SqrtExpr(R("3/2"))};
  EXPECT_EQ(buyer_choice(v, prices({1, 1})), 1U);
}

TEST(ExpectedRevenueTest, SingleItem) {
  const std::vector<TwoPointItem> item{{10, 0, R("1/2")}};
  EXPECT_EQ(expected_revenue(item, prices({10}), kWeak), SqrtExpr(5));
  EXPECT_EQ(expected_revenue(item, prices({10}), kStrict), SqrtExpr(0));
  EXPECT_EQ(expected_revenue(item, prices({9}), kStrict), SqrtExpr(R("9/2")));
}

TEST(ExpectedRevenueTest, IrrationalValuesConstruction) {
  // a = (1, 4), K = 2: eps = 1/16, T = 9.
  const auto r = build_ud_values({{1, 4}, 2});
  EXPECT_EQ(expected_revenue(r.items, r.scheme1, kWeak), SqrtExpr(R("9/2")));
  // 63/16 + 27/32.
  EXPECT_EQ(expected_revenue(r.items, r.scheme2, kWeak), SqrtExpr(R("153/32")));
}

TEST(ExpectedRevenueTest, IrrationalProbabilities) {
  // p = 1 - sqrt(1/2) at price 1.
  const SqrtExpr p = SqrtExpr(1) - SqrtExpr::sqrt(R("1/2"));
  const std::vector<TwoPointItem> item{{1, 0, p}};
  EXPECT_EQ(expected_revenue(item, prices({1}), kWeak), p);
}

TEST(ExpectedRevenueTest, Errors) {
  std::vector<TwoPointItem> many(21, TwoPointItem{1, 0, R("1/2")});
  EXPECT_THROW(expected_revenue(many, PriceVector(21)), TooManyItems);
  const std::vector<TwoPointItem> bad_p{{1, 0, R("3/2")}};
  EXPECT_THROW(expected_revenue(bad_p, prices({1})), InvalidInstance);
  const std::vector<TwoPointItem> inverted{{0, 1, R("1/2")}};
  EXPECT_THROW(expected_revenue(inverted, prices({1})), InvalidInstance);
  const std::vector<TwoPointItem> irr_p{{1, 0, SqrtExpr::sqrt(Integer(2))}};
  EXPECT_THROW(expected_revenue(irr_p, prices({1})), InvalidInstance);
}

TEST(BestOverCandidatesTest, Examples) {
  const std::vector<TwoPointItem> item{{10, 0, R("1/2")}};
  const std::vector<std::vector<Price>> five_ten{{SqrtExpr(5), SqrtExpr(10)}};
  // Price 5 earns 5/2 under either rule; price 10 earns 5 only when buying at zero utility.
  const auto weak = best_over_candidates(item, five_ten, kWeak);
  EXPECT_EQ(weak.prices, prices({10}));
  EXPECT_EQ(weak.revenue, SqrtExpr(5));
  const auto strict = best_over_candidates(item, five_ten, kStrict);
  EXPECT_EQ(strict.prices, prices({5}));
  EXPECT_EQ(strict.revenue, SqrtExpr(R("5/2")));

  // Deterministic items valued 3 and 7, candidates {value, unpriced}.
  const std::vector<TwoPointItem> det{{3, 3, R("1")}, {7, 7, R("1")}};
  const std::vector<std::vector<Price>> supports{{SqrtExpr(3), std::nullopt},
                                                 {SqrtExpr(7), std::nullopt}};
  const auto d = best_over_candidates(det, supports, kWeak);
  EXPECT_EQ(d.prices, prices({3, 7}));
  EXPECT_EQ(d.revenue, SqrtExpr(7));
  EXPECT_EQ(d.evaluated, 4U);
  EXPECT_EQ(best_over_candidates(det, supports, kStrict).revenue, SqrtExpr(0));

  const std::vector<std::vector<Price>> none{{std::nullopt}, {std::nullopt}};
  EXPECT_EQ(best_over_candidates(det, none).revenue, SqrtExpr(0));
}

TEST(BestOverCandidatesTest, FirstMaximizerWins) {
  // Item valued 2 or 1 with prob 1/2: price 1 earns 1, price 2 earns 1.
  const std::vector<TwoPointItem> item{{2, 1, R("1/2")}};
  const auto r = best_over_candidates(item, {{SqrtExpr(2), SqrtExpr(1)}}, kWeak);
  EXPECT_EQ(r.prices, prices({2}));
}

TEST(BestOverCandidatesTest, Limits) {
  std::vector<TwoPointItem> items(7, TwoPointItem{1, 0, R("1/2")});
  std::vector<std::vector<Price>> sets(7, std::vector<Price>(8, SqrtExpr(1)));
  EXPECT_THROW(best_over_candidates(items, sets), SearchTooLarge);
  EXPECT_THROW(best_over_candidates(items, {}), InvalidInstance);
}

// Sampling oracle: integer values, rational probabilities, choice by a direct
// scan in exact rationals.
Rational simulate(const std::vector<long>& highs, const std::vector<long>& lows,
                  const std::vector<Rational>& ps, const std::vector<std::optional<long>>& price,
                  BuyerModel model, std::mt19937_64& rng, int samples, double* std_error) {
  double sum = 0, sum_sq = 0;
  Rational total = 0;
  for (int s = 0; s < samples; ++s) {
    long best_u = 0, best_price = 0;
    bool bought = false;
    for (std::size_t i = 0; i < highs.size(); ++i) {
      const Integer den = ps[i].denominator();
      const bool high = Integer(static_cast<long>(rng() % den.get_ui())) < ps[i].numerator();
      if (!price[i]) continue;
      const long u = (high ? highs[i] : lows[i]) - *price[i];
      const bool ok = model.purchase == PurchaseRule::NonNegative ? u >= 0 : u > 0;
      if (!ok) continue;
      if (!bought || u > best_u || (u == best_u && *price[i] > best_price)) {
        bought = true;
        best_u = u;
        best_price = *price[i];
      }
    }
    const long paid = bought ? best_price : 0;
    total += paid;
    sum += static_cast<double>(paid);
    sum_sq += static_cast<double>(paid) * static_cast<double>(paid);
  }
  const double mean = sum / samples;
  *std_error = std::sqrt((sum_sq / samples - mean * mean) / samples);
  return total / Rational(samples);
}

TEST(ExpectedRevenueTest, AgreesWithMonteCarlo) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = static_cast<std::size_t>(testing::draw(rng, 1, 5));
    std::vector<long> highs, lows;
    std::vector<Rational> ps;
    std::vector<std::optional<long>> price;
    std::vector<TwoPointItem> items;
    PriceVector exact_prices;
    for (std::size_t i = 0; i < n; ++i) {
      long lo = testing::draw(rng, 0, 10), hi = testing::draw(rng, 0, 10);
      if (lo > hi) std::swap(lo, hi);
      highs.push_back(hi);
      lows.push_back(lo);
      ps.push_back(testing::draw_probability(rng, 16));
      items.push_back({hi, lo, ps.back()});
      if (testing::draw(rng, 0, 4) == 0) {
        price.emplace_back(std::nullopt);
        exact_prices.emplace_back(std::nullopt);
      } else {
        price.emplace_back(testing::draw(rng, 0, 10));
        exact_prices.emplace_back(SqrtExpr(*price.back()));
      }
    }
    for (const BuyerModel model : {kWeak, kStrict}) {
      const SqrtExpr exact = expected_revenue(items, exact_prices, model);
      ASSERT_TRUE(exact.is_rational());
      double se = 0;
      const Rational est = simulate(highs, lows, ps, price, model, rng, 100'000, &se);
      const double diff = std::abs((est - exact.rational_part()).to_double());
      EXPECT_LE(diff, 5 * se + 1e-12) << "trial " << trial;
    }
  }
}

TEST(ExpectedRevenueTest, UnpricedItemsAreIrrelevant) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<TwoPointItem> items;
    PriceVector p;
    for (int i = 0; i < 4; ++i) {
      long lo = testing::draw(rng, 0, 9), hi = testing::draw(rng, 0, 9);
      if (lo > hi) std::swap(lo, hi);
      items.push_back({SqrtExpr::sqrt(Integer(hi * hi + testing::draw(rng, 0, 5))), SqrtExpr(lo),
                       testing::draw_probability(rng, 9)});
      p.emplace_back(SqrtExpr(testing::draw(rng, 0, 4)));
    }
    p[2] = std::nullopt;
    const SqrtExpr before = expected_revenue(items, p, kWeak);
    items[2] = {SqrtExpr(100), SqrtExpr(50), R("1/3")};
    EXPECT_EQ(expected_revenue(items, p, kWeak), before);
  }
}

TEST(ExpectedRevenueTest, SupportCandidatesMatchBestScheme) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 8; ++trial) {
    const SqrtSumInstance sq = testing::random_sqrtsum(rng, 3, 20);
    const auto r = build_ud_values(sq);
    std::vector<std::vector<Price>> candidates;
    const SqrtExpr half_top(r.top_value / Rational(2)), top(r.top_value);
    for (const auto& item : r.items) {
      std::vector<Price> set;
      for (const SqrtExpr& v : {item.low, item.high, half_top, top}) {
        if (std::find(set.begin(), set.end(), Price(v)) == set.end()) set.emplace_back(v);
      }
      set.emplace_back(std::nullopt);
      candidates.push_back(std::move(set));
    }
    const auto best = best_over_candidates(r.items, candidates, kWeak);
    const SqrtExpr s1 = expected_revenue(r.items, r.scheme1, kWeak);
    const SqrtExpr s2 = expected_revenue(r.items, r.scheme2, kWeak);
    const SqrtExpr scheme_max = compare(s1, s2) >= 0 ? s1 : s2;
    EXPECT_EQ(best.revenue, scheme_max) << "trial " << trial;
  }
}

}  // namespace
}  // namespace bayesprice
