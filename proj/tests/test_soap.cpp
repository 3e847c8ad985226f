#include <gtest/gtest.h>

#include <random>

#include "bayesprice/errors.hpp"
#include "bayesprice/reductions.hpp"
#include "bayesprice/soap.hpp"
#include "oracles.hpp"

namespace bayesprice {
namespace {

Rational R(const char* s) { return Rational::parse(s); }

const SoapInstance kOneCoin{{{10, 0, Rational::parse("1/2")}}};
const SoapInstance kTwoCoins{{{4, 0, Rational::parse("1/2")}, {3, 0, Rational::parse("1/2")}}};

TEST(RevenueAtTest, Examples) {
  EXPECT_EQ(revenue_at(kOneCoin, 10), Rational(5));
  EXPECT_EQ(revenue_at(kTwoCoins, 3), R("9/4"));
  EXPECT_EQ(revenue_at(kTwoCoins, 8), Rational(0));
  EXPECT_EQ(revenue_at(kTwoCoins, 0), Rational(0));
  // Fractional prices face the tail of the next integer.
  EXPECT_EQ(revenue_at(kTwoCoins, R("5/2")), R("5/2") * R("3/4"));
  EXPECT_THROW(revenue_at(kTwoCoins, -1), InvalidInstance);
}

TEST(OptimalPriceTest, Examples) {
  const auto one = optimal_price(kOneCoin);
  EXPECT_EQ(one.price, 10);
  EXPECT_EQ(one.revenue, Rational(5));

  // Candidates {3, 4, 7} give 9/4, 2, 7/4.
  const auto two = optimal_price(kTwoCoins, true);
  EXPECT_EQ(two.price, 3);
  EXPECT_EQ(two.revenue, R("9/4"));
  ASSERT_TRUE(two.curve);
  EXPECT_EQ(*two.curve, (std::vector<std::pair<Value, Rational>>{
                            {3, R("9/4")}, {4, Rational(2)}, {7, R("7/4")}}));

  // Subset-sum construction a=(1,2), T=2 below its threshold p* = 95/287.
  const SubsetSumInstance ssi{{1, 2}, 2};
  const auto low = optimal_price(build_soap_subsetsum(ssi, R("1/10")));
  EXPECT_EQ(low.price, 1);
  EXPECT_EQ(low.revenue, Rational(1));
}

TEST(OptimalPriceTest, TiesGoToLowestPrice) {
  // Price 1 earns 1, price 2 earns 2 * 1/2 = 1.
  const SoapInstance tie{{{2, 1, R("1/2")}}};
  EXPECT_EQ(optimal_price(tie).price, 1);
}

TEST(OptimalPriceTest, AllZeroSum) {
  const auto r = optimal_price(SoapInstance{{{0, 0, R("1/2")}}});
  EXPECT_EQ(r.price, 0);
  EXPECT_EQ(r.revenue, Rational(0));
}

TEST(GrandBundleTest, MatchesOptimalPrice) {
  const auto a = grand_bundle_price(kTwoCoins.attributes);
  EXPECT_EQ(a.price, 3);
  EXPECT_EQ(a.revenue, R("9/4"));
  const auto b = grand_bundle_price(kOneCoin.attributes);
  EXPECT_EQ(b.price, 10);
  EXPECT_EQ(b.revenue, Rational(5));
  const SubsetSumInstance ssi{{1, 2}, 2};
  const auto c = grand_bundle_price(build_soap_subsetsum(ssi, R("1/10")).attributes);
  EXPECT_EQ(c.price, 1);
  EXPECT_EQ(c.revenue, Rational(1));
}

TEST(MonteCarloTest, Examples) {
  const auto est = mc_revenue(kOneCoin, 10, 100'000, 42);
  EXPECT_LE((est.estimate - Rational(5)).abs().to_double(), 5 * est.standard_error);
  EXPECT_GT(est.standard_error, 0.0);
  EXPECT_EQ(mc_revenue(SoapInstance{{{1, 0, R("0")}}}, 1, 10, 7).estimate, Rational(0));
  EXPECT_EQ(mc_revenue(SoapInstance{{{1, 0, R("1")}}}, 1, 10, 7).estimate, Rational(1));
  // Deterministic per seed.
  EXPECT_EQ(mc_revenue(kTwoCoins, 3, 1000, 9).estimate, mc_revenue(kTwoCoins, 3, 1000, 9).estimate);
  EXPECT_THROW(mc_revenue(kTwoCoins, 3, 0, 9), InvalidInstance);
}

TEST(OptimalPriceTest, SupportRestrictionMatchesDenseGrid) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = static_cast<std::size_t>(testing::draw(rng, 1, 10));
    const SoapInstance inst = testing::random_soap(rng, n, 30, 12);
    const auto report = optimal_price(inst);
    EXPECT_EQ(report.revenue, testing::brute_revenue(inst, report.price));

    const auto table = sum_distribution(inst);
    const Value top = inst.max_total();
    Rational grid_best = 0;
    for (Value step = 0; step <= 64 * top + 64; ++step) {
      const Rational price(Integer(step), Integer(64));
      const Rational rev = revenue_at(table, price);
      if (rev > grid_best) grid_best = rev;
    }
    EXPECT_EQ(grid_best, report.revenue);
  }
}

TEST(OptimalPriceTest, ScalingEquivariance) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const SoapInstance inst = testing::random_soap(rng, 6, 20, 30);
    const Value c = testing::draw(rng, 1, 7);
    SoapInstance scaled = inst;
    for (auto& a : scaled.attributes) {
      a.high *= c;
      a.low *= c;
    }
    const auto r = optimal_price(inst);
    const auto rs = optimal_price(scaled);
    EXPECT_EQ(rs.price, c * r.price);
    EXPECT_EQ(rs.revenue, Rational(c) * r.revenue);
  }
}

TEST(RevenueAtTest, BoundaryPrices) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const SoapInstance inst = testing::random_soap(rng, 5, 25, 10);
    EXPECT_EQ(revenue_at(inst, 0), Rational(0));
    EXPECT_EQ(revenue_at(inst, Rational(inst.max_total() + 1)), Rational(0));
    EXPECT_EQ(revenue_at(inst, R("1/3") + Rational(inst.max_total())), Rational(0));
  }
}

}  // namespace
}  // namespace bayesprice
