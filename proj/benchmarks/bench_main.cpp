#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "bayesprice/reductions.hpp"
#include "bayesprice/soap.hpp"

namespace bp = bayesprice;

namespace {

bp::SoapInstance soap_instance(std::size_t n, bp::Value max_value) {
  std::mt19937_64 rng(n);
  bp::SoapInstance s;
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = static_cast<bp::Value>(rng() % (max_value + 1));
    const auto hi = static_cast<bp::Value>(rng() % (max_value + 1));
    const long den = 1 + static_cast<long>(rng() % 1000);
    s.attributes.push_back(
        {hi, lo, bp::Rational(bp::Integer(static_cast<long>(rng() % (den + 1))), bp::Integer(den))});
  }
  return s;
}

void BM_SumDistribution(benchmark::State& state) {
  const auto s = soap_instance(static_cast<std::size_t>(state.range(0)), 1000);
  for (auto _ : state) benchmark::DoNotOptimize(bp::sum_distribution(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SumDistribution)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_OptimalPrice(benchmark::State& state) {
  const auto s = soap_instance(static_cast<std::size_t>(state.range(0)), 1000);
  for (auto _ : state) benchmark::DoNotOptimize(bp::optimal_price(s));
}
BENCHMARK(BM_OptimalPrice)->RangeMultiplier(2)->Range(4, 64);

// (sqrt(2) - 1)^k: positive, about 2^(-1.27k), so precision grows with k.
void BM_SignCloseCall(benchmark::State& state) {
  bp::SqrtExpr e(1);
  const bp::SqrtExpr base = bp::SqrtExpr::sqrt(bp::Integer(2)) - bp::SqrtExpr(1);
  for (long i = 0; i < state.range(0); ++i) e *= base;
  for (auto _ : state) benchmark::DoNotOptimize(bp::sign(e));
}
BENCHMARK(BM_SignCloseCall)->RangeMultiplier(4)->Range(4, 1024);

void BM_SqrtSumCompare(benchmark::State& state) {
  std::vector<bp::Integer> a;
  for (long i = 1; i <= state.range(0); ++i) a.emplace_back(2 * i + 1);
  bp::SqrtExpr roots;
  for (const auto& v : a) roots += bp::SqrtExpr::sqrt(v);
  const bp::Integer k = bp::Integer(static_cast<long>(roots.to_double()));
  for (auto _ : state) benchmark::DoNotOptimize(bp::sqrtsum_compare(a, k));
}
BENCHMARK(BM_SqrtSumCompare)->RangeMultiplier(2)->Range(2, 32);

void BM_FindPstar(benchmark::State& state) {
  bp::SubsetSumInstance ssi;
  for (long i = 1; i <= state.range(0); ++i) ssi.a.push_back(3 * i + 1);
  ssi.target = ssi.total() / 2;
  for (auto _ : state) benchmark::DoNotOptimize(bp::find_pstar(ssi));
}
BENCHMARK(BM_FindPstar)->DenseRange(2, 10, 2)->Unit(benchmark::kMillisecond);

void BM_SchemeComparisonValues(benchmark::State& state) {
  bp::SqrtSumInstance sq;
  for (long i = 1; i <= state.range(0); ++i) sq.a.emplace_back(i * 7);
  double roots = 0;
  for (const auto& v : sq.a) roots += std::sqrt(v.get_d());
  sq.k = static_cast<long>(roots) + 1;
  for (auto _ : state) benchmark::DoNotOptimize(bp::compare_schemes_values(sq));
}
BENCHMARK(BM_SchemeComparisonValues)->DenseRange(2, 10, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
