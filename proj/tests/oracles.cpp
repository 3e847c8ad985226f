#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <mpfr.h>

namespace bayesprice::testing {

std::uint64_t brute_subset_count(const std::vector<Value>& a, Value target) {
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a.size()); ++mask) {
    Value s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask >> i & 1U) s += a[i];
    }
    if (s >= target) ++count;
  }
  return count;
}

std::vector<std::uint64_t> brute_subset_counts_by_size(const std::vector<Value>& a, Value target) {
  std::vector<std::uint64_t> out(a.size() + 1, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a.size()); ++mask) {
    Value s = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask >> i & 1U) {
        s += a[i];
        ++k;
      }
    }
    if (s >= target) ++out[k];
  }
  return out;
}

namespace {

void recurse(const SoapInstance& inst, std::size_t i, Value sum, const Rational& prob,
             std::map<Value, Rational>& out) {
  if (prob.is_zero()) return;
  if (i == inst.attributes.size()) {
    out[sum] += prob;
    return;
  }
  const auto& a = inst.attributes[i];
  recurse(inst, i + 1, sum + a.high, prob * a.p_high, out);
  recurse(inst, i + 1, sum + a.low, prob * (Rational(1) - a.p_high), out);
}

}  // namespace

std::map<Value, Rational> brute_distribution(const SoapInstance& instance) {
  std::map<Value, Rational> out;
  recurse(instance, 0, 0, Rational(1), out);
  return out;
}

Rational brute_revenue(const SoapInstance& instance, const Rational& price) {
  Rational tail = 0;
  for (const auto& [s, m] : brute_distribution(instance)) {
    if (Rational(s) >= price) tail += m;
  }
  return price * tail;
}

FloatEval mpfr_eval(const SqrtExpr& e) {
  constexpr mpfr_prec_t kPrec = 256;
  mpfr_t acc, term, bound, mag;
  mpfr_inits2(kPrec, acc, term, bound, mag, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(acc, e.rational_part().gmp().get_mpq_t(), MPFR_RNDN);
  mpfr_abs(mag, acc, MPFR_RNDU);
  std::size_t ops = 1;
  for (const auto& [d, r] : e.terms()) {
    mpfr_set_z(term, d.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(term, term, MPFR_RNDN);
    mpfr_mul_q(term, term, r.gmp().get_mpq_t(), MPFR_RNDN);
    mpfr_add(acc, acc, term, MPFR_RNDN);
    mpfr_abs(term, term, MPFR_RNDU);
    mpfr_add(mag, mag, term, MPFR_RNDU);
    ops += 4;
  }
  // Each rounding contributes at most 2^-(prec-1) relative to a partial
  // magnitude bounded by sum |term|; 2^-200 * ops * mag is a generous bound.
  mpfr_mul_2si(bound, mag, -200, MPFR_RNDU);
  mpfr_mul_ui(bound, bound, ops, MPFR_RNDU);
  FloatEval out;
  out.value = mpfr_get_d(acc, MPFR_RNDN);
  out.sign = mpfr_sgn(acc);
  mpfr_abs(term, acc, MPFR_RNDD);
  out.certain = mpfr_cmp(term, bound) > 0;
  mpfr_clears(acc, term, bound, mag, static_cast<mpfr_ptr>(nullptr));
  return out;
}

ClosedForm closed_form_values(const SqrtSumInstance& sq) {
  const long n = static_cast<long>(sq.a.size());
  const Rational k(sq.k);
  const Rational eps = k / (Rational(4 * n) * Rational(std::max(sq.k, sq.a.back())));
  const Rational half(Integer(1), Integer(2));
  const Rational top = (half + eps) * k / (Rational(n) * eps);
  SqrtExpr roots;
  for (const auto& v : sq.a) roots += SqrtExpr::sqrt(v);
  ClosedForm out;
  out.scheme1 = SqrtExpr(top / Rational(2));
  out.scheme2 = SqrtExpr((half - eps) * top) + roots * ((half + eps) / Rational(n));
  return out;
}

ClosedForm closed_form_probs(const SqrtSumInstance& sq) {
  const long n = static_cast<long>(sq.a.size());
  const Rational bound = std::max(Rational(3) * Rational(sq.k) / Rational(n), Rational(sq.a.back()));
  const Integer x = bound.floor() + 1;
  const Rational top = Rational(3) * (Rational(n) - Rational(sq.k) / Rational(x));
  SqrtExpr roots;
  for (const auto& v : sq.a) roots += SqrtExpr::sqrt(v);
  ClosedForm out;
  out.scheme1 = SqrtExpr(top / Rational(2));
  const Rational three_quarters(Integer(3), Integer(4));
  out.scheme2 = SqrtExpr(top / Rational(4)) +
                (SqrtExpr(Rational(n)) - roots * Rational(Integer(1), x)) * three_quarters;
  return out;
}

long draw(std::mt19937_64& rng, long lo, long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(rng() % span);
}

Rational draw_probability(std::mt19937_64& rng, long max_den) {
  const long den = draw(rng, 1, max_den);
  return Rational(Integer(draw(rng, 0, den)), Integer(den));
}

SoapInstance random_soap(std::mt19937_64& rng, std::size_t n, Value max_value, long max_den) {
  SoapInstance s;
  for (std::size_t i = 0; i < n; ++i) {
    s.attributes.push_back(
        {draw(rng, 0, max_value), draw(rng, 0, max_value), draw_probability(rng, max_den)});
  }
  return s;
}

SubsetSumInstance random_subsetsum(std::mt19937_64& rng, std::size_t max_n, Value max_a) {
  SubsetSumInstance s;
  const auto n = static_cast<std::size_t>(draw(rng, 1, static_cast<long>(max_n)));
  for (std::size_t i = 0; i < n; ++i) s.a.push_back(draw(rng, 1, max_a));
  s.target = draw(rng, 1, s.total());
  return s;
}

SqrtSumInstance random_sqrtsum(std::mt19937_64& rng, std::size_t max_n, long max_a) {
  for (;;) {
    SqrtSumInstance s;
    const auto n = static_cast<std::size_t>(draw(rng, 1, static_cast<long>(max_n)));
    std::vector<long> a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(draw(rng, 1, max_a));
    std::sort(a.begin(), a.end());
    double roots = 0;
    for (const long v : a) {
      s.a.emplace_back(v);
      roots += std::sqrt(static_cast<double>(v));
    }
    const long centre = static_cast<long>(std::floor(roots));
    s.k = draw(rng, std::max(1L, centre - 1), centre + 2);
    // Positive roots of non-squares never cancel, so equality needs every
    // entry to be a perfect square with integer roots summing to K.
    bool all_squares = true;
    long root_sum = 0;
    for (const long v : a) {
      const long r = std::lround(std::sqrt(static_cast<double>(v)));
      all_squares = all_squares && r * r == v;
      root_sum += r;
    }
    if (!(all_squares && s.k == root_sum)) return s;
  }
}

}  // namespace bayesprice::testing
