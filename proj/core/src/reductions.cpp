#include "bayesprice/reductions.hpp"

#include <algorithm>

#include "bayesprice/errors.hpp"

namespace bayesprice {

// ---------------------------------------------------------------------------
// Subset counting

void SubsetSumInstance::validate() const {
  if (a.empty()) throw InvalidInstance("subset-sum instance needs at least one value");
  for (const Value v : a) {
    if (v < 1) throw InvalidInstance("subset-sum values must be positive integers");
  }
  if (target < 1) throw InvalidInstance("target T must be a positive integer");
  if (target > total()) throw InvalidInstance("target T exceeds the sum of the values");
}

Value SubsetSumInstance::total() const {
  Value s = 0;
  for (const Value v : a) {
    if (__builtin_add_overflow(s, v, &s)) throw BudgetExceeded("subset-sum total overflows");
  }
  return s;
}

SubsetSumEncoding encode_subsetsum(const SubsetSumInstance& ssi) {
  ssi.validate();
  SubsetSumEncoding enc;
  enc.n = ssi.a.size();
  enc.target = ssi.target;
  enc.high_top = ssi.target + 1;
  const Integer spread = Integer(static_cast<long>(enc.n)) + 1 + ssi.total();
  Integer two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, enc.n);
  enc.epsilon = Rational(Integer(1), two_n * spread * spread);
  enc.p1 = enc.epsilon / Rational(static_cast<long>(enc.n));
  enc.base = enc.p1.denominator() - 1;
  return enc;
}

SoapInstance build_soap_subsetsum(const SubsetSumInstance& ssi, const Rational& p) {
  const auto enc = encode_subsetsum(ssi);
  if (p.sign() < 0 || p > Rational(1)) throw InvalidInstance("p must lie in [0, 1]");
  SoapInstance out;
  out.attributes.reserve(enc.n + 1);
  for (const Value v : ssi.a) out.attributes.push_back({v, 0, enc.p1});
  out.attributes.push_back({enc.high_top, 1, p});
  return out;
}

namespace {

OracleCall oracle_call(const SubsetSumInstance& ssi, const Rational& p) {
  const SubsetSumEncoding enc = encode_subsetsum(ssi);
  const SurvivalTable table = sum_distribution(build_soap_subsetsum(ssi, p));
  const PriceReport best = optimal_price(table);
  if (best.price != 1 && best.price != enc.high_top) {
    throw ProofViolation("optimal price " + std::to_string(best.price) + " at p = " +
                         p.to_string() + " is neither 1 nor T+1");
  }
  const Rational top = revenue_at(table, Rational(enc.high_top));
  const auto answer = top >= best.revenue ? OracleAnswer::PriceTplus1 : OracleAnswer::PriceOne;
  return {p, answer, best.price};
}

}  // namespace

OracleAnswer thm1_oracle(const SubsetSumInstance& ssi, const Rational& p) {
  return oracle_call(ssi, p).answer;
}

Rational tail_from_pstar(const Rational& pstar, Value target) {
  const Rational c(Integer(1), Integer(static_cast<long>(target)) + 1);
  return (c - pstar) / (Rational(1) - pstar);
}

Rational pstar_from_tail(const Rational& tail, Value target) {
  const Rational c(Integer(1), Integer(static_cast<long>(target)) + 1);
  return (c - tail) / (Rational(1) - tail);
}

Rational find_pstar(const SubsetSumInstance& ssi, std::vector<OracleCall>* log) {
  const SubsetSumEncoding enc = encode_subsetsum(ssi);
  std::vector<OracleCall> calls;
  auto ask = [&](const Rational& p) {
    calls.push_back(oracle_call(ssi, p));
    return calls.back().answer;
  };

  Rational lo = 0, hi = 1;
  if (ask(lo) != OracleAnswer::PriceOne || ask(hi) != OracleAnswer::PriceTplus1) {
    throw ProofViolation("oracle does not switch from price 1 to T+1 across [0, 1]");
  }

  // Separation: Q takes values m * p1^n for integers m. With c = 1/(T+1),
  // p*(Q) = (c - Q)/(1 - Q) has |dp*/dQ| = (1 - c)/(1 - Q)^2 >= T/(T+1) >= 1/2
  // for Q in [0, 1), so adjacent thresholds sit at least p1^n / 2 apart and the
  // inverse map has slope at most 2 (up to a (1 + p1^n)^2 factor just below
  // Q = 0). Bisecting to width p1^n / 4 puts the midpoint within p1^n / 8 of
  // p*, hence the estimated Q within about p1^n / 4 of the true Q, and
  // rounding Q / p1^n recovers the exact integer.
  const Rational unit = pow(enc.p1, enc.n);
  const Rational width_limit = unit / Rational(4);
  while (hi - lo > width_limit) {
    const Rational mid = (lo + hi) / Rational(2);
    if (ask(mid) == OracleAnswer::PriceTplus1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const Rational mid = (lo + hi) / Rational(2);
  const Rational scaled = tail_from_pstar(mid, enc.target) / unit;
  const Integer m = (scaled + Rational(Integer(1), Integer(2))).floor();
  const Rational error = (scaled - Rational(m)).abs();
  if (m < 0 || error >= Rational(Integer(1), Integer(2))) {
    throw ProofViolation("estimated tail is not within rounding distance of a lattice point");
  }
  const Rational tail = Rational(m) * unit;
  const Rational pstar = pstar_from_tail(tail, enc.target);

  if (!(lo < pstar && pstar <= hi)) {
    throw ProofViolation("recovered p* " + pstar.to_string() + " lies outside the final bracket");
  }
  for (const auto& call : calls) {
    const bool expect_top = call.p >= pstar;
    if (expect_top != (call.answer == OracleAnswer::PriceTplus1)) {
      throw ProofViolation("oracle answers are not monotone in p (at p = " + call.p.to_string() +
                           ")");
    }
  }
  if (log) *log = std::move(calls);
  return pstar;
}

namespace {

Integer binomial(std::size_t n, std::size_t k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace

std::vector<Integer> decode_counts(const Rational& tail, std::size_t n, const Rational& p1) {
  if (p1.sign() <= 0 || p1.numerator() != 1) {
    throw InvalidInstance("p1 must be the reciprocal of a positive integer");
  }
  const Integer base = p1.denominator() - 1;
  Integer two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, n);
  if (base <= two_n) throw InvalidInstance("decoding base 1/p1 - 1 must exceed 2^n");

  const Rational scaled = tail / pow(p1, n);
  if (!scaled.is_integer() || scaled.sign() < 0) {
    throw DecodeError("Q / p1^n = " + scaled.to_string() + " is not a nonnegative integer");
  }
  Integer rest = scaled.numerator();
  std::vector<Integer> counts(n + 1);
  // Least significant digit first: base^0 carries S(n), base^n carries S(0).
  for (std::size_t j = 0; j <= n; ++j) {
    const std::size_t k = n - j;
    Integer digit;
    mpz_fdiv_qr(rest.get_mpz_t(), digit.get_mpz_t(), rest.get_mpz_t(), base.get_mpz_t());
    if (digit > binomial(n, k)) {
      throw DecodeError("digit " + digit.get_str() + " for subsets of size " + std::to_string(k) +
                        " exceeds C(n, k)");
    }
    counts[k] = digit;
  }
  if (rest != 0) throw DecodeError("Q / p1^n has more than n + 1 base digits");
  return counts;
}

ReductionTranscript run_count_pipeline(const SubsetSumInstance& ssi) {
  ReductionTranscript t;
  t.source = ssi;
  t.encoding = encode_subsetsum(ssi);
  t.pstar = find_pstar(ssi, &t.oracle_calls);
  t.tail = tail_from_pstar(t.pstar, ssi.target);
  t.counts = decode_counts(t.tail, t.encoding.n, t.encoding.p1);
  t.count = 0;
  for (const auto& c : t.counts) t.count += c;

  t.instance_at_pstar = build_soap_subsetsum(ssi, t.pstar);
  const SurvivalTable table = sum_distribution(t.instance_at_pstar);
  t.revenue_at_one = revenue_at(table, Rational(1));
  t.revenue_at_top = revenue_at(table, Rational(t.encoding.high_top));
  if (t.revenue_at_one != Rational(1) || t.revenue_at_top != Rational(1)) {
    throw ProofViolation("revenues at p* are " + t.revenue_at_one.to_string() + " and " +
                         t.revenue_at_top.to_string() + ", expected exactly 1");
  }
  return t;
}

Integer count_subsets(const SubsetSumInstance& ssi) { return run_count_pipeline(ssi).count; }

Thm1CaseReport verify_thm1_cases(const SubsetSumInstance& ssi, const Rational& p) {
  const SubsetSumEncoding enc = encode_subsetsum(ssi);
  const SurvivalTable table = sum_distribution(build_soap_subsetsum(ssi, p));
  const Value total = ssi.total();
  const Value top = enc.high_top;
  const Rational& eps = enc.epsilon;

  Thm1CaseReport report;
  report.p = p;
  report.epsilon = eps;
  auto fail = [&](const std::string& what, Value price) {
    throw ProofViolation(what + " (price " + std::to_string(price) + ", p = " + p.to_string() +
                         ")");
  };

  bool checked[6] = {};
  const Rational half(Integer(1), Integer(2));
  for (Value b = 1; b <= top + total + 1; ++b) {
    const Rational price(b);
    const Rational rev = revenue_at(table, price);
    report.revenues.emplace_back(b, rev);
    if (rev > report.optimal_revenue) {
      report.optimal_revenue = rev;
      report.optimal_price = b;
    }
    // Prices strictly inside (b - 1, b) face the same tail as b.
    if (revenue_at(table, price - half) > rev) fail("revenue inside a price gap exceeds its right endpoint", b);

    if (b == 1) {
      if (rev != Rational(1)) fail("case 1: revenue at price 1 is not 1", b);
      checked[1] = true;
    } else if (b < top) {
      if (rev > price * (p + (Rational(1) - p) * eps)) fail("case 2: revenue above B(p + (1-p)eps)", b);
      checked[2] = true;
    } else if (b == top) {
      if (rev < p * Rational(top)) fail("case 3: revenue at T+1 below p(T+1)", b);
      checked[3] = true;
    } else if (b <= top + total) {
      if (rev > Rational(top + total) * eps) fail("case 4: revenue above (T+1+sum a)eps", b);
      if (rev >= Rational(1)) fail("case 4: revenue not below 1", b);
      checked[4] = true;
    } else {
      if (!rev.is_zero()) fail("case 5: revenue above the maximum value is not 0", b);
      checked[5] = true;
    }
  }
  if (report.optimal_price != 1 && report.optimal_price != top) {
    fail("optimal price is neither 1 nor T+1", report.optimal_price);
  }

  const char* names[6] = {"", "case 1: revenue(1) = 1", "case 2: revenue(B) <= B(p + (1-p)eps) for 1 < B < T+1",
                          "case 3: revenue(T+1) >= p(T+1)",
                          "case 4: revenue(B) <= (T+1+sum a)eps < 1 for T+1 < B <= T+1+sum a",
                          "case 5: revenue(B) = 0 for B > T+1+sum a"};
  for (int c = 1; c <= 5; ++c) {
    if (checked[c]) report.checks.emplace_back(names[c]);
  }
  report.checks.emplace_back("gap dominance: revenue(B - 1/2) <= revenue(B)");
  report.checks.emplace_back("optimal price in {1, T+1}");
  return report;
}

// ---------------------------------------------------------------------------
// SQRT-SUM

void SqrtSumInstance::validate() const {
  if (a.empty()) throw InvalidInstance("SQRT-SUM instance needs at least one value");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 1) throw InvalidInstance("SQRT-SUM values must be positive integers");
    if (i > 0 && a[i] < a[i - 1]) throw InvalidInstance("SQRT-SUM values must be nondecreasing");
  }
  if (k < 1) throw InvalidInstance("K must be a positive integer");
}

namespace {

void reject_equality(const SqrtSumInstance& sq) {
  sq.validate();
  if (sqrtsum_compare(sq.a, sq.k) == Comparison::Equal) {
    throw EqualityInstance("sum of square roots equals K = " + sq.k.get_str());
  }
}

constexpr BuyerModel kReductionBuyer{TieBreak::MostExpensive, kReductionPurchaseRule};

}  // namespace

UnitDemandReduction build_ud_values(const SqrtSumInstance& sq) {
  reject_equality(sq);
  const std::size_t n = sq.a.size();
  const Rational nn(static_cast<long>(n));
  const Rational k(sq.k);
  const Rational half(Integer(1), Integer(2));

  UnitDemandReduction r;
  r.epsilon = k / (Rational(4) * nn * Rational(std::max(sq.k, sq.a.back())));
  r.top_value = (half + r.epsilon) * k / (nn * r.epsilon);
  const Rational half_top = r.top_value / Rational(2);

  for (std::size_t i = 0; i < n; ++i) {
    SqrtExpr root = SqrtExpr::sqrt(sq.a[i]);
    r.items.push_back({root, SqrtExpr(0), SqrtExpr(Rational(Integer(1), Integer(static_cast<long>(i + 1))))});
    r.scheme1.push_back(std::nullopt);
    r.scheme2.push_back(std::move(root));
  }
  r.items.push_back({SqrtExpr(r.top_value), SqrtExpr(half_top), SqrtExpr(half - r.epsilon)});
  r.scheme1.push_back(SqrtExpr(half_top));
  r.scheme2.push_back(SqrtExpr(r.top_value));

  if (compare(SqrtExpr(half_top), r.items[n - 1].high) <= 0) {
    throw ProofViolation("T/2 does not exceed sqrt(a_n)");
  }
  return r;
}

UnitDemandReduction build_ud_probs(const SqrtSumInstance& sq) {
  reject_equality(sq);
  const std::size_t n = sq.a.size();
  const Rational nn(static_cast<long>(n));
  const Rational three_k_over_n = Rational(3) * Rational(sq.k) / nn;

  UnitDemandReduction r;
  r.x = std::max(three_k_over_n, Rational(sq.a.back())).floor() + 1;
  r.top_value = Rational(3) * (nn - Rational(sq.k) / Rational(r.x));
  const Rational half_top = r.top_value / Rational(2);

  std::vector<Integer> extended = sq.a;
  extended.push_back(r.x * r.x);
  for (std::size_t i = 0; i < n; ++i) {
    const SqrtExpr stay_low = SqrtExpr::sqrt(Rational(extended[i], extended[i + 1]));
    const SqrtExpr value(static_cast<long>(i + 1));
    r.items.push_back({value, SqrtExpr(0), SqrtExpr(1) - stay_low});
    r.scheme1.push_back(std::nullopt);
    r.scheme2.push_back(value);
  }
  r.items.push_back({SqrtExpr(r.top_value), SqrtExpr(half_top),
                     SqrtExpr(Rational(Integer(1), Integer(4)))});
  r.scheme1.push_back(SqrtExpr(half_top));
  r.scheme2.push_back(SqrtExpr(r.top_value));

  if (half_top <= nn) throw ProofViolation("T/2 does not exceed n");
  return r;
}

namespace {

SchemeComparison run_schemes(const UnitDemandReduction& r, bool greater_when_scheme2_wins) {
  SchemeComparison c;
  c.revenue1 = expected_revenue(r.items, r.scheme1, kReductionBuyer);
  c.revenue2 = expected_revenue(r.items, r.scheme2, kReductionBuyer);
  const int cmp = compare(c.revenue2, c.revenue1);
  if (cmp == 0) throw ProofViolation("scheme revenues tie on a non-equality instance");
  const bool scheme2_wins = cmp > 0;
  c.decision = scheme2_wins == greater_when_scheme2_wins ? SqrtSumDecision::Greater
                                                         : SqrtSumDecision::Less;
  return c;
}

}  // namespace

SchemeComparison compare_schemes_values(const SqrtSumInstance& sq) {
  return run_schemes(build_ud_values(sq), true);
}

SchemeComparison compare_schemes_probs(const SqrtSumInstance& sq) {
  return run_schemes(build_ud_probs(sq), false);
}

SqrtSumDecision decide_via_values(const SqrtSumInstance& sq) {
  return compare_schemes_values(sq).decision;
}

SqrtSumDecision decide_via_probs(const SqrtSumInstance& sq) {
  return compare_schemes_probs(sq).decision;
}

std::string to_string(OracleAnswer a) {
  return a == OracleAnswer::PriceOne ? "price_one" : "price_t_plus_1";
}

std::string to_string(SqrtSumDecision d) {
  return d == SqrtSumDecision::Greater ? "greater" : "less";
}

}  // namespace bayesprice
