#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bayesprice/distmodel.hpp"
#include "bayesprice/exactnum.hpp"
#include "bayesprice/soap.hpp"
#include "bayesprice/unitdemand.hpp"

namespace bayesprice {

// ===========================================================================
// Counting subsets through a single-price oracle
// ===========================================================================

/// Count the subsets of `a` whose sum is at least `target`.
struct SubsetSumInstance {
  std::vector<Value> a;
  Value target = 0;

  /// n >= 1, every a_i >= 1, 1 <= target <= sum(a).
  void validate() const;
  Value total() const;

  friend bool operator==(const SubsetSumInstance&, const SubsetSumInstance&) = default;
};

/// Constants of the pricing instance built from a SubsetSumInstance.
struct SubsetSumEncoding {
  std::size_t n = 0;
  Rational p1;       // 1 / (2^n * n * (n + 1 + sum a)^2), shared by attributes 1..n
  Integer base;      // 1/p1 - 1, the digit base of the decoded counts
  Rational epsilon;  // 1 / (2^n * (n + 1 + sum a)^2) = n * p1
  Value target = 0;  // T
  Value high_top = 0;  // T + 1, the high value of the extra attribute (low value 1)
};

SubsetSumEncoding encode_subsetsum(const SubsetSumInstance& ssi);

/// n + 1 attributes: (a_i, 0) with probability p1 each, then (T + 1, 1) with
/// probability `p`.
SoapInstance build_soap_subsetsum(const SubsetSumInstance& ssi, const Rational& p);

enum class OracleAnswer { PriceOne, PriceTplus1 };

/// Solves the constructed instance exactly and reports which of the two
/// possible optimal prices wins. When both reach the optimum (p == p*) the
/// answer is PriceTplus1, so the set of p answering PriceTplus1 is a closed
/// half-line [p*, 1]. Throws ProofViolation if the optimum is elsewhere.
OracleAnswer thm1_oracle(const SubsetSumInstance& ssi, const Rational& p);

struct OracleCall {
  Rational p;
  OracleAnswer answer;
  Value price;  // optimal price under the lowest-price tie-break
};

/// Exact threshold at which prices 1 and T + 1 earn the same revenue.
///
/// Bisects dyadic p over [0, 1] until the bracket is at most p1^n / 4 wide,
/// estimates Q = Pr[V_n >= T] from the midpoint, snaps Q / p1^n to the nearest
/// integer and recomputes p* exactly from the snapped Q.
Rational find_pstar(const SubsetSumInstance& ssi, std::vector<OracleCall>* log = nullptr);

/// Q = (1/(T+1) - p*) / (1 - p*).
Rational tail_from_pstar(const Rational& pstar, Value target);
/// p* = (1/(T+1) - Q) / (1 - Q).
Rational pstar_from_tail(const Rational& tail, Value target);

/// Base-(1/p1 - 1) digits of Q / p1^n: entry k is the number of size-k
/// subsets, read from the coefficient of base^(n-k). Throws DecodeError when
/// Q / p1^n is not a nonnegative integer, has more than n + 1 digits, or a
/// digit exceeds C(n, k).
std::vector<Integer> decode_counts(const Rational& tail, std::size_t n, const Rational& p1);

/// Full record of one counting run.
struct ReductionTranscript {
  SubsetSumInstance source;
  SubsetSumEncoding encoding;
  SoapInstance instance_at_pstar;
  std::vector<OracleCall> oracle_calls;
  Rational pstar;
  Rational tail;  // Q = Pr[V_n >= T]
  std::vector<Integer> counts;  // S(k, T) for k = 0..n
  Integer count;
  Rational revenue_at_one;     // both exactly 1 at p*
  Rational revenue_at_top;
};

/// find_pstar, invert to Q, decode, and sum the digits. Verifies that both
/// candidate prices earn exactly 1 at the recovered p*.
ReductionTranscript run_count_pipeline(const SubsetSumInstance& ssi);

/// Number of subsets with sum >= T, computed through the pricing oracle.
Integer count_subsets(const SubsetSumInstance& ssi);

/// Exact revenues at every integer price 1..T+2+sum(a) with the case bounds
/// of the two-price argument checked.
struct Thm1CaseReport {
  Rational p;
  Rational epsilon;
  std::vector<std::pair<Value, Rational>> revenues;
  Value optimal_price = 0;
  Rational optimal_revenue;
  std::vector<std::string> checks;  // human-readable description of each passed check
};

/// Throws ProofViolation naming the first violated case.
Thm1CaseReport verify_thm1_cases(const SubsetSumInstance& ssi, const Rational& p);

// ===========================================================================
// Deciding SQRT-SUM through unit-demand pricing
// ===========================================================================

/// Is sum sqrt(a_i) greater than K? a is nondecreasing.
struct SqrtSumInstance {
  std::vector<Integer> a;
  Integer k;

  /// n >= 1, a_i >= 1 nondecreasing, K >= 1.
  void validate() const;

  friend bool operator==(const SqrtSumInstance&, const SqrtSumInstance&) = default;
};

/// The two candidate optimal pricings of a constructed unit-demand instance.
struct UnitDemandReduction {
  std::vector<TwoPointItem> items;
  PriceVector scheme1;
  PriceVector scheme2;
  Rational top_value;  // T; the last item takes T/2 or T
  Rational epsilon;    // irrational-values construction only
  Integer x;           // irrational-probabilities construction only
};

/// Items i <= n take sqrt(a_i) with probability 1/i, else 0; item n+1 takes
/// T/2 with probability 1/2 + eps and T otherwise. Scheme 1 offers only item
/// n+1 at T/2; scheme 2 offers item i at sqrt(a_i) and item n+1 at T.
/// Throws EqualityInstance when sum sqrt(a_i) == K.
UnitDemandReduction build_ud_values(const SqrtSumInstance& sq);

/// Items i <= n take value i with probability 1 - sqrt(a_i / a_{i+1}) where
/// a_{n+1} = X^2; item n+1 takes T/2 with probability 3/4 and T otherwise.
/// Scheme 1 offers only item n+1 at T/2; scheme 2 prices every item at its
/// high value. Throws EqualityInstance when sum sqrt(a_i) == K.
UnitDemandReduction build_ud_probs(const SqrtSumInstance& sq);

enum class SqrtSumDecision { Less, Greater };

struct SchemeComparison {
  SqrtExpr revenue1;
  SqrtExpr revenue2;
  SqrtSumDecision decision;
};

/// Revenues use TieBreak::MostExpensive with kReductionPurchaseRule.
SchemeComparison compare_schemes_values(const SqrtSumInstance& sq);
SchemeComparison compare_schemes_probs(const SqrtSumInstance& sq);

/// Greater iff scheme 2 out-earns scheme 1.
SqrtSumDecision decide_via_values(const SqrtSumInstance& sq);
/// Greater iff scheme 1 out-earns scheme 2 (opposite orientation).
SqrtSumDecision decide_via_probs(const SqrtSumInstance& sq);

std::string to_string(OracleAnswer a);
std::string to_string(SqrtSumDecision d);

}  // namespace bayesprice
