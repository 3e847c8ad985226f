#pragma once

#include <json.hpp>

#include "bayesprice/reductions.hpp"

namespace bayesprice::io {

using Json = nlohmann::ordered_json;

// Every parse_* throws ParseError (or InvalidInstance from validation) on
// malformed input. Every to_json is exact; decimals appear only through
// approx().

Rational parse_rational(const Json& j);
Json to_json(const Rational& r);

/// {"rational": "q", "terms": [{"coef": "r", "radicand": d}, ...]}. Integers
/// and "num/den" strings are accepted as rational shorthands on input.
SqrtExpr parse_sqrt_expr(const Json& j);
Json to_json(const SqrtExpr& e);

/// "inf" for an unpriced item.
Price parse_price(const Json& j);
Json to_json(const Price& p);

TwoPointAttribute parse_attribute(const Json& j);
Json to_json(const TwoPointAttribute& a);
/// {"attributes": [...]}; {"items": [...]} is accepted as a synonym.
SoapInstance parse_soap_instance(const Json& j);
Json to_json(const SoapInstance& s);

TwoPointItem parse_item(const Json& j);
Json to_json(const TwoPointItem& item);
std::vector<TwoPointItem> parse_items(const Json& j);

SubsetSumInstance parse_subsetsum(const Json& j);
Json to_json(const SubsetSumInstance& s);
SqrtSumInstance parse_sqrtsum(const Json& j);
Json to_json(const SqrtSumInstance& s);

Json to_json(const PriceReport& r);
Json to_json(const ReductionTranscript& t);
Json to_json(const Thm1CaseReport& r);
Json to_json(const UnitDemandReduction& r);

/// Labelled decimal rendering for --approx output.
Json approx(const Rational& r);
Json approx(const SqrtExpr& e);

}  // namespace bayesprice::io
