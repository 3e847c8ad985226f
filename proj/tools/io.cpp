#include "io.hpp"

#include <charconv>
#include <cstdlib>
#include <cstdio>

#include "bayesprice/errors.hpp"

namespace bayesprice::io {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object with field '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

Integer parse_integer(const Json& j) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? Integer(std::to_string(j.get<std::uint64_t>()))
                                  : Integer(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    const Rational r = Rational::parse(j.get<std::string>());
    if (!r.is_integer()) throw ParseError("expected an integer, got " + j.get<std::string>());
    return r.numerator();
  }
  throw ParseError("expected an integer, got " + j.dump());
}

Value parse_value(const Json& j) {
  const Integer v = parse_integer(j);
  if (!v.fits_slong_p()) throw ParseError("integer " + v.get_str() + " out of range");
  return v.get_si();
}

Json integer_json(const Integer& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());
}

// Nearest double (mpq_get_d truncates), printed in its shortest round-trip form.
std::string decimal(const Rational& r) {
  const mpf_class f(r.gmp(), 256);
  char wide[96];
  gmp_snprintf(wide, sizeof wide, "%.40Fe", f.get_mpf_t());
  const double v = std::strtod(wide, nullptr);
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Rational parse_rational(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(parse_integer(j));
  throw ParseError("expected a rational \"num/den\", got " + j.dump());
}

Json to_json(const Rational& r) { return r.to_string(); }

SqrtExpr parse_sqrt_expr(const Json& j) {
  if (j.is_string() || j.is_number_integer()) return SqrtExpr(parse_rational(j));
  if (!j.is_object()) throw ParseError("expected a square-root expression, got " + j.dump());
  std::vector<SqrtTerm> terms;
  if (const auto it = j.find("rational"); it != j.end()) terms.push_back({parse_rational(*it), 1});
  if (const auto it = j.find("terms"); it != j.end()) {
    if (!it->is_array()) throw ParseError("'terms' must be an array");
    for (const auto& t : *it) {
      const Integer radicand = parse_integer(field(t, "radicand"));
      if (radicand < 0) throw ParseError("negative radicand " + radicand.get_str());
      terms.push_back({parse_rational(field(t, "coef")), radicand});
    }
  }
  return normalize(terms);
}

Json to_json(const SqrtExpr& e) {
  Json terms = Json::array();
  for (const auto& [d, r] : e.terms()) {
    terms.push_back(Json{{"coef", to_json(r)}, {"radicand", integer_json(d)}});
  }
  return Json{{"rational", to_json(e.rational_part())}, {"terms", std::move(terms)}};
}

Price parse_price(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return std::nullopt;
  return parse_sqrt_expr(j);
}

Json to_json(const Price& p) { return p ? to_json(*p) : Json("inf"); }

TwoPointAttribute parse_attribute(const Json& j) {
  TwoPointAttribute a{parse_value(field(j, "u")), parse_value(field(j, "v")),
                      parse_rational(field(j, "p"))};
  a.validate();
  return a;
}

Json to_json(const TwoPointAttribute& a) {
  return Json{{"u", a.high}, {"v", a.low}, {"p", to_json(a.p_high)}};
}

SoapInstance parse_soap_instance(const Json& j) {
  const Json& list = j.is_object() && j.contains("items") && !j.contains("attributes")
                         ? field(j, "items")
                         : field(j, "attributes");
  if (!list.is_array()) throw ParseError("'attributes' must be an array");
  SoapInstance s;
  for (const auto& a : list) s.attributes.push_back(parse_attribute(a));
  s.validate();
  return s;
}

Json to_json(const SoapInstance& s) {
  Json list = Json::array();
  for (const auto& a : s.attributes) list.push_back(to_json(a));
  return Json{{"attributes", std::move(list)}};
}

TwoPointItem parse_item(const Json& j) {
  TwoPointItem item{parse_sqrt_expr(field(j, "high")), parse_sqrt_expr(field(j, "low")),
                    parse_sqrt_expr(field(j, "p"))};
  item.validate();
  return item;
}

Json to_json(const TwoPointItem& item) {
  return Json{{"high", to_json(item.high)}, {"low", to_json(item.low)}, {"p", to_json(item.p_high)}};
}

std::vector<TwoPointItem> parse_items(const Json& j) {
  const Json& list = field(j, "items");
  if (!list.is_array()) throw ParseError("'items' must be an array");
  std::vector<TwoPointItem> items;
  for (const auto& it : list) items.push_back(parse_item(it));
  return items;
}

SubsetSumInstance parse_subsetsum(const Json& j) {
  const Json& list = field(j, "a");
  if (!list.is_array()) throw ParseError("'a' must be an array");
  SubsetSumInstance s;
  for (const auto& v : list) s.a.push_back(parse_value(v));
  s.target = parse_value(field(j, "T"));
  s.validate();
  return s;
}

Json to_json(const SubsetSumInstance& s) { return Json{{"a", s.a}, {"T", s.target}}; }

SqrtSumInstance parse_sqrtsum(const Json& j) {
  const Json& list = field(j, "a");
  if (!list.is_array()) throw ParseError("'a' must be an array");
  SqrtSumInstance s;
  for (const auto& v : list) s.a.push_back(parse_integer(v));
  s.k = parse_integer(field(j, "K"));
  s.validate();
  return s;
}

Json to_json(const SqrtSumInstance& s) {
  Json a = Json::array();
  for (const auto& v : s.a) a.push_back(integer_json(v));
  return Json{{"a", std::move(a)}, {"K", integer_json(s.k)}};
}

Json to_json(const PriceReport& r) {
  Json out{{"price", r.price}, {"revenue", to_json(r.revenue)}};
  if (r.curve) {
    Json curve = Json::array();
    for (const auto& [price, rev] : *r.curve) {
      curve.push_back(Json{{"price", price}, {"revenue", to_json(rev)}});
    }
    out["curve"] = std::move(curve);
  }
  return out;
}

Json to_json(const ReductionTranscript& t) {
  Json calls = Json::array();
  for (const auto& c : t.oracle_calls) {
    calls.push_back(Json{{"p", to_json(c.p)}, {"answer", to_string(c.answer)}, {"price", c.price}});
  }
  Json counts = Json::array();
  for (const auto& c : t.counts) counts.push_back(integer_json(c));
  return Json{{"source", to_json(t.source)},
              {"p1", to_json(t.encoding.p1)},
              {"base", t.encoding.base.get_str()},
              {"epsilon", to_json(t.encoding.epsilon)},
              {"instance_at_pstar", to_json(t.instance_at_pstar)},
              {"oracle_calls", std::move(calls)},
              {"pstar", to_json(t.pstar)},
              {"Q", to_json(t.tail)},
              {"counts", std::move(counts)},
              {"count", integer_json(t.count)},
              {"revenue_at_1", to_json(t.revenue_at_one)},
              {"revenue_at_T_plus_1", to_json(t.revenue_at_top)}};
}

Json to_json(const Thm1CaseReport& r) {
  Json revenues = Json::array();
  for (const auto& [price, rev] : r.revenues) {
    revenues.push_back(Json{{"price", price}, {"revenue", to_json(rev)}});
  }
  return Json{{"p", to_json(r.p)},
              {"epsilon", to_json(r.epsilon)},
              {"optimal_price", r.optimal_price},
              {"optimal_revenue", to_json(r.optimal_revenue)},
              {"checks", r.checks},
              {"revenues", std::move(revenues)}};
}

Json to_json(const UnitDemandReduction& r) {
  Json items = Json::array();
  for (const auto& it : r.items) items.push_back(to_json(it));
  Json s1 = Json::array(), s2 = Json::array();
  for (const auto& p : r.scheme1) s1.push_back(to_json(p));
  for (const auto& p : r.scheme2) s2.push_back(to_json(p));
  Json out{{"items", std::move(items)}, {"scheme1", std::move(s1)}, {"scheme2", std::move(s2)},
           {"T", to_json(r.top_value)}};
  if (!r.epsilon.is_zero()) out["epsilon"] = to_json(r.epsilon);
  if (r.x != 0) out["X"] = integer_json(r.x);
  return out;
}

Json approx(const Rational& r) { return decimal(r); }
Json approx(const SqrtExpr& e) {
  if (e.is_rational()) return approx(e.rational_part());
  const DyadicInterval iv = enclose(e, 80);
  return decimal((iv.lo + iv.hi) / Rational(2));
}

}  // namespace bayesprice::io
