#include "cli.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "bayesprice/errors.hpp"
#include "io.hpp"

namespace bayesprice::cli {

namespace {

using io::Json;

struct Options {
  std::string input_file;
  std::string inline_json;
  bool verbose = false;
  std::optional<std::uint64_t> seed;
  std::size_t budget = kDefaultStateBudget;
  TieBreak tie = TieBreak::MostExpensive;
  PurchaseRule purchase = kDefaultPurchaseRule;
  unsigned jobs = 1;
  bool approx = false;
  bool curve = false;
  bool transcript = false;
  std::optional<std::uint64_t> mc_samples;

  std::string kind;
  std::size_t n = 5;
  long max = 20;
  bool exclude_equal = false;
};

/// One processed element: a JSON payload and the exit code it implies.
struct Outcome {
  Json payload;
  int code = kOk;
  std::string summary;
};

using Handler = std::function<Outcome(const Json&, const Options&)>;

BuyerModel buyer(const Options& o) { return {o.tie, o.purchase}; }

// ---------------------------------------------------------------------------
// Command handlers

Outcome solve_price(const Json& in, const Options& o, bool bundle) {
  const SoapInstance inst = io::parse_soap_instance(in);
  const PriceReport report = bundle ? grand_bundle_price(inst.attributes, o.curve, o.budget)
                                    : optimal_price(inst, o.curve, o.budget);
  Json out = io::to_json(report);
  if (o.approx) out["revenue_approx"] = io::approx(report.revenue);
  if (o.mc_samples) {
    if (!o.seed) throw InvalidInstance("--mc-samples requires --seed");
    const auto mc = mc_revenue(inst, Rational(report.price), *o.mc_samples, *o.seed);
    out["mc"] = Json{{"estimate", io::to_json(mc.estimate)},
                     {"standard_error", mc.standard_error},
                     {"samples", mc.samples},
                     {"seed", *o.seed}};
  }
  return {out, kOk,
          "price " + std::to_string(report.price) + " earns " + report.revenue.to_string()};
}

std::vector<std::vector<Price>> default_candidates(const std::vector<TwoPointItem>& items) {
  std::vector<std::vector<Price>> sets;
  for (const auto& item : items) {
    std::vector<Price> set{item.low};
    if (!(item.high == item.low)) set.emplace_back(item.high);
    set.emplace_back(std::nullopt);
    sets.push_back(std::move(set));
  }
  return sets;
}

Outcome solve_unitdemand(const Json& in, const Options& o) {
  const auto items = io::parse_items(in);
  std::vector<std::vector<Price>> candidates;
  if (const auto it = in.find("candidates"); it != in.end()) {
    if (!it->is_array()) throw ParseError("'candidates' must be an array of arrays");
    for (const auto& set : *it) {
      if (!set.is_array()) throw ParseError("'candidates' must be an array of arrays");
      std::vector<Price> prices;
      for (const auto& p : set) prices.push_back(io::parse_price(p));
      candidates.push_back(std::move(prices));
    }
  } else {
    candidates = default_candidates(items);
  }
  const auto result = best_over_candidates(items, candidates, buyer(o));
  Json prices = Json::array();
  for (const auto& p : result.prices) prices.push_back(io::to_json(p));
  Json out{{"prices", std::move(prices)},
           {"revenue", io::to_json(result.revenue)},
           {"evaluated", result.evaluated}};
  if (o.approx) out["revenue_approx"] = io::approx(result.revenue);
  return {out, kOk, "best revenue " + result.revenue.to_string()};
}

Outcome eval_pricing(const Json& in, const Options& o) {
  const auto items = io::parse_items(in);
  const auto it = in.find("prices");
  if (it == in.end() || !it->is_array()) throw ParseError("missing array field 'prices'");
  PriceVector prices;
  for (const auto& p : *it) prices.push_back(io::parse_price(p));
  const auto mass = purchase_probabilities(items, prices, buyer(o));
  SqrtExpr revenue;
  Json probs = Json::array();
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (prices[i]) revenue += mass[i] * *prices[i];
    probs.push_back(io::to_json(mass[i]));
  }
  Json out{{"revenue", io::to_json(revenue)}, {"purchase_probabilities", std::move(probs)}};
  if (o.approx) out["revenue_approx"] = io::approx(revenue);
  return {out, kOk, "revenue " + revenue.to_string()};
}

Outcome reduce_count(const Json& in, const Options& o) {
  const auto ssi = io::parse_subsetsum(in);
  const auto t = run_count_pipeline(ssi);
  Json counts = Json::array();
  for (const auto& c : t.counts) counts.push_back(c.get_str());
  Json out{{"count", t.count.fits_slong_p() ? Json(t.count.get_si()) : Json(t.count.get_str())},
           {"pstar", io::to_json(t.pstar)},
           {"Q", io::to_json(t.tail)},
           {"counts_by_size", std::move(counts)},
           {"oracle_calls", t.oracle_calls.size()}};
  if (o.approx) out["pstar_approx"] = io::approx(t.pstar);
  if (o.transcript) out["transcript"] = io::to_json(t);
  return {out, kOk,
          "count " + t.count.get_str() + " after " + std::to_string(t.oracle_calls.size()) +
              " oracle calls"};
}

Outcome reduce_sqrtsum(const Json& in, const Options& o, bool via_values) {
  const auto sq = io::parse_sqrtsum(in);
  const auto reduction = via_values ? build_ud_values(sq) : build_ud_probs(sq);
  const auto cmp = via_values ? compare_schemes_values(sq) : compare_schemes_probs(sq);
  Json out{{"decision", to_string(cmp.decision)},
           {"scheme1_revenue", io::to_json(cmp.revenue1)},
           {"scheme2_revenue", io::to_json(cmp.revenue2)},
           {"T", io::to_json(reduction.top_value)}};
  if (via_values) {
    out["epsilon"] = io::to_json(reduction.epsilon);
  } else {
    out["X"] = reduction.x.get_str();
  }
  if (o.approx) {
    out["scheme1_revenue_approx"] = io::approx(cmp.revenue1);
    out["scheme2_revenue_approx"] = io::approx(cmp.revenue2);
  }
  if (o.transcript) out["instance"] = io::to_json(reduction);
  return {out, kOk, "sum of roots is " + to_string(cmp.decision) + " than K"};
}

Outcome verify_thm1(const Json& in, const Options& o) {
  const auto ssi = io::parse_subsetsum(in);
  const auto pit = in.find("p");
  if (pit == in.end()) throw ParseError("missing field 'p'");
  const auto report = verify_thm1_cases(ssi, io::parse_rational(*pit));
  Json out = io::to_json(report);
  if (o.approx) out["optimal_revenue_approx"] = io::approx(report.optimal_revenue);
  return {out, kOk,
          "all cases hold; optimal price " + std::to_string(report.optimal_price)};
}

// ---------------------------------------------------------------------------
// Instance generation

// Uniform integer in [lo, hi] by rejection; unlike std::uniform_int_distribution
// the sequence is identical across standard libraries.
long uniform(std::mt19937_64& rng, long lo, long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<long>(draw % span);
}

Json gen_instance(const Options& o) {
  if (!o.seed) throw InvalidInstance("gen-instance requires --seed");
  if (o.n < 1) throw InvalidInstance("--n must be at least 1");
  if (o.max < 1) throw InvalidInstance("--max must be at least 1");
  std::mt19937_64 rng(*o.seed);
  const long n = static_cast<long>(o.n);

  if (o.kind == "subsetsum") {
    SubsetSumInstance s;
    for (long i = 0; i < n; ++i) s.a.push_back(uniform(rng, 1, o.max));
    s.target = uniform(rng, 1, s.total());
    return io::to_json(s);
  }
  if (o.kind == "sqrtsum") {
    for (;;) {
      SqrtSumInstance s;
      for (long i = 0; i < n; ++i) s.a.emplace_back(uniform(rng, 1, o.max));
      std::sort(s.a.begin(), s.a.end());
      double roots = 0;
      for (const auto& v : s.a) roots += std::sqrt(v.get_d());
      const long centre = static_cast<long>(std::floor(roots));
      s.k = uniform(rng, std::max(1L, centre - 2), centre + 2);
      if (!o.exclude_equal || sqrtsum_compare(s.a, s.k) != Comparison::Equal) {
        return io::to_json(s);
      }
    }
  }
  if (o.kind == "soap") {
    SoapInstance s;
    for (long i = 0; i < n; ++i) {
      const long den = uniform(rng, 1, 1000);
      const long num = uniform(rng, 0, den);
      s.attributes.push_back(
          {uniform(rng, 0, o.max), uniform(rng, 0, o.max), Rational(Integer(num), Integer(den))});
    }
    return io::to_json(s);
  }
  if (o.kind == "unitdemand") {
    Json items = Json::array();
    for (long i = 0; i < n; ++i) {
      const long den = uniform(rng, 1, 100);
      const long num = uniform(rng, 0, den);
      long lo = uniform(rng, 0, o.max), hi = uniform(rng, 0, o.max);
      if (lo > hi) std::swap(lo, hi);
      items.push_back(io::to_json(TwoPointItem{SqrtExpr(hi), SqrtExpr(lo),
                                               SqrtExpr(Rational(Integer(num), Integer(den)))}));
    }
    return Json{{"items", std::move(items)}};
  }
  throw InvalidInstance("unknown --kind '" + o.kind +
                        "' (expected subsetsum, sqrtsum, soap or unitdemand)");
}

// ---------------------------------------------------------------------------
// Dispatch

Outcome guarded(const Handler& handler, const Json& in, const Options& o) {
  auto failure = [](int code, const std::string& msg) {
    return Outcome{Json{{"error", msg}}, code, msg};
  };
  try {
    return handler(in, o);
  } catch (const ProofViolation& e) {
    return failure(kProofViolation, e.what());
  } catch (const ResourceLimit& e) {
    return failure(kBudgetExceeded, e.what());
  } catch (const Error& e) {
    return failure(kBadInput, e.what());
  } catch (const nlohmann::json::exception& e) {
    return failure(kBadInput, std::string("malformed JSON: ") + e.what());
  }
}

Json load_input(const Options& o) {
  if (!o.inline_json.empty() && !o.input_file.empty()) {
    throw InvalidInstance("use either --input or --json, not both");
  }
  if (!o.inline_json.empty()) return Json::parse(o.inline_json);
  if (o.input_file.empty()) throw InvalidInstance("an instance is required (--input FILE or --json STRING)");
  std::ifstream f(o.input_file);
  if (!f) throw InvalidInstance("cannot read " + o.input_file);
  return Json::parse(f);
}

int execute(const Handler& handler, const Options& o, std::ostream& out, std::ostream& err) {
  Json input;
  try {
    input = load_input(o);
  } catch (const Error& e) {
    out << Json{{"error", e.what()}}.dump() << "\n";
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const nlohmann::json::exception& e) {
    out << Json{{"error", std::string("malformed JSON: ") + e.what()}}.dump() << "\n";
    err << "error: malformed JSON: " << e.what() << "\n";
    return kBadInput;
  }

  if (!input.is_array()) {
    const Outcome r = guarded(handler, input, o);
    out << r.payload.dump() << "\n";
    if (r.code != kOk) err << "error: " << r.summary << "\n";
    else if (o.verbose) err << r.summary << "\n";
    return r.code;
  }

  // Batch of independent instances; results keep input order.
  std::vector<Outcome> results(input.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < results.size(); i = next++) {
      results[i] = guarded(handler, input[i], o);
    }
  };
  const unsigned jobs = std::max(1U, std::min<unsigned>(o.jobs, static_cast<unsigned>(results.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  Json payload = Json::array();
  int code = kOk;
  for (std::size_t i = 0; i < results.size(); ++i) {
    payload.push_back(results[i].payload);
    if (results[i].code != kOk) {
      err << "error: [" << i << "] " << results[i].summary << "\n";
      if (code == kOk) code = results[i].code;
    } else if (o.verbose) {
      err << "[" << i << "] " << results[i].summary << "\n";
    }
  }
  out << payload.dump() << "\n";
  return code;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input_file, "Instance file (JSON object, or array for a batch)");
  cmd->add_option("--json", o.inline_json, "Inline instance JSON");
  cmd->add_flag("--verbose", o.verbose, "Human-readable summary on stderr");
  cmd->add_option("--seed", o.seed, "Seed for sampling commands");
  cmd->add_option("--budget", o.budget, "Maximum distinct partial sums in the convolution")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tie", o.tie, "Tie-break among utility maximizers")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, TieBreak>{{"expensive", TieBreak::MostExpensive},
                                          {"cheapest", TieBreak::Cheapest},
                                          {"index", TieBreak::LowestIndex}}));
  cmd->add_option("--purchase", o.purchase,
                  "strict: buy only at positive utility; weak: also at zero utility")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, PurchaseRule>{{"strict", PurchaseRule::StrictlyPositive},
                                              {"weak", PurchaseRule::NonNegative}}));
  cmd->add_option("--jobs", o.jobs, "Worker threads for batch input")->check(CLI::PositiveNumber);
  cmd->add_flag("--approx", o.approx, "Add decimal renderings, labelled _approx");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact single-buyer Bayesian pricing and hardness-reduction pipelines",
               "bayesprice"};
  app.require_subcommand(1);
  Options o;

  struct Command {
    const char* name;
    const char* help;
    Handler handler;
  };
  const std::vector<Command> commands = {
      {"solve-soap", "Optimal single price for a sum of independent two-point attributes",
       [](const Json& in, const Options& opt) { return solve_price(in, opt, false); }},
      {"solve-bundle", "Optimal grand-bundle price for an additive buyer",
       [](const Json& in, const Options& opt) { return solve_price(in, opt, true); }},
      {"solve-unitdemand", "Best item pricing over candidate price sets for a unit-demand buyer",
       solve_unitdemand},
      {"eval-pricing", "Exact expected revenue of a unit-demand price vector", eval_pricing},
      {"reduce-count", "Count subsets with sum >= T through the single-price oracle",
       reduce_count},
      {"reduce-sqrtsum-values", "Decide a SQRT-SUM instance via items with square-root values",
       [](const Json& in, const Options& opt) { return reduce_sqrtsum(in, opt, true); }},
      {"reduce-sqrtsum-probs",
       "Decide a SQRT-SUM instance via items with square-root probabilities",
       [](const Json& in, const Options& opt) { return reduce_sqrtsum(in, opt, false); }},
      {"verify-thm1", "Check every revenue case of the subset-sum pricing construction",
       verify_thm1},
  };

  std::map<const CLI::App*, const Command*> by_app;
  for (const auto& c : commands) {
    CLI::App* cmd = app.add_subcommand(c.name, c.help);
    add_common(cmd, o);
    if (std::string(c.name) == "solve-soap" || std::string(c.name) == "solve-bundle") {
      cmd->add_flag("--curve", o.curve, "Include revenue at every candidate price");
      cmd->add_option("--mc-samples", o.mc_samples, "Add a Monte-Carlo estimate (needs --seed)")
          ->check(CLI::PositiveNumber);
    }
    if (std::string(c.name).rfind("reduce-", 0) == 0) {
      cmd->add_flag("--transcript", o.transcript, "Include the full reduction record");
    }
    by_app[cmd] = &c;
  }

  CLI::App* gen = app.add_subcommand("gen-instance", "Reproducible random instances");
  gen->add_option("--kind", o.kind, "subsetsum | sqrtsum | soap | unitdemand")->required();
  gen->add_option("--n", o.n, "Number of values / attributes / items");
  gen->add_option("--max", o.max, "Largest value");
  gen->add_option("--seed", o.seed, "Random seed")->required();
  gen->add_flag("--exclude-equal", o.exclude_equal, "Reject SQRT-SUM instances with equality");
  gen->add_flag("--verbose", o.verbose, "Human-readable summary on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  if (gen->parsed()) {
    try {
      const Json instance = gen_instance(o);
      out << instance.dump() << "\n";
      if (o.verbose) err << "generated " << o.kind << " instance\n";
      return kOk;
    } catch (const Error& e) {
      out << Json{{"error", e.what()}}.dump() << "\n";
      err << "error: " << e.what() << "\n";
      return kBadInput;
    }
  }
  for (const auto& [cmd, c] : by_app) {
    if (cmd->parsed()) return execute(c->handler, o, out, err);
  }
  return kBadInput;
}

}  // namespace bayesprice::cli
