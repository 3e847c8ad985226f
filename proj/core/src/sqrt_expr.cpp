#include "bayesprice/exactnum.hpp"

#include <cmath>
#include <sstream>

#include "bayesprice/errors.hpp"

namespace bayesprice {

Integer sqrt_floor(const Integer& n) {
  if (n < 0) throw InvalidInstance("sqrt_floor of a negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

DyadicInterval sqrt_interval(const Integer& a, unsigned long bits) {
  if (a < 0) throw InvalidInstance("sqrt_interval of a negative integer");
  Integer scaled;
  mpz_mul_2exp(scaled.get_mpz_t(), a.get_mpz_t(), 2 * bits);
  const Integer f = sqrt_floor(scaled);
  const Rational unit = Rational::pow2(-static_cast<long>(bits));
  const Rational lo = Rational(f) * unit;
  if (f * f == scaled) return {lo, lo};
  return {lo, lo + unit};
}

// ---------------------------------------------------------------------------
// Square-free decomposition

namespace {

using Exponents = std::map<Integer, unsigned long>;

class Factorizer {
 public:
  Factorizer(const FactoringBudget& budget, const Integer& original)
      : budget_(budget), original_(original) {}

  Exponents run(Integer m) {
    trial_divide(m);
    if (m > 1) split_large(m, 1);
    return exps_;
  }

 private:
  void trial_divide(Integer& m) {
    auto strip = [&](unsigned long p) {
      while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        ++exps_[Integer(p)];
      }
    };
    strip(2);
    for (unsigned long p = 3; p < budget_.trial_bound; p += 2) {
      if (m == 1) return;
      if (Integer(p) * p > m) {
        ++exps_[m];  // no factor below sqrt(m): prime
        m = 1;
        return;
      }
      strip(p);
    }
  }

  // m > 1 has no prime factor below trial_bound.
  void split_large(const Integer& m, unsigned long multiplicity) {
    if (m == 1) return;
    const Integer bound = budget_.trial_bound;
    if (m < bound * bound || mpz_probab_prime_p(m.get_mpz_t(), 40) > 0) {
      exps_[m] += multiplicity;
      return;
    }
    if (mpz_perfect_square_p(m.get_mpz_t())) {
      split_large(sqrt_floor(m), 2 * multiplicity);
      return;
    }
    const Integer d = rho(m);
    split_large(d, multiplicity);
    split_large(m / d, multiplicity);
  }

  // Brent's variant of Pollard rho; returns a nontrivial divisor of m.
  Integer rho(const Integer& m) {
    for (unsigned long c = 1;; ++c) {
      Integer x = 2, y = 2, d = 1, q = 1, ys;
      unsigned long r = 1;
      auto f = [&](const Integer& v) {
        Integer out = v * v + c;
        mpz_mod(out.get_mpz_t(), out.get_mpz_t(), m.get_mpz_t());
        return out;
      };
      while (d == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = f(y);
        unsigned long k = 0;
        while (k < r && d == 1) {
          ys = y;
          const unsigned long batch = std::min<unsigned long>(128, r - k);
          for (unsigned long i = 0; i < batch; ++i) {
            y = f(y);
            Integer diff = x - y;
            q = (q * abs(diff)) % m;
          }
          mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), m.get_mpz_t());
          k += batch;
          spend(batch);
        }
        r *= 2;
      }
      if (d == m) {
        // Batched gcd overshot; retrace one step at a time.
        do {
          ys = f(ys);
          Integer diff = x - ys;
          diff = abs(diff);
          mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), m.get_mpz_t());
          spend(1);
        } while (d == 1);
      }
      if (d != m) return d;
    }
  }

  void spend(unsigned long steps) {
    used_ += steps;
    if (used_ > budget_.rho_iterations) {
      throw InstanceTooLarge("radicand " + original_.get_str() +
                             " could not be factored within the rho budget");
    }
  }

  const FactoringBudget& budget_;
  const Integer& original_;
  Exponents exps_;
  unsigned long used_ = 0;
};

}  // namespace

SquareFreeSplit squarefree_split(const Integer& n, const FactoringBudget& budget) {
  if (n < 0) throw InvalidInstance("negative radicand " + n.get_str());
  if (n == 0) return {0, 1};
  if (bit_length(n) > budget.max_bits) {
    throw InstanceTooLarge("radicand " + n.get_str() + " exceeds " +
                           std::to_string(budget.max_bits) + " bits");
  }
  SquareFreeSplit out{1, 1};
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    out.square_root = sqrt_floor(n);
    return out;
  }
  for (const auto& [prime, e] : Factorizer(budget, n).run(n)) {
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), prime.get_mpz_t(), e / 2);
    out.square_root *= pe;
    if (e % 2 == 1) out.kernel *= prime;
  }
  return out;
}

// ---------------------------------------------------------------------------
// SqrtExpr

void SqrtExpr::add_term(const Integer& kernel, const Rational& coefficient) {
  if (coefficient.is_zero()) return;
  if (kernel == 1) {
    rational_ += coefficient;
    return;
  }
  auto [it, inserted] = terms_.try_emplace(kernel, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SqrtExpr normalize(std::span<const SqrtTerm> terms, const FactoringBudget& budget) {
  SqrtExpr out;
  for (const auto& t : terms) {
    if (t.coefficient.is_zero()) continue;
    const auto split = squarefree_split(t.radicand, budget);
    if (split.square_root == 0) continue;
    out.add_term(split.kernel, t.coefficient * Rational(split.square_root));
  }
  return out;
}

SqrtExpr SqrtExpr::sqrt(const Integer& n, const FactoringBudget& budget) {
  const SqrtTerm t{1, n};
  return normalize(std::span(&t, 1), budget);
}

SqrtExpr SqrtExpr::sqrt(const Rational& q, const FactoringBudget& budget) {
  if (q.sign() < 0) throw InvalidInstance("square root of a negative rational");
  const SqrtTerm t{Rational(Integer(1), q.denominator()), q.numerator() * q.denominator()};
  return normalize(std::span(&t, 1), budget);
}

SqrtExpr SqrtExpr::operator-() const {
  SqrtExpr out = *this;
  out.rational_ = -out.rational_;
  for (auto& [d, r] : out.terms_) r = -r;
  return out;
}

SqrtExpr& SqrtExpr::operator+=(const SqrtExpr& o) {
  rational_ += o.rational_;
  for (const auto& [d, r] : o.terms_) add_term(d, r);
  return *this;
}

SqrtExpr& SqrtExpr::operator-=(const SqrtExpr& o) {
  rational_ -= o.rational_;
  for (const auto& [d, r] : o.terms_) add_term(d, -r);
  return *this;
}

SqrtExpr& SqrtExpr::operator*=(const Rational& r) {
  if (r.is_zero()) {
    *this = SqrtExpr();
    return *this;
  }
  rational_ *= r;
  for (auto& [d, c] : terms_) c *= r;
  return *this;
}

SqrtExpr& SqrtExpr::operator*=(const SqrtExpr& o) {
  if (o.is_rational()) return *this *= o.rational_;
  if (is_rational()) {
    const Rational q = rational_;
    *this = o;
    return *this *= q;
  }
  SqrtExpr out(rational_ * o.rational_);
  for (const auto& [d, r] : o.terms_) out.add_term(d, rational_ * r);
  for (const auto& [d, r] : terms_) out.add_term(d, o.rational_ * r);
  // sqrt(d1) * sqrt(d2) = g * sqrt((d1/g) * (d2/g)) with g = gcd(d1, d2); the
  // cofactors are coprime and square-free, so their product is square-free.
  Integer g;
  for (const auto& [d1, r1] : terms_) {
    for (const auto& [d2, r2] : o.terms_) {
      mpz_gcd(g.get_mpz_t(), d1.get_mpz_t(), d2.get_mpz_t());
      const Integer kernel = (d1 / g) * (d2 / g);
      out.add_term(kernel, r1 * r2 * Rational(g));
    }
  }
  *this = std::move(out);
  return *this;
}

std::string SqrtExpr::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (!rational_.is_zero() || terms_.empty()) {
    os << rational_.to_string();
    first = false;
  }
  for (const auto& [d, r] : terms_) {
    if (first) {
      if (r.sign() < 0) os << "-";
    } else {
      os << (r.sign() < 0 ? " - " : " + ");
    }
    os << r.abs().to_string() << "*sqrt(" << d.get_str() << ")";
    first = false;
  }
  return os.str();
}

double SqrtExpr::to_double() const {
  double v = rational_.to_double();
  for (const auto& [d, r] : terms_) v += r.to_double() * std::sqrt(d.get_d());
  return v;
}

// ---------------------------------------------------------------------------
// Interval evaluation and sign

namespace {

struct ScaledBounds {
  Integer lo;
  Integer hi;
};

// lo <= e * 2^k <= hi with hi - lo <= 3 * |terms| + 1.
ScaledBounds scaled_enclosure(const SqrtExpr& e, unsigned long k) {
  ScaledBounds b;
  {
    const auto& q = e.rational_part().gmp();
    Integer shifted;
    mpz_mul_2exp(shifted.get_mpz_t(), q.get_num_mpz_t(), k);
    mpz_fdiv_q(b.lo.get_mpz_t(), shifted.get_mpz_t(), q.get_den_mpz_t());
    mpz_cdiv_q(b.hi.get_mpz_t(), shifted.get_mpz_t(), q.get_den_mpz_t());
  }
  Integer inner, a, t;
  for (const auto& [d, r] : e.terms()) {
    const auto& q = r.gmp();
    // a = floor(|num| * sqrt(d) * 2^k); the true value lies strictly inside
    // (a, a + 1) because d >= 2 is square-free.
    mpz_mul(inner.get_mpz_t(), q.get_num_mpz_t(), q.get_num_mpz_t());
    mpz_mul(inner.get_mpz_t(), inner.get_mpz_t(), d.get_mpz_t());
    mpz_mul_2exp(inner.get_mpz_t(), inner.get_mpz_t(), 2 * k);
    mpz_sqrt(a.get_mpz_t(), inner.get_mpz_t());
    const Integer a1 = a + 1;
    if (r.sign() > 0) {
      mpz_fdiv_q(t.get_mpz_t(), a.get_mpz_t(), q.get_den_mpz_t());
      b.lo += t;
      mpz_cdiv_q(t.get_mpz_t(), a1.get_mpz_t(), q.get_den_mpz_t());
      b.hi += t;
    } else {
      mpz_cdiv_q(t.get_mpz_t(), a1.get_mpz_t(), q.get_den_mpz_t());
      b.lo -= t;
      mpz_fdiv_q(t.get_mpz_t(), a.get_mpz_t(), q.get_den_mpz_t());
      b.hi -= t;
    }
  }
  return b;
}

}  // namespace

DyadicInterval enclose(const SqrtExpr& e, unsigned long bits) {
  const Integer slack = 3 * Integer(static_cast<unsigned long>(e.terms().size())) + 1;
  const unsigned long k = bits + bit_length(slack);
  const auto b = scaled_enclosure(e, k);
  const Rational unit = Rational::pow2(-static_cast<long>(k));
  return {Rational(b.lo) * unit, Rational(b.hi) * unit};
}

Sign sign(const SqrtExpr& e, SignDiagnostics* diagnostics) {
  if (e.is_rational()) {
    if (diagnostics) *diagnostics = {};
    const int s = e.rational_part().sign();
    return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero);
  }
  unsigned rounds = 0;
  for (unsigned long k = 64;; k *= 2) {
    ++rounds;
    const auto b = scaled_enclosure(e, k);
    if (b.lo > 0 || b.hi < 0) {
      if (diagnostics) *diagnostics = {rounds, k};
      return b.lo > 0 ? Sign::Positive : Sign::Negative;
    }
  }
}

int compare(const SqrtExpr& a, const SqrtExpr& b) {
  if (a.is_rational() && b.is_rational()) {
    const auto c = a.rational_part() <=> b.rational_part();
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  return static_cast<int>(sign(a - b));
}

Comparison sqrtsum_compare(std::span<const Integer> a, const Integer& k,
                           const FactoringBudget& budget) {
  if (k < 1) throw InvalidInstance("K must be a positive integer");
  std::vector<SqrtTerm> terms;
  terms.reserve(a.size());
  for (const auto& ai : a) {
    if (ai < 1) throw InvalidInstance("SQRT-SUM entries must be positive integers");
    terms.push_back({1, ai});
  }
  const SqrtExpr diff = normalize(terms, budget) - SqrtExpr(Rational(k));
  switch (sign(diff)) {
    case Sign::Negative: return Comparison::Less;
    case Sign::Zero: return Comparison::Equal;
    case Sign::Positive: return Comparison::Greater;
  }
  return Comparison::Equal;
}

std::string to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "negative";
    case Sign::Zero: return "zero";
    case Sign::Positive: return "positive";
  }
  return "?";
}

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::Less: return "less";
    case Comparison::Equal: return "equal";
    case Comparison::Greater: return "greater";
  }
  return "?";
}

}  // namespace bayesprice
