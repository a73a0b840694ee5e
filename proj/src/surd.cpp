#include "oseries/surd.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <stdexcept>

namespace oseries {

namespace {

using Big = boost::multiprecision::cpp_bin_float_100;

Big to_big(const BigInt& z) { return Big(z.get_str()); }

Big to_big(const Rational& q) { return to_big(q.get_num()) / to_big(q.get_den()); }

} // namespace

std::pair<BigInt, BigInt> squarefree_split(const BigInt& n) {
  if (n <= 0) throw std::domain_error("squarefree_split of non-positive integer");
  BigInt rest = n, square = 1, radical = 1;
  auto strip = [&](unsigned long p) {
    int e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    for (int k = 0; k + 1 < e; k += 2) square *= p;
    if (e % 2 == 1) radical *= p;
  };
  strip(2);
  for (unsigned long p = 3; p < (1UL << 20); p += 2) {
    if (rest == 1) break;
    if (mpz_cmp_ui(rest.get_mpz_t(), p * p) < 0) break;
    strip(p);
  }
  if (rest > 1) {
    if (mpz_perfect_square_p(rest.get_mpz_t()) != 0) {
      BigInt root;
      mpz_sqrt(root.get_mpz_t(), rest.get_mpz_t());
      square *= root;
    } else {
      radical *= rest;
    }
  }
  return {square, radical};
}

Surd::Surd(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  if (c != 0) terms_.emplace(BigInt(1), c);
}

Surd Surd::sqrt(const Rational& q_in) {
  Rational q(q_in);
  q.canonicalize();
  if (q < 0) throw std::domain_error("sqrt of negative rational");
  Surd out;
  if (q == 0) return out;
  // sqrt(p/d) = sqrt(p*d)/d
  auto [s, r] = squarefree_split(q.get_num() * q.get_den());
  Rational coef(s, q.get_den());
  coef.canonicalize();
  out.terms_.emplace(r, coef);
  return out;
}

bool Surd::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

Rational Surd::rational_value() const {
  if (!is_rational()) throw std::domain_error("surd is irrational: " + to_string());
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

double Surd::to_double() const {
  if (!approx_valid_) {
    long double acc = 0;
    for (const auto& [r, c] : terms_) acc += static_cast<long double>(c.get_d()) * std::sqrt(static_cast<long double>(r.get_d()));
    approx_ = static_cast<double>(acc);
    approx_valid_ = true;
  }
  return approx_;
}

int Surd::sign() const {
  if (terms_.empty()) return 0;
  if (terms_.size() == 1) return sgn(terms_.begin()->second);
  long double acc = 0, mag = 0;
  for (const auto& [r, c] : terms_) {
    long double t = static_cast<long double>(c.get_d()) * std::sqrt(static_cast<long double>(r.get_d()));
    acc += t;
    mag += std::fabs(t);
  }
  if (std::fabs(acc) > 1e-12L * mag) return acc > 0 ? 1 : -1;
  Big big = 0, bigmag = 0;
  for (const auto& [r, c] : terms_) {
    Big t = to_big(c) * boost::multiprecision::sqrt(to_big(r));
    big += t;
    bigmag += boost::multiprecision::abs(t);
  }
  if (boost::multiprecision::abs(big) <= Big("1e-90") * bigmag)
    throw std::runtime_error("surd sign undecidable at working precision: " + to_string());
  return big > 0 ? 1 : -1;
}

void Surd::add_term(const BigInt& radicand, const Rational& coef) {
  if (coef == 0) return;
  auto it = terms_.find(radicand);
  if (it == terms_.end()) {
    terms_.emplace(radicand, coef);
  } else {
    it->second += coef;
    if (it->second == 0) terms_.erase(it);
  }
}

Surd Surd::operator-() const {
  Surd out = *this;
  for (auto& [r, c] : out.terms_) c = -c;
  out.approx_valid_ = false;
  return out;
}

Surd& Surd::operator+=(const Surd& o) {
  for (const auto& [r, c] : o.terms_) add_term(r, c);
  approx_valid_ = false;
  return *this;
}

Surd& Surd::operator-=(const Surd& o) {
  for (const auto& [r, c] : o.terms_) add_term(r, -c);
  approx_valid_ = false;
  return *this;
}

Surd operator*(const Surd& a, const Surd& b) {
  Surd out;
  for (const auto& [ra, ca] : a.terms_) {
    for (const auto& [rb, cb] : b.terms_) {
      if (ra == 1) {
        out.add_term(rb, ca * cb);
      } else if (rb == 1) {
        out.add_term(ra, ca * cb);
      } else {
        BigInt g;
        mpz_gcd(g.get_mpz_t(), ra.get_mpz_t(), rb.get_mpz_t());
        BigInt r = (ra / g) * (rb / g);
        out.add_term(r, ca * cb * Rational(g));
      }
    }
  }
  return out;
}

Surd& Surd::operator*=(const Surd& o) {
  *this = *this * o;
  return *this;
}

std::string Surd::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [r, c] : terms_) {
    if (!first) s += " + ";
    first = false;
    s += oseries::to_string(c);
    if (r != 1) s += "*sqrt(" + r.get_str() + ")";
  }
  return s;
}

Surd abs(const Surd& s) { return s.sign() < 0 ? -s : s; }
Surd min(const Surd& a, const Surd& b) { return b < a ? b : a; }
Surd max(const Surd& a, const Surd& b) { return a < b ? b : a; }

} // namespace oseries
