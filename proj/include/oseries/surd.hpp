#pragma once

#include "oseries/rational.hpp"

#include <map>
#include <string>

namespace oseries {

// Exact element of Q(sqrt 2, sqrt 3, ...): a finite sum of q_r * sqrt(r) with
// distinct squarefree radicands r. The representation is canonical, so the
// zero test is exact.
class Surd {
public:
  Surd() = default;
  Surd(const Rational& q);  // NOLINT: implicit on purpose
  Surd(long v) : Surd(Rational(v)) {}  // NOLINT

  static Surd sqrt(const Rational& q);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  // Throws if not rational.
  Rational rational_value() const;
  const std::map<BigInt, Rational>& terms() const { return terms_; }

  double to_double() const;
  int sign() const;

  Surd operator-() const;
  Surd& operator+=(const Surd& o);
  Surd& operator-=(const Surd& o);
  Surd& operator*=(const Surd& o);
  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator*(const Surd& a, const Surd& b);

  friend bool operator==(const Surd& a, const Surd& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const Surd& a, const Surd& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Surd& a, const Surd& b) { return b < a; }
  friend bool operator<=(const Surd& a, const Surd& b) { return !(b < a); }
  friend bool operator>=(const Surd& a, const Surd& b) { return !(a < b); }

  std::string to_string() const;

private:
  void add_term(const BigInt& radicand, const Rational& coef);
  std::map<BigInt, Rational> terms_;
  mutable double approx_ = 0.0;
  mutable bool approx_valid_ = false;
};

Surd abs(const Surd& s);
Surd min(const Surd& a, const Surd& b);
Surd max(const Surd& a, const Surd& b);

// Squarefree decomposition n = s^2 * r; returns (s, r). Trial division covers
// factors below 2^20; a remaining cofactor is tested for being a perfect square.
std::pair<BigInt, BigInt> squarefree_split(const BigInt& n);

} // namespace oseries
