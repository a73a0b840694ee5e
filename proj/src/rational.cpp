#include "oseries/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace oseries {

namespace {

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

Rational parse_decimal(const std::string& s) {
  size_t pos = 0;
  bool neg = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) neg = s[pos++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false, any = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) throw std::invalid_argument("not a number: '" + s + "'");
  long exp10 = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    size_t used = 0;
    try {
      exp10 = std::stol(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in '" + s + "'");
    }
    pos += used;
  }
  if (pos != s.size()) throw std::invalid_argument("trailing characters in '" + s + "'");
  Rational q{BigInt(digits, 10)};
  long shift = exp10 - frac_digits;
  BigInt ten = pow_int(10, static_cast<unsigned long>(std::labs(shift)));
  if (shift >= 0) q *= ten;
  else q /= ten;
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

} // namespace

Rational parse_rational(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = trim(s.substr(0, slash));
    std::string den = trim(s.substr(slash + 1));
    Rational q;
    try {
      q = Rational(BigInt(num, 10), BigInt(den, 10));
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed rational '" + s + "'");
    }
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }
  return parse_decimal(s);
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  Rational q(x);
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

BigInt pow_int(unsigned long base, unsigned long exp) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

BigInt pow3(unsigned long exp) { return pow_int(3, exp); }

Rational grid_unit(unsigned level) {
  if (level > 20) throw std::out_of_range("grid level too deep");
  thread_local std::unordered_map<unsigned, Rational> cache;
  auto it = cache.find(level);
  if (it != cache.end()) return it->second;
  Rational u(BigInt(1), pow3(1UL << level));
  cache.emplace(level, u);
  return u;
}

double log_rational(const Rational& q) {
  if (q <= 0) throw std::domain_error("log of non-positive rational");
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log(mn) - std::log(md) + static_cast<double>(en - ed) * std::log(2.0);
}

long inverse_power_of_three(const Rational& q) {
  if (q.get_num() != 1) return -1;
  BigInt d = q.get_den();
  long e = 0;
  while (d > 1) {
    if (mpz_divisible_ui_p(d.get_mpz_t(), 3) == 0) return -1;
    mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), 3);
    ++e;
  }
  return e;
}

BigInt floor_div(const Rational& q) {
  BigInt r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

BigInt ceil_div(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

} // namespace oseries
