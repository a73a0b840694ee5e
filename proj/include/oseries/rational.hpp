#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace oseries {

using Rational = mpq_class;
using BigInt = mpz_class;

// Accepts "p/q", integers and plain decimals ("0.125", "-3.5e-2"), all exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

Rational from_double(double x);
double to_double(const Rational& q);

BigInt pow_int(unsigned long base, unsigned long exp);
BigInt pow3(unsigned long exp);

// Atom length 3^{-2^level} of the triadic sigma-field F_level.
Rational grid_unit(unsigned level);

// Natural log of a positive rational, accurate for huge numerators/denominators.
double log_rational(const Rational& q);

// Exponent e with q == 3^{-e}, or -1 if q is not such a power.
long inverse_power_of_three(const Rational& q);

BigInt floor_div(const Rational& q);
BigInt ceil_div(const Rational& q);
bool is_integer(const Rational& q);

} // namespace oseries
