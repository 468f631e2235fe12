#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lwb::exact {

// mpq_class keeps results of arithmetic canonical; values built from a raw
// numerator/denominator pair must go through make_rational.
using Rational = mpq_class;
using Integer = mpz_class;
using Vector = std::vector<Rational>;

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

/// "p/q", or "p" when q == 1.
std::string to_string(const Rational& r);

/// Accepts "p", "-p", "p/q". Throws lwb::Error("parse_error") otherwise.
Rational parse_rational(std::string_view text);

/// a^n for n >= 0.
Rational power(const Rational& a, unsigned n);

bool is_zero(const Vector& v);
Vector zero_vector(std::size_t n);

/// Dense dot product; sizes must agree.
Rational dot(const Vector& a, const Vector& b);

}  // namespace lwb::exact
