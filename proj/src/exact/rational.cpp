#include "lwb/exact/rational.hpp"

#include <cctype>

#include "lwb/error.hpp"

namespace lwb::exact {

Rational make_rational(long num, long den) {
  if (den == 0) throw Error("zero_denominator", "make_rational");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error("zero_denominator", "make_rational");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw Error("parse_error", "not a rational: '" + s + "'");
    return Rational(Integer(strip_plus(s)));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw Error("parse_error", "not a rational: '" + s + "'");
  return make_rational(Integer(strip_plus(num)), Integer(den));
}

Rational power(const Rational& a, unsigned n) {
  Rational out(1);
  for (unsigned i = 0; i < n; ++i) out *= a;
  return out;
}

bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

Vector zero_vector(std::size_t n) { return Vector(n, Rational(0)); }

Rational dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error("dimension_mismatch", "dot");
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

}  // namespace lwb::exact
