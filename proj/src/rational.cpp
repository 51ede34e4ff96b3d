#include "bobw/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bobw {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s))
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  const Integer z{std::string(s)};
  return negative ? Integer(-z) : z;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Integer num = parse_integer(trim(s.substr(0, slash)), text);
    const Integer den = parse_integer(trim(s.substr(slash + 1)), text);
    if (den == 0)
      throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if ((int_part.empty() && frac_part.empty()) ||
        (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    Integer scale = 1;
    for (std::size_t k = 0; k < frac_part.size(); ++k) scale *= 10;
    const Integer whole = int_part.empty() ? Integer(0) : Integer(std::string(int_part));
    const Integer frac = frac_part.empty() ? Integer(0) : Integer(std::string(frac_part));
    Rational r(Integer(whole * scale + frac), scale);
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_integer(s, text));
}

std::string to_string(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Integer floor(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  Integer q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

Integer ceil(const Rational& r) {
  const Integer f = floor(r);
  return Rational(f) == r ? f : Integer(f + 1);
}

bool is_integral(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

std::int64_t to_int64(const Integer& z) {
  if (z > std::numeric_limits<std::int64_t>::max() || z < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer out of 64-bit range: " + z.str());
  return z.convert_to<std::int64_t>();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational approximate(double value, std::int64_t max_denominator) {
  if (!std::isfinite(value)) throw std::invalid_argument("cannot approximate a non-finite value");
  if (max_denominator < 1) throw std::invalid_argument("max_denominator must be positive");
  const Rational exact(value);
  Integer num = boost::multiprecision::numerator(exact);
  Integer den = boost::multiprecision::denominator(exact);
  if (den <= max_denominator) return exact;

  // Continued-fraction expansion keeping the last two convergents.
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Integer n = num, d = den;
  for (;;) {
    const Integer a = floor(Rational(n, d));
    const Integer q2 = q0 + a * q1;
    if (q2 > max_denominator) break;
    const Integer p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const Integer rem = n - a * d;
    n = d;
    d = rem;
    if (d == 0) break;
  }
  const Integer k = (Integer(max_denominator) - q0) / q1;
  const Rational semi(Integer(p0 + k * p1), Integer(q0 + k * q1));
  const Rational conv(p1, q1);
  return abs(semi - exact) < abs(conv - exact) ? semi : conv;
}

}  // namespace bobw
