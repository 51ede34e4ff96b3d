#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

namespace bobw {

// GMP-backed exact rational; always canonical (lowest terms, positive
// denominator). Division by zero throws std::overflow_error.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RationalMatrix = Matrix<Rational>;
using RationalVector = Vector<Rational>;

/// Parses "p/q", "p" or a plain decimal such as "0.9" into a canonical rational.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

Integer floor(const Rational& r);
Integer ceil(const Rational& r);
bool is_integral(const Rational& r);

std::int64_t to_int64(const Integer& z);
double to_double(const Rational& r);

/// Best rational approximation with denominator at most max_denominator
/// (continued-fraction convergents and semiconvergents).
Rational approximate(double value, std::int64_t max_denominator);

template <class Scalar>
Matrix<double> to_double(const Matrix<Scalar>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if constexpr (std::is_same_v<Scalar, double>)
        out(r, c) = m(r, c);
      else
        out(r, c) = to_double(m(r, c));
    }
  return out;
}

}  // namespace bobw
