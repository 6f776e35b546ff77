#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace rperm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow2(unsigned e) {
  BigInt r = 1;
  r <<= e;
  return r;
}

inline Rational inv_pow2(unsigned e) { return Rational(BigInt(1), pow2(e)); }

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  return Rational(num, den);
}

inline BigInt numerator_of(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline BigInt denominator_of(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

/// Always "p/q", including integers ("3/1"), so that outputs parse uniformly.
inline std::string to_fraction_string(const Rational& q) {
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Number of compositions of m: 2^(m-1), with the empty composition counted once.
inline BigInt composition_count(long m) {
  if (m < 0) return 0;
  if (m == 0) return 1;
  return pow2(static_cast<unsigned>(m - 1));
}

}  // namespace rperm
