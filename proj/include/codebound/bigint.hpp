#pragma once

// Arbitrary-precision integer/rational carriers and conversions into the
// floating-point world.  boost::multiprecision supplies the integer type;
// everything downstream only sees the aliases below.

#include <boost/multiprecision/cpp_int.hpp>

#include "codebound/dd.hpp"

namespace codebound {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Exact split of a big integer into hi+lo doubles (error <= 1 ulp of lo).
inline dd to_dd(const BigInt& v) {
  double hi = v.template convert_to<double>();
  BigInt rem = v - BigInt(hi);
  double lo = rem.template convert_to<double>();
  return dd::from_sum(hi, lo);
}

inline dd to_dd(const BigRational& v) {
  dd num = to_dd(boost::multiprecision::numerator(v));
  dd den = to_dd(boost::multiprecision::denominator(v));
  return num / den;
}

inline double to_double(const BigInt& v) { return v.template convert_to<double>(); }
inline double to_double(const BigRational& v) { return v.template convert_to<double>(); }

inline dd dd_from_int128(__int128 v) {
  double hi = static_cast<double>(v);
  __int128 rem = v - static_cast<__int128>(hi);
  return dd::from_sum(hi, static_cast<double>(rem));
}

}  // namespace codebound
