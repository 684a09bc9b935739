#pragma once

// Double-double arithmetic: an unevaluated sum of two doubles giving
// roughly 106 bits of significand.  Used wherever coefficient assembly
// or a solve needs more headroom than plain double provides.
//
// The error-free transformations (two_sum, two_prod) follow the classic
// Dekker/Knuth constructions; two_prod relies on fma.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace codebound {

namespace detail {

inline double two_sum(double a, double b, double& err) {
  double s = a + b;
  double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

// requires |a| >= |b|
inline double quick_two_sum(double a, double b, double& err) {
  double s = a + b;
  err = b - (s - a);
  return s;
}

inline double two_prod(double a, double b, double& err) {
  double p = a * b;
  err = std::fma(a, b, -p);
  return p;
}

}  // namespace detail

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}

  static dd from_sum(double h, double l) {
    double e;
    double s = detail::quick_two_sum(h, l, e);
    return dd(s, e);
  }

  double to_double() const { return hi; }
  explicit operator double() const { return hi; }

  bool is_finite() const { return std::isfinite(hi) && std::isfinite(lo); }
};

inline dd operator+(dd a, dd b) {
  double e1, e2;
  double s = detail::two_sum(a.hi, b.hi, e1);
  double t = detail::two_sum(a.lo, b.lo, e2);
  e1 += t;
  s = detail::quick_two_sum(s, e1, e1);
  e1 += e2;
  return dd::from_sum(s, e1);
}

inline dd operator-(dd a) { return dd(-a.hi, -a.lo); }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  double e;
  double p = detail::two_prod(a.hi, b.hi, e);
  e += a.hi * b.lo + a.lo * b.hi;
  return dd::from_sum(p, e);
}

inline dd operator/(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = a - dd(q1) * b;
  double q2 = r.hi / b.hi;
  r = r - dd(q2) * b;
  double q3 = r.hi / b.hi;
  double e;
  double s = detail::quick_two_sum(q1, q2, e);
  dd q(s, e);
  return q + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(dd a, dd b) { return !(a == b); }
inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }

inline dd abs(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline dd sqrt(dd a) {
  if (a.hi == 0.0 && a.lo == 0.0) return dd(0.0);
  // one Newton step on 1/sqrt, starting from the double estimate
  double s = std::sqrt(a.hi);
  dd sd(s);
  dd e = (a - sd * sd) / dd(2.0 * s);
  return sd + e;
}

inline dd min(dd a, dd b) { return a < b ? a : b; }
inline dd max(dd a, dd b) { return a < b ? b : a; }

inline std::string to_string(dd a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", a.hi);
  return buf;
}

// Scalar traits shared by the templated linear algebra / solver code.
template <class R>
struct real_traits;

template <>
struct real_traits<double> {
  static constexpr double eps() { return 2.220446049250313e-16; }
  static double from(dd v) { return v.to_double(); }
  static double to_double(double v) { return v; }
  static double sqrt(double v) { return std::sqrt(v); }
  static double abs(double v) { return std::fabs(v); }
  static const char* name() { return "f64"; }
};

template <>
struct real_traits<dd> {
  static constexpr double eps() { return 4.93038065763132e-32; }  // 2^-104
  static dd from(dd v) { return v; }
  static double to_double(dd v) { return v.hi; }
  static dd sqrt(dd v) { return codebound::sqrt(v); }
  static dd abs(dd v) { return codebound::abs(v); }
  static const char* name() { return "dd"; }
};

}  // namespace codebound
