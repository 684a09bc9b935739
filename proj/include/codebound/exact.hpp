#pragma once

// ExactScalar: a finite sum  sum_i  c_i * sqrt(r_i)  with integer c_i and
// nonnegative integer radicands r_i.  Terms with equal radicands are
// collapsed, so values that are rational (all r_i square or zero) stay
// exact.  Conversion to double or double-double happens term by term.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "codebound/bigint.hpp"

namespace codebound {

class ExactScalar {
 public:
  ExactScalar() = default;
  explicit ExactScalar(BigInt integer_value) {
    if (integer_value != 0) terms_[BigInt(1)] = std::move(integer_value);
  }

  static ExactScalar zero() { return ExactScalar(); }

  // c * sqrt(r), r >= 0
  static ExactScalar root_term(BigInt c, BigInt radicand) {
    if (radicand < 0) throw std::invalid_argument("ExactScalar: negative radicand");
    ExactScalar s;
    if (c != 0 && radicand != 0) s.terms_[std::move(radicand)] = std::move(c);
    return s;
  }

  void add_root_term(const BigInt& c, const BigInt& radicand) {
    if (radicand < 0) throw std::invalid_argument("ExactScalar: negative radicand");
    if (c == 0 || radicand == 0) return;
    auto it = terms_.find(radicand);
    if (it == terms_.end()) {
      terms_.emplace(radicand, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  ExactScalar& operator+=(const ExactScalar& o) {
    for (const auto& [r, c] : o.terms_) add_root_term(c, r);
    return *this;
  }

  bool is_zero() const { return terms_.empty(); }

  // True when every radicand is a perfect square (value is an integer).
  bool is_integer() const {
    for (const auto& [r, c] : terms_) {
      BigInt s = boost::multiprecision::sqrt(r);
      if (s * s != r) return false;
    }
    return true;
  }

  BigInt as_integer() const {
    BigInt total = 0;
    for (const auto& [r, c] : terms_) {
      BigInt s = boost::multiprecision::sqrt(r);
      if (s * s != r) throw std::logic_error("ExactScalar: value is irrational");
      total += c * s;
    }
    return total;
  }

  template <class R>
  R eval() const {
    R total{};
    for (const auto& [r, c] : terms_) {
      dd cd = to_dd(c);
      dd rd = to_dd(r);
      if constexpr (std::is_same_v<R, dd>) {
        total += cd * codebound::sqrt(rd);
      } else {
        total += static_cast<R>(cd.to_double() * std::sqrt(rd.to_double()));
      }
    }
    return total;
  }

  dd eval_dd() const { return eval<dd>(); }
  double eval_f64() const { return eval<double>(); }

  std::size_t term_count() const { return terms_.size(); }

 private:
  // radicand -> integer coefficient; radicand 1 carries the rational part
  std::map<BigInt, BigInt> terms_;
};

}  // namespace codebound
