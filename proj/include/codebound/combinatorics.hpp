#pragma once

// Exact combinatorial kernels: binomials, Krawtchouk polynomials,
// count-distribution enumeration and the square-root coefficients that
// drive the block diagonalization.  Everything here is exact integer or
// ExactScalar arithmetic; rounding only happens when a caller converts.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "codebound/bigint.hpp"
#include "codebound/exact.hpp"

namespace codebound {

// A map from a column-type alphabet {0,1}^t (t = 1, 2 or 3) to counts
// summing to `total`.  counts are indexed by the lexicographic order of
// the column words, i.e. index = sum_j bit_j << (t-1-j).
struct Distribution {
  int alphabet_size = 0;
  std::vector<int> counts;
  int total = 0;

  Distribution() = default;
  Distribution(int alphabet, std::vector<int> c) : alphabet_size(alphabet), counts(std::move(c)) {
    for (int v : counts) total += v;
    validate();
  }

  void validate() const {
    if (alphabet_size != 2 && alphabet_size != 4 && alphabet_size != 8)
      throw std::invalid_argument("Distribution: alphabet size must be 2, 4 or 8");
    if ((int)counts.size() != alphabet_size)
      throw std::invalid_argument("Distribution: counts length mismatch");
    int s = 0;
    for (int v : counts) {
      if (v < 0) throw std::invalid_argument("Distribution: negative count");
      s += v;
    }
    if (s != total) throw std::invalid_argument("Distribution: counts do not sum to total");
  }

  int operator[](int idx) const { return counts[idx]; }
};

// C(a, b) with the convention C(a,b) = 0 unless 0 <= b <= a.
inline BigInt binomial(long long a, long long b) {
  if (b < 0 || b > a || a < 0) return BigInt(0);
  if (b > a - b) b = a - b;
  BigInt r = 1;
  for (long long i = 1; i <= b; ++i) {
    r *= (a - b + i);
    r /= i;
  }
  return r;
}

// K_k^n(t) = sum_i (-1)^i C(t,i) C(n-t,k-i)
inline BigInt krawtchouk(int n, int k, int t) {
  if (n < 0) throw std::invalid_argument("krawtchouk: n must be nonnegative");
  BigInt total = 0;
  for (int i = 0; i <= k; ++i) {
    BigInt term = binomial(t, i) * binomial(n - t, k - i);
    if (i & 1)
      total -= term;
    else
      total += term;
  }
  return total;
}

// All distributions over an alphabet of the given size with counts summing
// to n, enumerated in lexicographically decreasing count order.
inline std::vector<Distribution> enumerate_distributions(int alphabet_size, int n) {
  if (alphabet_size != 2 && alphabet_size != 4 && alphabet_size != 8)
    throw std::invalid_argument("enumerate_distributions: alphabet size must be 2, 4 or 8");
  if (n < 0) throw std::invalid_argument("enumerate_distributions: n must be nonnegative");
  std::vector<Distribution> out;
  std::vector<int> cur(alphabet_size, 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == alphabet_size - 1) {
      cur[pos] = remaining;
      out.emplace_back(alphabet_size, cur);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      cur[pos] = v;
      rec(pos + 1, remaining - v);
    }
  };
  rec(0, n);
  return out;
}

// |Omega_lambda| = n! / prod_v lambda(v)!
inline BigInt omega_size(const Distribution& lambda) {
  lambda.validate();
  BigInt r = 1;
  int placed = 0;
  for (int v : lambda.counts) {
    // multiply by C(placed + v, v) instead of dividing factorials
    r *= binomial(placed + v, v);
    placed += v;
  }
  return r;
}

inline int i_of(const Distribution& alpha) { return alpha.counts[2] + alpha.counts[3]; }  // alpha(10)+alpha(11)
inline int j_of(const Distribution& alpha) { return alpha.counts[1] + alpha.counts[3]; }  // alpha(01)+alpha(11)

// gamma_{alpha,k}: signed sum over p of C(k,p) * sqrt of a product of four
// binomials.  Radicands are nonnegative under the binomial convention.
inline ExactScalar gamma_coeff(const Distribution& alpha, int k) {
  alpha.validate();
  if (alpha.alphabet_size != 4)
    throw std::invalid_argument("gamma_coeff: alpha must be a distribution over {0,1}^2");
  int a00 = alpha.counts[0], a01 = alpha.counts[1], a10 = alpha.counts[2], a11 = alpha.counts[3];
  if (k < 0 || 2 * k > alpha.total)
    throw std::invalid_argument("gamma_coeff: k out of range");
  ExactScalar out;
  for (int p = 0; p <= k; ++p) {
    BigInt rad = binomial(a01 + a00 - k, a01 - p) * binomial(a01 + a11 - k, a01 - p) *
                 binomial(a10 + a00 - k, a10 - p) * binomial(a10 + a11 - k, a10 - p);
    if (rad == 0) continue;
    BigInt c = binomial(k, p);
    if (p & 1) c = -c;
    out.add_root_term(c, rad);
  }
  return out;
}

// lambda'(c) = lambda(c0) + lambda(c1) for c in {0,1}^2
inline Distribution project_prime(const Distribution& lambda) {
  lambda.validate();
  if (lambda.alphabet_size != 8)
    throw std::invalid_argument("project_prime: lambda must be a distribution over {0,1}^3");
  std::vector<int> c(4, 0);
  for (int idx = 0; idx < 8; ++idx) c[idx >> 1] += lambda.counts[idx];
  return Distribution(4, std::move(c));
}

// ---- fast integer tables used by block assembly -------------------------
//
// Values fit comfortably: |K_k^n(t)| <= C(n,k) and the theta products are
// bounded by 2^n, so 64-bit is plenty for n <= 40.

class KrawtchoukTable {
 public:
  explicit KrawtchoukTable(int max_n) : max_n_(max_n), table_((max_n + 1) * (max_n + 1) * (max_n + 1)) {
    for (int n = 0; n <= max_n; ++n)
      for (int k = 0; k <= n; ++k)
        for (int t = 0; t <= n; ++t)
          table_[idx(n, k, t)] = krawtchouk(n, k, t).convert_to<long long>();
  }

  // callers only use 0 <= k,t <= n; the sum is identically zero for k > n
  long long operator()(int n, int k, int t) const {
    if (k < 0 || k > n || t < 0 || t > n) return 0;
    return table_[idx(n, k, t)];
  }

 private:
  std::size_t idx(int n, int k, int t) const {
    return (std::size_t(n) * (max_n_ + 1) + k) * (max_n_ + 1) + t;
  }
  int max_n_;
  std::vector<long long> table_;
};

}  // namespace codebound
