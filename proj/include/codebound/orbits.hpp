#pragma once

// Canonical orbit labels for codes of size <= 4 under the group of
// distance-preserving permutations (coordinate permutations composed with
// translations).  A code is canonicalized by translating each element to
// the zero word in turn, ordering the remaining words every possible way,
// and recording the lexicographically smallest column-count vector.  The
// same minimization is implemented twice: once on explicit words (the
// reference path) and once directly on count vectors via precomputed index
// permutations (the fast path used by block assembly).

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "codebound/bigint.hpp"
#include "codebound/combinatorics.hpp"
#include "codebound/words.hpp"

namespace codebound {

struct OrbitLabel {
  int size = 0;                // number of words in the code
  std::vector<int> counts;     // 2^(size-1) column-type counts; {n} for size 1

  bool operator==(const OrbitLabel& o) const { return size == o.size && counts == o.counts; }
  bool operator<(const OrbitLabel& o) const {
    if (size != o.size) return size < o.size;
    return counts < o.counts;
  }

  // packed key; valid for n <= 31
  uint64_t key() const {
    uint64_t k = uint64_t(size);
    for (std::size_t i = 0; i < counts.size(); ++i) k |= uint64_t(counts[i] & 31) << (3 + 5 * i);
    return k;
  }

  std::string to_string() const {
    std::string s = "s" + std::to_string(size) + ":";
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(counts[i]);
    }
    return s;
  }
};

namespace detail {

// Index permutations realizing every (base, ordering) candidate as a
// permutation of column-type indices.  For s words kept relative to the
// base, a column is the bit pattern of the non-base words at a coordinate.
//
// For a 4-set {0,w1,w2,w3}: retranslating to base wj turns the available
// words into linear forms of the original column bits; reordering permutes
// the forms.  Each candidate is therefore a permutation of {0..7}.
inline const std::vector<std::array<int, 8>>& quad_candidates() {
  static const std::vector<std::array<int, 8>> table = [] {
    std::vector<std::array<int, 8>> t;
    // forms[base][slot](b1,b2,b3) as 3-bit truth masks over column index c
    auto b1 = [](int c) { return (c >> 2) & 1; };
    auto b2 = [](int c) { return (c >> 1) & 1; };
    auto b3 = [](int c) { return c & 1; };
    using Form = int (*)(int);
    static const auto f12 = [](int c) { return ((c >> 2) ^ (c >> 1)) & 1; };
    static const auto f13 = [](int c) { return ((c >> 2) ^ c) & 1; };
    static const auto f23 = [](int c) { return ((c >> 1) ^ c) & 1; };
    std::array<std::array<Form, 3>, 4> bases = {{
        {{+b1, +b2, +b3}},       // base 0: {w1, w2, w3}
        {{+b1, +f12, +f13}},     // base w1: {w1, w1+w2, w1+w3}
        {{+b2, +f12, +f23}},     // base w2: {w2, w1+w2, w2+w3}
        {{+b3, +f13, +f23}},     // base w3: {w3, w1+w3, w2+w3}
    }};
    static const int perm3[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& forms : bases)
      for (const auto& sigma : perm3) {
        std::array<int, 8> p{};
        for (int c = 0; c < 8; ++c)
          p[c] = 4 * forms[sigma[0]](c) + 2 * forms[sigma[1]](c) + forms[sigma[2]](c);
        t.push_back(p);
      }
    return t;
  }();
  return table;
}

inline const std::vector<std::array<int, 4>>& triple_candidates() {
  static const std::vector<std::array<int, 4>> table = [] {
    std::vector<std::array<int, 4>> t;
    auto b1 = [](int c) { return (c >> 1) & 1; };
    auto b2 = [](int c) { return c & 1; };
    using Form = int (*)(int);
    static const auto f12 = [](int c) { return ((c >> 1) ^ c) & 1; };
    std::array<std::array<Form, 2>, 3> bases = {{
        {{+b1, +b2}},   // base 0
        {{+b1, +f12}},  // base w1
        {{+b2, +f12}},  // base w2
    }};
    for (const auto& forms : bases)
      for (int swap = 0; swap < 2; ++swap) {
        std::array<int, 4> p{};
        for (int c = 0; c < 4; ++c) {
          int x = forms[swap](c), y = forms[1 - swap](c);
          p[c] = 2 * x + y;
        }
        t.push_back(p);
      }
    return t;
  }();
  return table;
}

template <std::size_t N, class Cands>
inline std::vector<int> minimize_counts(const std::array<int, N>& counts, const Cands& cands) {
  std::array<int, N> best{};
  bool first = true;
  for (const auto& p : cands) {
    std::array<int, N> cur{};
    for (std::size_t c = 0; c < N; ++c) cur[p[c]] = counts[c];
    if (first || cur < best) {
      best = cur;
      first = false;
    }
  }
  return std::vector<int>(best.begin(), best.end());
}

}  // namespace detail

// Canonical label of the orbit of S.  Reference implementation on words.
inline OrbitLabel canonical_label(const CodeSet& S) {
  int s = S.size();
  if (s > 4) throw std::invalid_argument("canonical_label: |S| > 4");
  OrbitLabel lab;
  lab.size = s;
  if (s == 0) return lab;
  if (s == 1) {
    lab.counts = {S.n};
    return lab;
  }
  std::vector<int> best;
  std::vector<uint32_t> rest(s - 1);
  static const int perm3[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int bi = 0; bi < s; ++bi) {
    uint32_t base = S.words[bi];
    int r = 0;
    for (int j = 0; j < s; ++j)
      if (j != bi) rest[r++] = S.words[j] ^ base;
    int nperm = (s == 2) ? 1 : (s == 3) ? 2 : 6;
    for (int pi = 0; pi < nperm; ++pi) {
      std::vector<int> counts(std::size_t(1) << (s - 1), 0);
      for (int i = 0; i < S.n; ++i) {
        int c = 0;
        for (int j = 0; j < s - 1; ++j) {
          int jj = (s == 4) ? perm3[pi][j] : (s == 3 ? (pi ? 1 - j : j) : j);
          c = (c << 1) | int((rest[jj] >> i) & 1u);
        }
        ++counts[c];
      }
      if (best.empty() || counts < best) best = std::move(counts);
    }
  }
  lab.counts = std::move(best);
  return lab;
}

// Fast path: label of {0} ∪ {w1..ws-1} from the column-count vector of the
// ordered nonzero words, plus feasibility screening.  counts index bit j
// (from the top) is word j's bit.  Returns nullopt if some pairwise
// distance violates the minimum distance (or parity, in even mode).
inline std::optional<OrbitLabel> label_from_ordered_counts(int nwords, const int* counts, int d,
                                                           bool even_mode) {
  // pairwise distances: between word j and word k (0 = the zero word)
  // dist(0,j) = sum over columns with bit j set, dist(j,k) = columns where bits differ
  int m = nwords - 1;  // number of nonzero-slot words
  int ncols = 1 << m;
  int distm[4][4] = {};
  for (int c = 0; c < ncols; ++c) {
    int v = counts[c];
    if (!v) continue;
    for (int j = 0; j < m; ++j) {
      int bj = (c >> (m - 1 - j)) & 1;
      if (bj) distm[0][j + 1] += v;
      for (int k = j + 1; k < m; ++k) {
        int bk = (c >> (m - 1 - k)) & 1;
        if (bj != bk) distm[j + 1][k + 1] += v;
      }
    }
  }
  // identify distinct words: word 0 is the zero word
  int repr[4];
  int nd = 0;
  int reps[4];
  for (int j = 0; j <= m; ++j) {
    int found = -1;
    for (int t = 0; t < nd; ++t) {
      int k = reps[t];
      int dj = (j < k) ? distm[j][k] : distm[k][j];
      if (dj == 0) {
        found = t;
        break;
      }
    }
    if (found < 0) {
      reps[nd] = j;
      found = nd++;
    }
    repr[j] = found;
  }
  // feasibility over distinct pairs
  for (int a = 0; a < nd; ++a)
    for (int b = a + 1; b < nd; ++b) {
      int j = reps[a], k = reps[b];
      int dist = (j < k) ? distm[j][k] : distm[k][j];
      if (dist < d) return std::nullopt;
      if (even_mode && (dist & 1)) return std::nullopt;
    }
  OrbitLabel lab;
  lab.size = nd;
  int n_total = 0;
  for (int c = 0; c < ncols; ++c) n_total += counts[c];
  if (nd == 1) {
    lab.counts = {n_total};
    return lab;
  }
  // project counts onto the distinct nonzero words (reps[1..nd-1])
  if (nd == 2) {
    int w = reps[1];
    std::array<int, 2> c2{};
    for (int c = 0; c < ncols; ++c) c2[(c >> (m - 1 - (w - 1))) & 1] += counts[c];
    lab.counts = {c2[0], c2[1]};
    return lab;
  }
  if (nd == 3) {
    int w1 = reps[1] - 1, w2 = reps[2] - 1;
    std::array<int, 4> c4{};
    for (int c = 0; c < ncols; ++c)
      c4[2 * ((c >> (m - 1 - w1)) & 1) + ((c >> (m - 1 - w2)) & 1)] += counts[c];
    lab.counts = detail::minimize_counts(c4, detail::triple_candidates());
    return lab;
  }
  std::array<int, 8> c8{};
  for (int c = 0; c < ncols; ++c) c8[c] += counts[c];
  lab.counts = detail::minimize_counts(c8, detail::quad_candidates());
  return lab;
}

// Label of the quadruple orbit encoded by lambda over {0,1}^3 (index
// 4*t1+2*t2+t3).  The quadruple (v,w,v',w') with v = 0 has per-coordinate
// bits w = t1, v' = t1^t2^t3, w' = t1^t3; the entry of the empty-set
// matrix at that position is x(union) when the union is feasible.
inline std::optional<OrbitLabel> label_from_lambda_counts(const int* lambda, int d, bool even_mode) {
  int oc[8] = {};
  for (int t = 0; t < 8; ++t) {
    int t1 = (t >> 2) & 1, t2 = (t >> 1) & 1, t3 = t & 1;
    int idx = 4 * t1 + 2 * (t1 ^ t2 ^ t3) + (t1 ^ t3);
    oc[idx] += lambda[t];
  }
  return label_from_ordered_counts(4, oc, d, even_mode);
}

// Spec-facing configuration unions ------------------------------------------

// Union of the base pair {0, 1^m 0^(n-m)} with the pair (v, w) described
// coordinatewise by alpha on the m-window and beta on the rest.
inline std::optional<OrbitLabel> union_label_from_config(int n, int d, bool even_mode, int m,
                                                         const Distribution& alpha,
                                                         const Distribution& beta) {
  alpha.validate();
  beta.validate();
  if (alpha.alphabet_size != 4 || beta.alphabet_size != 4)
    throw std::invalid_argument("union_label_from_config: alpha/beta must be over {0,1}^2");
  if (alpha.total != m || beta.total != n - m)
    throw std::invalid_argument("union_label_from_config: window totals do not match (m, n-m)");
  // ordered words (u, v, w); column bits (u_i, v_i, w_i)
  int oc[8] = {};
  for (int c = 0; c < 4; ++c) {
    oc[4 + c] += alpha.counts[c];  // u = 1 on the m-window
    oc[c] += beta.counts[c];
  }
  return label_from_ordered_counts(4, oc, d, even_mode);
}

// Union of the quadruple encoded by lambda (empty-set matrix case).
inline std::optional<OrbitLabel> union_label_from_config(int n, int d, bool even_mode,
                                                         const Distribution& lambda) {
  lambda.validate();
  if (lambda.alphabet_size != 8)
    throw std::invalid_argument("union_label_from_config: lambda must be over {0,1}^3");
  if (lambda.total != n)
    throw std::invalid_argument("union_label_from_config: lambda total must equal n");
  return label_from_lambda_counts(lambda.counts.data(), d, even_mode);
}

// Representative code for a label: columns laid out in index order.
inline CodeSet representative_code(const OrbitLabel& lab, int n) {
  std::vector<uint32_t> words;
  if (lab.size >= 1) words.push_back(0);
  if (lab.size >= 2) {
    int m = lab.size - 1;
    std::vector<uint32_t> rest(m, 0);
    int pos = 0;
    for (std::size_t c = 0; c < lab.counts.size(); ++c)
      for (int r = 0; r < lab.counts[c]; ++r, ++pos)
        for (int j = 0; j < m; ++j)
          if ((int(c) >> (m - 1 - j)) & 1) rest[j] |= (1u << pos);
    for (uint32_t w : rest) words.push_back(w);
  }
  return CodeSet(n, std::move(words));
}

// Exact orbit size via orbit-stabilizer.  even_mode counts codes inside the
// even-weight class (group = coordinate permutations + even translations);
// otherwise the full group.  S is translated to contain the zero word.
inline BigInt orbit_size_exact(const CodeSet& S, bool even_mode) {
  int s = S.size();
  if (s == 0) return BigInt(1);
  std::vector<uint32_t> base_words(S.words);
  uint32_t t0 = base_words[0];
  for (auto& w : base_words) w ^= t0;
  int n = S.n;
  auto column_counts = [&](const std::vector<uint32_t>& order) {
    std::vector<int> counts(std::size_t(1) << (s - 1), 0);
    for (int i = 0; i < n; ++i) {
      int c = 0;
      for (int j = 0; j < s - 1; ++j) c = (c << 1) | int((order[j] >> i) & 1u);
      ++counts[c];
    }
    return counts;
  };
  // identity-order counts for S itself
  std::vector<uint32_t> rest0;
  for (uint32_t w : base_words)
    if (w) rest0.push_back(w);
  std::vector<int> ref = column_counts(rest0);
  BigInt fact_prod = 1;
  for (int c : ref) {
    BigInt f = 1;
    for (int i = 2; i <= c; ++i) f *= i;
    fact_prod *= f;
  }
  static const int perm3[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  int nperm = (s == 1) ? 1 : (s == 2) ? 1 : (s == 3) ? 2 : 6;
  BigInt stab = 0;
  for (int wi = 0; wi < s; ++wi) {
    std::vector<uint32_t> shifted;
    for (uint32_t w : base_words)
      if ((w ^ base_words[wi]) != 0) shifted.push_back(w ^ base_words[wi]);
    for (int pi = 0; pi < nperm; ++pi) {
      std::vector<uint32_t> order(s - 1);
      for (int j = 0; j < s - 1; ++j) {
        int jj = (s == 4) ? perm3[pi][j] : (s == 3 ? (pi ? 1 - j : j) : j);
        order[j] = shifted[jj];
      }
      if (column_counts(order) == ref) stab += fact_prod;
    }
  }
  BigInt group = 1;
  for (int i = 2; i <= n; ++i) group *= i;
  group <<= even_mode ? (n - 1) : n;
  if (group % stab != 0) throw std::logic_error("orbit_size_exact: stabilizer does not divide group order");
  return group / stab;
}

// Closed-form even-mode orbit sizes for the invariant block (sizes <= 2).
inline BigInt orbit_size(const OrbitLabel& lab, int n) {
  if (lab.size == 0) return BigInt(1);
  if (lab.size == 1) return BigInt(1) << (n - 1);
  if (lab.size == 2) {
    int m = lab.counts[1];
    return (BigInt(1) << (n - 2)) * binomial(n, m);
  }
  throw std::invalid_argument("orbit_size: only sizes <= 2 are supported");
}

// One representative label per orbit of codes with |S| <= max_size and
// pairwise distances >= d (all even in even_mode), in sorted label order.
// Generation is over count distributions; no word-space scan.
inline std::vector<OrbitLabel> enumerate_orbits(int n, int d, int max_size, bool even_mode) {
  if (max_size < 0 || max_size > 4) throw std::invalid_argument("enumerate_orbits: max_size must be 0..4");
  if (even_mode && (d & 1)) throw std::invalid_argument("enumerate_orbits: d must be even in even mode");
  std::set<OrbitLabel> labels;
  labels.insert(OrbitLabel{});  // empty code
  if (max_size >= 1) labels.insert(OrbitLabel{1, {n}});
  auto dist_ok = [&](int m) { return m >= d && m <= n && (!even_mode || (m & 1) == 0); };
  if (max_size >= 2) {
    for (int m = d; m <= n; ++m)
      if (dist_ok(m)) labels.insert(OrbitLabel{2, {n - m, m}});
  }
  if (max_size >= 3) {
    for (int m = d; m <= n; ++m) {
      if (!dist_ok(m)) continue;
      for (int a = 0; a <= m; ++a)
        for (int b = 0; b <= n - m; ++b) {
          int oc[4] = {n - m - b, b, m - a, a};  // ordered words (u, v)
          auto lab = label_from_ordered_counts(3, oc, d, even_mode);
          if (lab && lab->size == 3) labels.insert(*lab);
        }
    }
  }
  if (max_size >= 4) {
    int lam[8];
    std::function<void(int, int)> rec = [&](int pos, int rem) {
      if (pos == 7) {
        lam[7] = rem;
        auto lab = label_from_lambda_counts(lam, d, even_mode);
        if (lab && lab->size == 4) labels.insert(*lab);
        return;
      }
      for (int v = rem; v >= 0; --v) {
        lam[pos] = v;
        rec(pos + 1, rem - v);
      }
    };
    rec(0, n);
  }
  return std::vector<OrbitLabel>(labels.begin(), labels.end());
}

}  // namespace codebound
