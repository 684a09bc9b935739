#pragma once

// PSD blocks of the reduced program.
//
// Three families are produced:
//   EMPTY(m,k,l)  - blocks of the full diagonalization of the empty-set
//                   matrix over ordered word pairs, rows restricted by
//                   distance deletion (i+i' in D), the unordered-pair
//                   reduction (i' even) and the even-weight restriction.
//   PAIR(m,k,l,±) - blocks of the pair-stabilizer matrices, split into
//                   eigenparts of the translation involution.
//   INVARIANT     - the block spanned by the empty set vector together
//                   with the singleton- and pair-orbit characteristic
//                   vectors; it replaces EMPTY(n,0,0).
//
// Coefficients are assembled in double-double arithmetic; the per-term
// magnitudes are large and cancel, so plain double assembly would lose
// most of its digits.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "codebound/combinatorics.hpp"
#include "codebound/linalg.hpp"
#include "codebound/orbits.hpp"

namespace codebound {

// theta_{lambda,alpha,beta}: zero unless lambda' = alpha + beta, otherwise
// a product of Krawtchouk values, one per column pair type.
inline BigInt theta(const Distribution& lambda, const Distribution& alpha, const Distribution& beta) {
  lambda.validate();
  alpha.validate();
  beta.validate();
  if (lambda.alphabet_size != 8 || alpha.alphabet_size != 4 || beta.alphabet_size != 4)
    throw std::invalid_argument("theta: expected lambda over {0,1}^3 and alpha, beta over {0,1}^2");
  if (alpha.total + beta.total != lambda.total)
    throw std::invalid_argument("theta: window sizes do not add up to n");
  Distribution lp = project_prime(lambda);
  BigInt out = 1;
  for (int c = 0; c < 4; ++c) {
    if (alpha.counts[c] + beta.counts[c] != lp.counts[c]) return BigInt(0);
    out *= krawtchouk(lp.counts[c], lambda.counts[2 * c + 1], beta.counts[c]);
    if (out == 0) return out;
  }
  return out;
}

// Gamma_{alpha,k}: a [k, n-k] x [k, n-k] matrix with at most one nonzero
// entry, at (i_alpha, j_alpha).
struct GammaMatrix {
  int k = 0;
  int lo = 0, hi = 0;  // index range [k, n-k]
  int i = 0, j = 0;    // position of the only possibly nonzero entry
  ExactScalar value;

  bool in_range() const { return i >= lo && i <= hi && j >= lo && j <= hi; }
};

inline GammaMatrix gamma_matrix(const Distribution& alpha, int k) {
  GammaMatrix g;
  g.k = k;
  g.lo = k;
  g.hi = alpha.total - k;
  g.i = i_of(alpha);
  g.j = j_of(alpha);
  g.value = gamma_coeff(alpha, k);
  return g;
}

struct Triplet {
  int r = 0, c = 0;
  dd v;
};

// Symmetric sparse matrix, upper triangle (r <= c), entries sorted by (r, c).
struct SparseSym {
  std::vector<Triplet> entries;

  bool empty() const { return entries.empty(); }
  void add_dense_to(std::vector<double>& A, int dim, double x) const {
    for (const auto& t : entries) {
      A[std::size_t(t.c) * dim + t.r] += x * t.v.hi;
      if (t.r != t.c) A[std::size_t(t.r) * dim + t.c] += x * t.v.hi;
    }
  }
};

enum class BlockKind { Empty, Pair, Invariant, Diag, Generic };

struct BlockSpec {
  BlockKind kind = BlockKind::Generic;
  int m = 0, k = 0, l = 0;
  int sign = 0;  // +1 / -1 for the pair involution parts
  int dim = 0;
  std::vector<std::pair<int, int>> index_set;          // retained (i, i') labels
  std::vector<std::pair<int, SparseSym>> coeff;        // var id -> coefficient, sorted by var
  SparseSym constant;                                  // affine part from x(empty)=1

  std::string id_string() const {
    switch (kind) {
      case BlockKind::Empty:
        return "EMPTY(" + std::to_string(m) + "," + std::to_string(k) + "," + std::to_string(l) + ")";
      case BlockKind::Pair:
        return "PAIR(" + std::to_string(m) + "," + std::to_string(k) + "," + std::to_string(l) + "," +
               (sign > 0 ? "+" : "-") + ")";
      case BlockKind::Invariant:
        return "INVARIANT";
      case BlockKind::Diag:
        return "DIAG";
      default:
        return "GENERIC";
    }
  }

  // dense symmetric evaluation at a variable assignment
  std::vector<double> evaluate(const std::vector<double>& x) const {
    std::vector<double> A(std::size_t(dim) * dim, 0.0);
    constant.add_dense_to(A, dim, 1.0);
    for (const auto& [var, mat] : coeff) mat.add_dense_to(A, dim, x[var]);
    return A;
  }
};

// Sorted table of orbit variables for a given instance.
struct VariableTable {
  std::vector<OrbitLabel> labels;
  std::unordered_map<uint64_t, int> index;

  int find(const OrbitLabel& lab) const {
    auto it = index.find(lab.key());
    return it == index.end() ? -1 : it->second;
  }
  int require(const OrbitLabel& lab) const {
    int id = find(lab);
    if (id < 0) throw std::logic_error("variable table: missing orbit " + lab.to_string());
    return id;
  }
  int size() const { return (int)labels.size(); }
};

inline VariableTable make_variable_table(int n, int d, int max_size, bool even_mode) {
  VariableTable t;
  for (OrbitLabel& lab : enumerate_orbits(n, d, max_size, even_mode)) {
    if (lab.size == 0) continue;  // x(empty) = 1 is folded into affine constants
    t.index.emplace(lab.key(), (int)t.labels.size());
    t.labels.push_back(std::move(lab));
  }
  return t;
}

// psi_{m,k,l}(B_lambda) over the full index grid [k,m-k] x [l,n-m-l]
// (no distance or parity restrictions), as a dense column-major matrix.
// Used by the algebra tests; block assembly iterates splits directly.
struct DenseMat {
  int rows = 0, cols = 0;
  std::vector<dd> a;  // column major
  dd& at(int r, int c) { return a[std::size_t(c) * rows + r]; }
  dd at(int r, int c) const { return a[std::size_t(c) * rows + r]; }
};

inline DenseMat psi_block(int m, int k, int l, const Distribution& lambda, int n) {
  lambda.validate();
  if (lambda.alphabet_size != 8 || lambda.total != n)
    throw std::invalid_argument("psi_block: lambda must lie in Lambda_T^n");
  if (m < 0 || m > n || k < 0 || 2 * k > m || l < 0 || 2 * l > n - m)
    throw std::invalid_argument("psi_block: (m,k,l) out of range");
  int rows1 = m - 2 * k + 1, rows2 = n - m - 2 * l + 1;
  DenseMat out;
  out.rows = out.cols = rows1 * rows2;
  out.a.assign(std::size_t(out.rows) * out.cols, dd(0.0));
  Distribution lp = project_prime(lambda);
  auto pos = [&](int i, int ip) { return (i - k) * rows2 + (ip - l); };
  std::vector<int> ac(4);
  for (ac[0] = 0; ac[0] <= std::min(lp.counts[0], m); ++ac[0])
    for (ac[1] = 0; ac[1] <= std::min(lp.counts[1], m - ac[0]); ++ac[1])
      for (ac[2] = 0; ac[2] <= std::min(lp.counts[2], m - ac[0] - ac[1]); ++ac[2]) {
        ac[3] = m - ac[0] - ac[1] - ac[2];
        if (ac[3] < 0 || ac[3] > lp.counts[3]) continue;
        Distribution alpha(4, ac);
        std::vector<int> bc(4);
        for (int c = 0; c < 4; ++c) bc[c] = lp.counts[c] - ac[c];
        Distribution beta(4, bc);
        BigInt th = theta(lambda, alpha, beta);
        if (th == 0) continue;
        int ia = i_of(alpha), ja = j_of(alpha), ib = i_of(beta), jb = j_of(beta);
        if (ia < k || ia > m - k || ja < k || ja > m - k) continue;
        if (ib < l || ib > n - m - l || jb < l || jb > n - m - l) continue;
        dd val = to_dd(th) * gamma_coeff(alpha, k).eval_dd() * gamma_coeff(beta, l).eval_dd();
        out.at(pos(ia, ib), pos(ja, jb)) += val;
      }
  return out;
}

// ---------------------------------------------------------------------------
// Block assembly
// ---------------------------------------------------------------------------

namespace detail {

struct GammaMemo {
  std::unordered_map<uint32_t, dd> memo;

  dd operator()(int a00, int a01, int a10, int a11, int k) {
    uint32_t key = uint32_t(a00) | uint32_t(a01) << 5 | uint32_t(a10) << 10 | uint32_t(a11) << 15 |
                   uint32_t(k) << 20;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Distribution alpha(4, {a00, a01, a10, a11});
    dd v = gamma_coeff(alpha, k).eval_dd();
    memo.emplace(key, v);
    return v;
  }
};

// feasible lambda, pre-screened once per instance
struct LambdaEntry {
  uint8_t lp[4];     // lambda'(c)
  uint8_t lc1[4];    // lambda(c1)
  int32_t var;       // orbit variable id
};

inline std::vector<LambdaEntry> prescreen_lambdas(int n, int d, bool even_mode,
                                                  const VariableTable& vars) {
  std::vector<LambdaEntry> out;
  int lam[8];
  std::function<void(int, int)> rec = [&](int pos, int rem) {
    if (pos == 7) {
      lam[7] = rem;
      auto lab = label_from_lambda_counts(lam, d, even_mode);
      if (!lab) return;
      LambdaEntry e;
      for (int c = 0; c < 4; ++c) {
        e.lp[c] = uint8_t(lam[2 * c] + lam[2 * c + 1]);
        e.lc1[c] = uint8_t(lam[2 * c + 1]);
      }
      e.var = vars.require(*lab);
      out.push_back(e);
      return;
    }
    for (int v = rem; v >= 0; --v) {
      lam[pos] = v;
      rec(pos + 1, rem - v);
    }
  };
  rec(0, n);
  return out;
}

struct Rec {
  uint64_t key;  // block(8) | var(26) | r(10) | c(10)
  dd val;
};

inline uint64_t rec_key(uint32_t block, uint32_t var, uint32_t r, uint32_t c) {
  return (uint64_t(block) << 46) | (uint64_t(var) << 20) | (uint64_t(r) << 10) | uint64_t(c);
}

// merge sorted records into per-(block, var) sparse matrices
inline void merge_records(std::vector<Rec>& recs, int nblocks,
                          std::vector<std::vector<std::pair<int, SparseSym>>>& out) {
  std::sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) { return a.key < b.key; });
  out.assign(nblocks, {});
  std::size_t i = 0;
  while (i < recs.size()) {
    uint64_t key = recs[i].key;
    dd sum = recs[i].val;
    std::size_t j = i + 1;
    while (j < recs.size() && recs[j].key == key) sum += recs[j++].val;
    uint32_t block = uint32_t(key >> 46);
    uint32_t var = uint32_t((key >> 20) & ((1u << 26) - 1));
    int r = int((key >> 10) & 1023), c = int(key & 1023);
    if (r != c) sum = sum * dd(0.5);  // both orientations were accumulated
    auto& list = out[block];
    if (list.empty() || list.back().first != (int)var) list.push_back({(int)var, SparseSym{}});
    list.back().second.entries.push_back({r, c, sum});
    i = j;
  }
}

}  // namespace detail

// All EMPTY(m,k,l) PSD blocks (with the (n,0,0) slot replaced by the
// invariant block, which the caller appends separately).
inline std::vector<BlockSpec> empty_set_blocks(int n, int d, bool even_mode,
                                               const VariableTable& vars) {
  if (even_mode && (d & 1)) throw std::invalid_argument("empty_set_blocks: d must be even in even mode");
  auto lambdas = detail::prescreen_lambdas(n, d, even_mode, vars);
  KrawtchoukTable K(n);
  detail::GammaMemo gamma;
  auto in_D = [&](int s) {
    if (s == 0) return true;
    if (s < d || s > n) return false;
    return !even_mode || (s & 1) == 0;
  };
  std::vector<BlockSpec> result;
  for (int m = 0; m <= n; ++m) {
    int kmax = m / 2, lmax = (n - m) / 2;
    int nblocks = (kmax + 1) * (lmax + 1);
    // index sets per (k,l)
    std::vector<std::vector<std::pair<int, int>>> fsets(nblocks);
    std::vector<std::vector<int>> posmap(nblocks);
    for (int k = 0; k <= kmax; ++k)
      for (int l = 0; l <= lmax; ++l) {
        if (m == n && k == 0 && l == 0) continue;  // replaced by the invariant block
        int b = k * (lmax + 1) + l;
        int rows2 = n - m - 2 * l + 1;
        posmap[b].assign(std::size_t(m - 2 * k + 1) * rows2, -1);
        for (int i = k; i <= m - k; ++i)
          for (int ip = l; ip <= n - m - l; ++ip) {
            if (!in_D(i + ip)) continue;
            if (ip & 1) continue;                  // unordered-pair reduction
            if (even_mode && (i & 1)) continue;    // implied by the two above; kept as a guard
            posmap[b][std::size_t(i - k) * rows2 + (ip - l)] = (int)fsets[b].size();
            fsets[b].push_back({i, ip});
          }
      }
    std::vector<detail::Rec> recs;
    for (const auto& e : lambdas) {
      int lp0 = e.lp[0], lp1 = e.lp[1], lp2 = e.lp[2], lp3 = e.lp[3];
      int il = lp2 + lp3, jl = lp1 + lp3;
      for (int a0 = std::max(0, m - lp1 - lp2 - lp3); a0 <= std::min(lp0, m); ++a0)
        for (int a1 = std::max(0, m - a0 - lp2 - lp3); a1 <= std::min(lp1, m - a0); ++a1)
          for (int a2 = std::max(0, m - a0 - a1 - lp3); a2 <= std::min(lp2, m - a0 - a1); ++a2) {
            int a3 = m - a0 - a1 - a2;
            if (a3 < 0 || a3 > lp3) continue;
            int ia = a2 + a3, ja = a1 + a3;
            int ib = il - ia, jb = jl - ja;
            if ((ib & 1) || (jb & 1)) continue;  // rows/columns deleted by the pair swap
            long long th = K(lp0, e.lc1[0], lp0 - a0);
            if (!th) continue;
            th *= K(lp1, e.lc1[1], lp1 - a1);
            if (!th) continue;
            th *= K(lp2, e.lc1[2], lp2 - a2);
            if (!th) continue;
            th *= K(lp3, e.lc1[3], lp3 - a3);
            if (!th) continue;
            dd thd{static_cast<double>(th)};
            int kcap = std::min(std::min(ia, m - ia), std::min(ja, m - ja));
            int lcap = std::min(std::min(ib, n - m - ib), std::min(jb, n - m - jb));
            for (int k = 0; k <= kcap; ++k) {
              dd ga = gamma(a0, a1, a2, a3, k);
              if (ga == dd(0.0)) continue;
              dd tg = thd * ga;
              for (int l = 0; l <= lcap; ++l) {
                if (m == n && k == 0 && l == 0) continue;
                dd gb = gamma(lp0 - a0, lp1 - a1, lp2 - a2, lp3 - a3, l);
                if (gb == dd(0.0)) continue;
                int b = k * (lmax + 1) + l;
                int rows2 = n - m - 2 * l + 1;
                int rpos = posmap[b][std::size_t(ia - k) * rows2 + (ib - l)];
                int cpos = posmap[b][std::size_t(ja - k) * rows2 + (jb - l)];
                assert(rpos >= 0 && cpos >= 0);
                if (rpos > cpos) std::swap(rpos, cpos);
                recs.push_back({detail::rec_key(b, e.var, rpos, cpos), tg * gb});
              }
            }
          }
    }
    std::vector<std::vector<std::pair<int, SparseSym>>> merged;
    detail::merge_records(recs, nblocks, merged);
    for (int k = 0; k <= kmax; ++k)
      for (int l = 0; l <= lmax; ++l) {
        int b = k * (lmax + 1) + l;
        if (fsets[b].empty() || merged[b].empty()) continue;
        BlockSpec spec;
        spec.kind = BlockKind::Empty;
        spec.m = m;
        spec.k = k;
        spec.l = l;
        spec.dim = (int)fsets[b].size();
        spec.index_set = fsets[b];
        spec.coeff = std::move(merged[b]);
        result.push_back(std::move(spec));
      }
  }
  return result;
}

// Trailing factorial-style counts: number of words realizing a column
// distribution, as dd.
inline dd multinomial_dd(int n, const int* counts, int len) {
  BigInt r = 1;
  int placed = 0;
  for (int i = 0; i < len; ++i) {
    r *= binomial(placed + counts[i], counts[i]);
    placed += counts[i];
  }
  (void)n;
  return to_dd(r);
}

// The invariant block: rows are the empty set, the singleton orbit and the
// pair orbits, in increasing distance order; entries are computed against
// orthonormalized orbit characteristic vectors.
inline BlockSpec invariant_block(int n, int d, bool even_mode, const VariableTable& vars) {
  struct Row {
    int size;   // 0, 1 or 2
    int m;      // pair distance for size 2
    BigInt orbit;
  };
  std::vector<Row> rows;
  rows.push_back({0, 0, BigInt(1)});
  BigInt single_orbit = BigInt(1) << (even_mode ? n - 1 : n);
  rows.push_back({1, 0, single_orbit});
  int step = even_mode ? 2 : 1;
  for (int m = d + (even_mode && (d & 1) ? 1 : 0); m <= n; m += step) {
    BigInt pair_orbit = (BigInt(1) << (even_mode ? n - 2 : n - 1)) * binomial(n, m);
    rows.push_back({2, m, pair_orbit});
  }
  int dim = (int)rows.size();
  BlockSpec spec;
  spec.kind = BlockKind::Invariant;
  spec.dim = dim;
  for (const auto& r : rows) spec.index_set.push_back({r.size == 2 ? r.m : -r.size, 0});

  int singleton_var = vars.require(OrbitLabel{1, {n}});
  auto pair_var = [&](int m) { return vars.require(OrbitLabel{2, {n - m, m}}); };

  // accumulate coefficients per (row, col) in exact form: map var -> dd sum
  std::vector<std::map<int, dd>> cell(std::size_t(dim) * dim);
  auto cell_at = [&](int r, int c) -> std::map<int, dd>& { return cell[std::size_t(c) * dim + r]; };

  // (empty, empty) = x(empty) = 1 handled as the affine constant below.
  // (empty, b) = sqrt(|orbit_b|) * x_b
  for (int c = 1; c < dim; ++c) {
    dd coeff = codebound::sqrt(to_dd(rows[c].orbit));
    int var = rows[c].size == 1 ? singleton_var : pair_var(rows[c].m);
    cell_at(0, c)[var] += coeff;
  }
  // (a, b) for a, b >= 1: sqrt(|orbit_a| / |orbit_b|) * sum over configurations
  for (int a = 1; a < dim; ++a)
    for (int b = a; b < dim; ++b) {
      dd ratio = codebound::sqrt(to_dd(rows[a].orbit) / to_dd(rows[b].orbit));
      auto& target = cell_at(a, b);
      auto add = [&](const std::optional<OrbitLabel>& lab, dd count) {
        if (!lab) return;
        target[vars.require(*lab)] += count * ratio;
      };
      if (rows[a].size == 1 && rows[b].size == 1) {
        // base {0}, added {v}
        for (int w = 0; w <= n; ++w) {
          int oc[2] = {n - w, w};
          auto lab = label_from_ordered_counts(2, oc, d, even_mode);
          add(lab, to_dd(binomial(n, w)));
        }
      } else if (rows[a].size == 1 && rows[b].size == 2) {
        // base {0}, added pair {v,w} at distance m_b; ordered configs halved
        int mb = rows[b].m;
        std::vector<int> ac(4);
        for (ac[0] = 0; ac[0] <= n; ++ac[0])
          for (ac[1] = 0; ac[1] <= n - ac[0]; ++ac[1])
            for (ac[2] = 0; ac[2] <= n - ac[0] - ac[1]; ++ac[2]) {
              ac[3] = n - ac[0] - ac[1] - ac[2];
              if (ac[1] + ac[2] != mb) continue;
              int oc[4] = {ac[0], ac[1], ac[2], ac[3]};
              auto lab = label_from_ordered_counts(3, oc, d, even_mode);
              add(lab, multinomial_dd(n, ac.data(), 4) * dd(0.5));
            }
      } else if (rows[a].size == 2 && rows[b].size == 1) {
        // base {0,u}, added {v}
        int ma = rows[a].m;
        for (int p = 0; p <= ma; ++p)
          for (int q = 0; q <= n - ma; ++q) {
            int oc[4] = {n - ma - q, q, ma - p, p};  // ordered (u, v)
            auto lab = label_from_ordered_counts(3, oc, d, even_mode);
            add(lab, to_dd(binomial(ma, p) * binomial(n - ma, q)));
          }
      } else {
        // base {0,u}, added pair {v,w} at distance m_b
        int ma = rows[a].m, mb = rows[b].m;
        std::vector<int> ac(4), bc(4);
        for (ac[0] = 0; ac[0] <= ma; ++ac[0])
          for (ac[1] = 0; ac[1] <= ma - ac[0]; ++ac[1])
            for (ac[2] = 0; ac[2] <= ma - ac[0] - ac[1]; ++ac[2]) {
              ac[3] = ma - ac[0] - ac[1] - ac[2];
              int mixa = ac[1] + ac[2];
              if (mixa > mb) continue;
              dd cnt_a = multinomial_dd(ma, ac.data(), 4);
              for (bc[0] = 0; bc[0] <= n - ma; ++bc[0])
                for (bc[1] = 0; bc[1] <= n - ma - bc[0]; ++bc[1])
                  for (bc[2] = 0; bc[2] <= n - ma - bc[0] - bc[1]; ++bc[2]) {
                    bc[3] = n - ma - bc[0] - bc[1] - bc[2];
                    if (mixa + bc[1] + bc[2] != mb) continue;
                    int oc[8];
                    for (int c = 0; c < 4; ++c) {
                      oc[4 + c] = ac[c];
                      oc[c] = bc[c];
                    }
                    auto lab = label_from_ordered_counts(4, oc, d, even_mode);
                    if (!lab) continue;
                    add(lab, cnt_a * multinomial_dd(n - ma, bc.data(), 4) * dd(0.5));
                  }
            }
      }
    }

  // diagonal of the orbit rows also carries the variable itself? no --
  // the (a,a) configuration sums above already include the union = S' case.
  spec.constant.entries.push_back({0, 0, dd(1.0)});
  std::map<int, SparseSym> by_var;
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r <= c; ++r)
      for (const auto& [var, v] : cell_at(r, c))
        if (!(v == dd(0.0))) by_var[var].entries.push_back({r, c, v});
  for (auto& [var, mat] : by_var) {
    std::sort(mat.entries.begin(), mat.entries.end(),
              [](const Triplet& x, const Triplet& y) { return x.r != y.r ? x.r < y.r : x.c < y.c; });
    spec.coeff.push_back({var, std::move(mat)});
  }
  return spec;
}

// Split a block into the ± eigenparts of an involution P on its index
// space.  P is given densely (column major); the assembly self-checks
// P^2 = I and, for signed permutations, builds the eigenbases directly.
inline std::pair<BlockSpec, BlockSpec> involution_split(const BlockSpec& block,
                                                        const std::vector<double>& P) {
  int dim = block.dim;
  if ((int)P.size() != dim * dim) throw std::invalid_argument("involution_split: bad P size");
  // verify P^2 = I
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      double s = 0;
      for (int t = 0; t < dim; ++t) s += P[std::size_t(t) * dim + i] * P[std::size_t(j) * dim + t];
      double want = (i == j) ? 1.0 : 0.0;
      if (std::fabs(s - want) > 1e-10)
        throw std::runtime_error("involution_split: P^2 != I (assembly bug)");
    }
  // eigenbasis columns, each a sparse combination of at most 2 indices
  struct Col {
    int a, b;   // b < 0 for singletons
    dd wa, wb;
  };
  std::vector<Col> plus, minus;
  bool signed_perm = true;
  std::vector<int> perm(dim, -1);
  std::vector<int> sgn(dim, 0);
  for (int j = 0; j < dim && signed_perm; ++j) {
    int nz = -1;
    for (int i = 0; i < dim; ++i) {
      double v = P[std::size_t(j) * dim + i];
      if (std::fabs(v) > 1e-12) {
        if (nz >= 0 || std::fabs(std::fabs(v) - 1.0) > 1e-12) {
          signed_perm = false;
          break;
        }
        nz = i;
        sgn[j] = v > 0 ? 1 : -1;
      }
    }
    perm[j] = nz;
  }
  dd half = dd(1.0) / codebound::sqrt(dd(2.0));
  if (signed_perm) {
    for (int j = 0; j < dim; ++j) {
      if (perm[j] == j) {
        (sgn[j] > 0 ? plus : minus).push_back({j, -1, dd(1.0), dd(0.0)});
      } else if (perm[j] > j) {
        dd s = dd(double(sgn[j]));
        plus.push_back({j, perm[j], half, s * half});
        minus.push_back({j, perm[j], half, -(s * half)});
      }
    }
  } else {
    // generic symmetric involution: eigen-decompose (P + P^T)/2
    std::vector<double> S(P);
    linalg::symmetrize(S, dim);
    std::vector<double> evals, V;
    linalg::eigh(S, dim, evals, V);
    // columns with eigenvalue ~ -1 first (ascending order)
    for (int c = 0; c < dim; ++c) {
      bool neg = evals[c] < 0;
      // dense column: fall back to dense projection below via full basis
      (void)neg;
    }
    // dense path: project with full eigenvector matrix
    auto project_dense = [&](bool positive) {
      std::vector<int> cols;
      for (int c = 0; c < dim; ++c)
        if ((evals[c] > 0) == positive) cols.push_back(c);
      BlockSpec part;
      part.kind = block.kind;
      part.m = block.m;
      part.k = block.k;
      part.l = block.l;
      part.sign = positive ? 1 : -1;
      part.dim = (int)cols.size();
      for (int c : cols)
        part.index_set.push_back(block.index_set.empty() ? std::make_pair(c, 0)
                                                         : block.index_set[c % block.index_set.size()]);
      auto project = [&](const SparseSym& M) {
        SparseSym out;
        int pd = (int)cols.size();
        std::vector<dd> dense(std::size_t(pd) * pd, dd(0.0));
        for (const auto& t : M.entries) {
          for (int cj = 0; cj < pd; ++cj)
            for (int ci = 0; ci <= cj; ++ci) {
              dd vi_r = dd(V[std::size_t(cols[ci]) * dim + t.r]);
              dd vi_c = dd(V[std::size_t(cols[ci]) * dim + t.c]);
              dd vj_r = dd(V[std::size_t(cols[cj]) * dim + t.r]);
              dd vj_c = dd(V[std::size_t(cols[cj]) * dim + t.c]);
              dd add = vi_r * t.v * vj_c;
              if (t.r != t.c) add += vi_c * t.v * vj_r;
              dense[std::size_t(cj) * pd + ci] += add;
            }
        }
        for (int cj = 0; cj < pd; ++cj)
          for (int ci = 0; ci <= cj; ++ci) {
            dd v = dense[std::size_t(cj) * pd + ci];
            if (!(abs(v) <= dd(1e-24))) out.entries.push_back({ci, cj, v});
          }
        return out;
      };
      part.constant = project(block.constant);
      for (const auto& [var, mat] : block.coeff) {
        SparseSym pm = project(mat);
        if (!pm.empty()) part.coeff.push_back({var, std::move(pm)});
      }
      return part;
    };
    return {project_dense(true), project_dense(false)};
  }

  auto build = [&](const std::vector<Col>& basis, int sign) {
    BlockSpec part;
    part.kind = block.kind;
    part.m = block.m;
    part.k = block.k;
    part.l = block.l;
    part.sign = sign;
    part.dim = (int)basis.size();
    for (const auto& col : basis)
      part.index_set.push_back(block.index_set.empty() ? std::make_pair(col.a, 0)
                                                       : block.index_set[col.a]);
    auto project = [&](const SparseSym& M) {
      // dense symmetric expand of M restricted to the basis
      int pd = (int)basis.size();
      std::vector<std::map<int, dd>> hm(pd);  // per column ci, row -> value  (small dims)
      // value of e_a^T M e_b for arbitrary a,b via entry lookup
      std::map<std::pair<int, int>, dd> lookup;
      for (const auto& t : M.entries) {
        lookup[{t.r, t.c}] = t.v;
        if (t.r != t.c) lookup[{t.c, t.r}] = t.v;
      }
      auto val = [&](int a, int b) {
        auto it = lookup.find({a, b});
        return it == lookup.end() ? dd(0.0) : it->second;
      };
      SparseSym out;
      for (int cj = 0; cj < pd; ++cj)
        for (int ci = 0; ci <= cj; ++ci) {
          const Col& x = basis[ci];
          const Col& y = basis[cj];
          dd v = x.wa * y.wa * val(x.a, y.a);
          if (y.b >= 0) v += x.wa * y.wb * val(x.a, y.b);
          if (x.b >= 0) v += x.wb * y.wa * val(x.b, y.a);
          if (x.b >= 0 && y.b >= 0) v += x.wb * y.wb * val(x.b, y.b);
          if (!(abs(v) <= dd(1e-24))) out.entries.push_back({ci, cj, v});
        }
      return out;
    };
    part.constant = project(block.constant);
    for (const auto& [var, mat] : block.coeff) {
      SparseSym pm = project(mat);
      if (!pm.empty()) part.coeff.push_back({var, std::move(pm)});
    }
    return part;
  };
  return {build(plus, +1), build(minus, -1)};
}

// PAIR(m,k,l,±) blocks for the base pair at distance m (even mode).
inline std::vector<BlockSpec> pair_blocks(int n, int d, int m, const VariableTable& vars) {
  if (m & 1) throw std::invalid_argument("pair_blocks: m must be even in even mode");
  if (m < d || m > n) throw std::invalid_argument("pair_blocks: need d <= m <= n");
  detail::GammaMemo gamma;
  auto in_Dv = [&](int s) { return s >= d && s <= n && (s & 1) == 0; };
  // enumerate alpha over the m-window and beta over the rest once,
  // keeping only configurations that index actual rows/columns
  struct Half {
    int c[4];
    int i, j, mix;
  };
  std::vector<Half> alphas, betas;
  {
    int ac[4];
    for (ac[0] = 0; ac[0] <= m; ++ac[0])
      for (ac[1] = 0; ac[1] <= m - ac[0]; ++ac[1])
        for (ac[2] = 0; ac[2] <= m - ac[0] - ac[1]; ++ac[2]) {
          ac[3] = m - ac[0] - ac[1] - ac[2];
          alphas.push_back({{ac[0], ac[1], ac[2], ac[3]}, ac[2] + ac[3], ac[1] + ac[3], ac[1] + ac[2]});
        }
    int bc[4];
    for (bc[0] = 0; bc[0] <= n - m; ++bc[0])
      for (bc[1] = 0; bc[1] <= n - m - bc[0]; ++bc[1])
        for (bc[2] = 0; bc[2] <= n - m - bc[0] - bc[1]; ++bc[2]) {
          bc[3] = n - m - bc[0] - bc[1] - bc[2];
          betas.push_back({{bc[0], bc[1], bc[2], bc[3]}, bc[2] + bc[3], bc[1] + bc[3], bc[1] + bc[2]});
        }
  }
  int kmax = m / 2, lmax = (n - m) / 2;
  int nblocks = (kmax + 1) * (lmax + 1);
  std::vector<std::vector<std::pair<int, int>>> fsets(nblocks);
  std::vector<std::vector<int>> posmap(nblocks);
  auto row_ok = [&](int i, int ip) { return in_Dv(i + ip) && (m - i + ip == 0 || in_Dv(m - i + ip)); };
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= lmax; ++l) {
      int b = k * (lmax + 1) + l;
      int rows2 = n - m - 2 * l + 1;
      posmap[b].assign(std::size_t(m - 2 * k + 1) * rows2, -1);
      for (int i = k; i <= m - k; ++i)
        for (int ip = l; ip <= n - m - l; ++ip)
          if (row_ok(i, ip)) {
            posmap[b][std::size_t(i - k) * rows2 + (ip - l)] = (int)fsets[b].size();
            fsets[b].push_back({i, ip});
          }
    }
  std::vector<detail::Rec> recs;
  for (const auto& A : alphas)
    for (const auto& B : betas) {
      if (!row_ok(A.i, B.i) || !row_ok(A.j, B.j)) continue;
      int dvw = A.mix + B.mix;
      if (dvw > 0 && (dvw < d || (dvw & 1))) continue;  // union infeasible, entry 0
      int oc[8];
      for (int c = 0; c < 4; ++c) {
        oc[4 + c] = A.c[c];
        oc[c] = B.c[c];
      }
      auto lab = label_from_ordered_counts(4, oc, d, true);
      assert(lab);
      int var = vars.require(*lab);
      int kcap = std::min(std::min(A.i, m - A.i), std::min(A.j, m - A.j));
      int lcap = std::min(std::min(B.i, n - m - B.i), std::min(B.j, n - m - B.j));
      for (int k = 0; k <= kcap; ++k) {
        dd ga = gamma(A.c[0], A.c[1], A.c[2], A.c[3], k);
        if (ga == dd(0.0)) continue;
        for (int l = 0; l <= lcap; ++l) {
          dd gb = gamma(B.c[0], B.c[1], B.c[2], B.c[3], l);
          if (gb == dd(0.0)) continue;
          int b = k * (lmax + 1) + l;
          int rows2 = n - m - 2 * l + 1;
          int rpos = posmap[b][std::size_t(A.i - k) * rows2 + (B.i - l)];
          int cpos = posmap[b][std::size_t(A.j - k) * rows2 + (B.j - l)];
          assert(rpos >= 0 && cpos >= 0);
          if (rpos > cpos) std::swap(rpos, cpos);
          recs.push_back({detail::rec_key(b, var, rpos, cpos), ga * gb});
        }
      }
    }
  std::vector<std::vector<std::pair<int, SparseSym>>> merged;
  detail::merge_records(recs, nblocks, merged);
  std::vector<BlockSpec> result;
  for (int k = 0; k <= kmax; ++k)
    for (int l = 0; l <= lmax; ++l) {
      int b = k * (lmax + 1) + l;
      if (fsets[b].empty() || merged[b].empty()) continue;
      BlockSpec spec;
      spec.kind = BlockKind::Pair;
      spec.m = m;
      spec.k = k;
      spec.l = l;
      spec.dim = (int)fsets[b].size();
      spec.index_set = fsets[b];
      spec.coeff = std::move(merged[b]);
      // translation involution (i, i') -> (m-i, i'), except the row for
      // v = u itself (index (m, 0)), which the translation fixes: the
      // zero word is not a row, and the u-row is already symmetric
      // across the paired columns
      std::vector<double> P(std::size_t(spec.dim) * spec.dim, 0.0);
      int rows2 = n - m - 2 * l + 1;
      for (int r = 0; r < spec.dim; ++r) {
        auto [i, ip] = spec.index_set[r];
        int img = (i == m && ip == 0)
                      ? r
                      : posmap[b][std::size_t(m - i - k) * rows2 + (ip - l)];
        if (img < 0) throw std::logic_error("pair_blocks: index set not closed under involution");
        P[std::size_t(r) * spec.dim + img] = 1.0;
      }
      auto [pplus, pminus] = involution_split(spec, P);
      if (pplus.dim > 0 && !pplus.coeff.empty()) result.push_back(std::move(pplus));
      if (pminus.dim > 0 && !pminus.coeff.empty()) result.push_back(std::move(pminus));
    }
  return result;
}

}  // namespace codebound
