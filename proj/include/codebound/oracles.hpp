#pragma once

// Independent brute-force references: the explicit unreduced formulation
// over word-indexed variables, exhaustive maximum-code search, word-level
// tensor constructions of the algebra maps, and the even-weight
// projection.  Nothing here uses the symmetry reduction; that is the
// point.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "codebound/model.hpp"

namespace codebound {

// ---------------------------------------------------------------------------
// Explicit formulation over word-indexed variables
// ---------------------------------------------------------------------------

struct FullFormulation {
  SdpProblem problem;                        // Generic blocks, anonymous vars
  std::vector<std::vector<uint32_t>> sets;   // variable id -> subset (sorted words)
  std::unordered_map<uint64_t, int> set_index;
  std::vector<uint32_t> words;               // ground set (all words, or E)
  int n = 0, d = 0;
  bool even_restricted = false;

  static uint64_t key_of(const std::vector<uint32_t>& s) {
    uint64_t k = uint64_t(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) k |= uint64_t(s[i] & 0xff) << (8 * i + 3);
    return k;
  }
  int find(const std::vector<uint32_t>& s) const {
    auto it = set_index.find(key_of(s));
    return it == set_index.end() ? -1 : it->second;
  }
};

inline FullFormulation build_full_formulation(int n, int d, bool even_restricted) {
  if (n > 7) throw std::invalid_argument("build_full_formulation: n > 7 is out of oracle range");
  FullFormulation F;
  F.n = n;
  F.d = d;
  F.even_restricted = even_restricted;
  for (uint32_t w = 0; w < (1u << n); ++w)
    if (!even_restricted || (std::popcount(w) & 1) == 0) F.words.push_back(w);
  auto far = [&](uint32_t a, uint32_t b) { return std::popcount(a ^ b) >= d; };
  auto add_set = [&](std::vector<uint32_t> s) {
    F.set_index.emplace(FullFormulation::key_of(s), (int)F.sets.size());
    F.sets.push_back(std::move(s));
  };
  for (uint32_t v : F.words) add_set({v});
  int nsingles = (int)F.sets.size();
  for (std::size_t a = 0; a < F.words.size(); ++a)
    for (std::size_t b = a + 1; b < F.words.size(); ++b)
      if (far(F.words[a], F.words[b])) add_set({F.words[a], F.words[b]});
  int npairs = (int)F.sets.size() - nsingles;
  for (int pi = nsingles; pi < nsingles + npairs; ++pi) {
    auto pair = F.sets[pi];
    for (uint32_t z : F.words) {
      if (z <= pair[1]) continue;
      if (far(pair[0], z) && far(pair[1], z)) add_set({pair[0], pair[1], z});
    }
  }
  int ntriples = (int)F.sets.size() - nsingles - npairs;
  for (int ti = nsingles + npairs; ti < nsingles + npairs + ntriples; ++ti) {
    auto tri = F.sets[ti];
    for (uint32_t z : F.words) {
      if (z <= tri[2]) continue;
      if (far(tri[0], z) && far(tri[1], z) && far(tri[2], z)) add_set({tri[0], tri[1], tri[2], z});
    }
  }
  SdpProblem& p = F.problem;
  p.n = n;
  p.d = d;
  p.kind = BoundKind::A4;
  p.even_mode = even_restricted;
  p.objective.assign(F.sets.size(), 0.0);
  for (int j = 0; j < nsingles; ++j) p.objective[j] = 1.0;
  for (const auto& s : F.sets) {
    std::string name = "{";
    for (std::size_t i = 0; i < s.size(); ++i) name += (i ? "," : "") + std::to_string(s[i]);
    p.var_names.push_back(name + "}");
  }
  p.var_upper_bound = 1.0;

  auto union_var = [&](const std::vector<uint32_t>& A, const std::vector<uint32_t>& B) -> int {
    std::vector<uint32_t> u(A);
    u.insert(u.end(), B.begin(), B.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    if (u.size() > 4) return -1;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = i + 1; j < u.size(); ++j)
        if (!far(u[i], u[j])) return -1;
    int var = F.find(u);
    if (var < 0) throw std::logic_error("full formulation: missing union variable");
    return var;
  };

  // rows of a stabilizer-style matrix: a list of variable ids whose sets
  // index the rows, plus an optional leading empty-set row
  auto build_block = [&](const std::vector<int>& row_sets, bool with_empty_row) {
    BlockSpec b;
    b.kind = BlockKind::Generic;
    int off = with_empty_row ? 1 : 0;
    b.dim = (int)row_sets.size() + off;
    for (int i = 0; i < b.dim; ++i) b.index_set.push_back({i, 0});
    std::map<int, SparseSym> by_var;
    if (with_empty_row) {
      b.constant.entries.push_back({0, 0, dd(1.0)});
      for (int i = 0; i < (int)row_sets.size(); ++i) by_var[row_sets[i]].entries.push_back({0, i + 1, dd(1.0)});
    }
    for (int i = 0; i < (int)row_sets.size(); ++i)
      for (int j = i; j < (int)row_sets.size(); ++j) {
        int var = union_var(F.sets[row_sets[i]], F.sets[row_sets[j]]);
        if (var >= 0) by_var[var].entries.push_back({i + off, j + off, dd(1.0)});
      }
    for (auto& [var, mat] : by_var) b.coeff.push_back({var, std::move(mat)});
    return b;
  };

  // M_empty over {empty} + singletons + pairs
  std::vector<int> n2;
  for (int j = 0; j < nsingles + npairs; ++j) n2.push_back(j);
  p.blocks.push_back(build_block(n2, true));
  // M_{v}: {v} plus pairs containing v
  for (int v = 0; v < nsingles; ++v) {
    std::vector<int> rows = {v};
    for (int pi = nsingles; pi < nsingles + npairs; ++pi)
      if (F.sets[pi][0] == F.words[v] || F.sets[pi][1] == F.words[v]) rows.push_back(pi);
    p.blocks.push_back(build_block(rows, false));
  }
  // M_{v,w}: the pair plus triples containing it
  for (int pi = nsingles; pi < nsingles + npairs; ++pi) {
    std::vector<int> rows = {pi};
    for (int ti = nsingles + npairs; ti < nsingles + npairs + ntriples; ++ti) {
      const auto& t = F.sets[ti];
      int hit = 0;
      for (uint32_t w : t)
        if (w == F.sets[pi][0] || w == F.sets[pi][1]) ++hit;
      if (hit == 2) rows.push_back(ti);
    }
    p.blocks.push_back(build_block(rows, false));
  }
  return F;
}

// ---------------------------------------------------------------------------
// Exhaustive maximum code size via branch-and-bound clique search
// ---------------------------------------------------------------------------

namespace cliquedetail {

struct Bitset {
  std::vector<uint64_t> w;
  explicit Bitset(int n = 0) : w((n + 63) / 64, 0) {}
  void set(int i) { w[i >> 6] |= 1ull << (i & 63); }
  void reset(int i) { w[i >> 6] &= ~(1ull << (i & 63)); }
  bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  bool any() const {
    for (uint64_t x : w)
      if (x) return true;
    return false;
  }
  int count() const {
    int c = 0;
    for (uint64_t x : w) c += std::popcount(x);
    return c;
  }
  void and_with(const Bitset& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] &= o.w[i];
  }
  int first() const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i]) return (int)(i * 64 + std::countr_zero(w[i]));
    return -1;
  }
};

class CliqueSolver {
 public:
  CliqueSolver(const std::vector<Bitset>& adj, uint64_t budget)
      : adj_(adj), nv_((int)adj.size()), budget_(budget) {}

  int best = 0;
  uint64_t nodes = 0;

  void search(Bitset P, int rsize) { expand(P, rsize); }

 private:
  const std::vector<Bitset>& adj_;
  int nv_;
  uint64_t budget_;
  std::vector<int> order_, color_;

  void expand(Bitset& P, int rsize) {
    if (++nodes > budget_) throw std::runtime_error("max_code_exact: search budget exceeded");
    int cnt = P.count();
    if (cnt == 0) {
      if (rsize > best) best = rsize;
      return;
    }
    if (rsize + cnt <= best) return;
    // greedy sequential coloring; vertices listed in color order
    std::vector<int> order, colors;
    order.reserve(cnt);
    colors.reserve(cnt);
    Bitset rest = P;
    int col = 0;
    while (rest.any()) {
      ++col;
      Bitset cand = rest;
      while (true) {
        int v = cand.first();
        if (v < 0) break;
        order.push_back(v);
        colors.push_back(col);
        rest.reset(v);
        cand.reset(v);
        for (std::size_t i = 0; i < cand.w.size(); ++i) cand.w[i] &= ~adj_[v].w[i];
      }
    }
    // processing in reverse color order keeps P = {unprocessed} so the
    // branch candidate set is simply P ∩ adj[v]
    for (int idx = (int)order.size() - 1; idx >= 0; --idx) {
      int v = order[idx];
      if (rsize + colors[idx] <= best) return;
      Bitset next = P;
      next.and_with(adj_[v]);
      expand(next, rsize + 1);
      P.reset(v);
    }
  }
};

}  // namespace cliquedetail

// Exact A(n,d) by exhaustive search on the even-weight graph, with the
// first two codewords fixed up to symmetry.  Throws if the node budget is
// exhausted (spec'd timeout guard).
inline int max_code_exact(int n, int d, uint64_t node_budget = 200000000ull) {
  if (n < 1) throw std::invalid_argument("max_code_exact: n must be positive");
  if (d <= 1) return 1 << n;
  if (d > n) return 1;
  if (d == n) return 2;
  if (d & 1) return max_code_exact(n + 1, d + 1, node_budget);
  if (d == 2) return 1 << (n - 1);
  if (n > 13) throw std::invalid_argument("max_code_exact: n out of supported range");
  // vertices: even-weight words
  std::vector<uint32_t> verts;
  std::vector<int> id(1u << n, -1);
  for (uint32_t w = 0; w < (1u << n); ++w)
    if ((std::popcount(w) & 1) == 0) {
      id[w] = (int)verts.size();
      verts.push_back(w);
    }
  int nv = (int)verts.size();
  std::vector<cliquedetail::Bitset> adj(nv, cliquedetail::Bitset(nv));
  for (int a = 0; a < nv; ++a)
    for (int b = a + 1; b < nv; ++b)
      if (std::popcount(verts[a] ^ verts[b]) >= d) {
        adj[a].set(b);
        adj[b].set(a);
      }
  // greedy incumbents from several deterministic seeds
  int best = 1;
  {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<int> perm(nv);
      for (int i = 0; i < nv; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<int> clique;
      cliquedetail::Bitset cand(nv);
      for (int i = 0; i < nv; ++i) cand.set(i);
      for (int v : perm) {
        if (!cand.test(v)) continue;
        clique.push_back(v);
        cand.and_with(adj[v]);
      }
      best = std::max(best, (int)clique.size());
    }
  }
  // Plotkin range: when n < 2d the bound 2*floor(d/(2d-n)) is tight enough
  // to close the search immediately once a matching incumbent exists
  if (n < 2 * d) {
    int plotkin = 2 * (d / (2 * d - n));
    if (best >= plotkin) return best;
  }
  cliquedetail::CliqueSolver solver(adj, node_budget);
  solver.best = best;
  // anchor the first two words: 0 and 1^m 0^(n-m)
  for (int m = d; m <= n; m += 2) {
    uint32_t u = (m == n) ? ((1u << n) - 1) : ((1u << m) - 1);
    if (std::popcount(u) & 1) continue;
    cliquedetail::Bitset P(nv);
    int c0 = id[0], c1 = id[u];
    for (int v = 0; v < nv; ++v)
      if (adj[c0].test(v) && adj[c1].test(v)) P.set(v);
    int base = 2;
    // grow from the anchored pair
    if (P.count() + base > solver.best) {
      // local search with rsize offset: reuse expand via rsize = base
      solver.search(P, base);
    }
  }
  return std::max(best, solver.best);
}

// ---------------------------------------------------------------------------
// Word-level tensor oracle for the algebra maps (n <= 3)
// ---------------------------------------------------------------------------

class WordAlgebra {
 public:
  using IMat = std::vector<long long>;  // row-major dense

  explicit WordAlgebra(int n) : n_(n), dim_(1) {
    if (n < 1 || n > 3) throw std::invalid_argument("WordAlgebra: n must be 1..3");
    for (int i = 0; i < n; ++i) dim_ *= 4;
    // B_t for t in {0,1}^3: E_{c,d} + E_{cbar,dbar}
    for (int t = 0; t < 8; ++t) {
      std::array<int, 16> B{};
      int t1 = (t >> 2) & 1, t2 = (t >> 1) & 1, t3 = t & 1;
      for (int c2 = 0; c2 < 2; ++c2) {
        int c1 = t1 ^ c2;
        int d2 = t3 ^ c2;
        int d1 = t2 ^ d2;
        B[std::size_t(2 * c1 + c2) * 4 + (2 * d1 + d2)] = 1;
      }
      Bt_[t] = B;
    }
  }

  int n() const { return n_; }
  int dim() const { return dim_; }

  // B_lambda as a dense 4^n x 4^n integer matrix
  IMat b_lambda(const Distribution& lambda) const {
    lambda.validate();
    if (lambda.alphabet_size != 8 || lambda.total != n_)
      throw std::invalid_argument("b_lambda: lambda must lie over {0,1}^3 with total n");
    IMat out(std::size_t(dim_) * dim_, 0);
    std::vector<int> rho(n_);
    iterate_tuples(0, lambda.counts, rho, out);
    return out;
  }

  // the per-entry basis index: which lambda-support an entry belongs to
  int entry_type(int row, int col, int coord) const {
    int c = (row / pow4(coord)) % 4;
    int dcol = (col / pow4(coord)) % 4;
    int c1 = c >> 1, c2 = c & 1, d1 = dcol >> 1, d2 = dcol & 1;
    return 4 * (c1 ^ c2) + 2 * (d1 ^ d2) + (c2 ^ d2);
  }

  // phi_m(A) * 2^n as an exact integer matrix (2^n x 2^n)
  IMat phi_scaled(const IMat& A, int m) const {
    int dn = 1 << n_;
    // W = U~_0^{(x)m} (x) U~_1^{(x)(n-m)}: 4^n x 2^n entries in {0,±1}
    std::vector<long long> W(std::size_t(dim_) * dn, 0);
    for (int r = 0; r < dim_; ++r)
      for (int a = 0; a < dn; ++a) {
        long long v = 1;
        for (int i = 0; i < n_ && v; ++i) {
          int c = (r / pow4(i)) % 4;
          int ai = (a >> i) & 1;
          int c1 = c >> 1, c2 = c & 1;
          if (((c1 ^ c2) != ai)) v = 0;
          else if (i >= m && (c2 & 1)) v = -v;  // U_1 carries the sign (-1)^{c2}
        }
        W[std::size_t(r) * dn + a] = v;
      }
    // out = W^T A W
    IMat AW(std::size_t(dim_) * dn, 0);
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) {
        long long av = A[std::size_t(r) * dim_ + c];
        if (!av) continue;
        for (int a = 0; a < dn; ++a) AW[std::size_t(r) * dn + a] += av * W[std::size_t(c) * dn + a];
      }
    IMat out(std::size_t(dn) * dn, 0);
    for (int a = 0; a < dn; ++a)
      for (int r = 0; r < dim_; ++r) {
        long long wv = W[std::size_t(r) * dn + a];
        if (!wv) continue;
        for (int b = 0; b < dn; ++b) out[std::size_t(a) * dn + b] += wv * AW[std::size_t(r) * dn + b];
      }
    return out;
  }

  // coefficient of M_alpha (x) M_beta inside phi_m(A), read off a
  // representative entry; asserts divisibility by 2^n
  long long phi_coefficient(const IMat& phi_scaled_m, int m, const Distribution& alpha,
                            const Distribution& beta) const {
    int a = 0, b = 0;
    int pos = 0;
    auto place = [&](const Distribution& dist, int offset) {
      for (int c = 0; c < 4; ++c)
        for (int r = 0; r < dist.counts[c]; ++r) {
          int i = offset + pos;
          if (c >> 1) a |= 1 << i;
          if (c & 1) b |= 1 << i;
          ++pos;
        }
    };
    pos = 0;
    place(alpha, 0);
    int consumed = pos;
    pos = 0;
    place(beta, consumed);
    int dn = 1 << n_;
    long long raw = phi_scaled_m[std::size_t(a) * dn + b];
    long long den = 1ll << n_;
    if (raw % den) throw std::logic_error("phi_coefficient: entry not divisible by 2^n");
    return raw / den;
  }

  // permutation matrix swapping the two words of the ordered pair
  IMat q_tau() const {
    IMat out(std::size_t(dim_) * dim_, 0);
    for (int r = 0; r < dim_; ++r) {
      int img = 0;
      for (int i = 0; i < n_; ++i) {
        int c = (r / pow4(i)) % 4;
        int sw = ((c & 1) << 1) | (c >> 1);
        img += sw * pow4(i);
      }
      out[std::size_t(img) * dim_ + r] = 1;
    }
    return out;
  }

  static Distribution lambda_tilde(const Distribution& lambda) {
    std::vector<int> c(8, 0);
    for (int t = 0; t < 8; ++t) {
      int t1 = (t >> 2) & 1, t2 = (t >> 1) & 1, t3 = t & 1;
      c[4 * t1 + 2 * t2 + (t3 ^ t1)] += lambda.counts[t];
    }
    return Distribution(8, c);
  }

  static Distribution lambda_hat(const Distribution& lambda) {
    std::vector<int> c(8, 0);
    for (int t = 0; t < 8; ++t) {
      int t1 = (t >> 2) & 1, t2 = (t >> 1) & 1, t3 = t & 1;
      c[4 * t1 + 2 * t2 + (t3 ^ t2)] += lambda.counts[t];
    }
    return Distribution(8, c);
  }

  static IMat multiply(const IMat& A, const IMat& B, int dim) {
    IMat out(std::size_t(dim) * dim, 0);
    for (int r = 0; r < dim; ++r)
      for (int k = 0; k < dim; ++k) {
        long long av = A[std::size_t(r) * dim + k];
        if (!av) continue;
        for (int c = 0; c < dim; ++c) out[std::size_t(r) * dim + c] += av * B[std::size_t(k) * dim + c];
      }
    return out;
  }

  // expand a matrix lying in the algebra into B-basis coefficients,
  // verifying constancy on each basis support
  std::map<std::vector<int>, long long> to_basis(const IMat& A) const {
    std::map<std::vector<int>, long long> coeffs;
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c) {
        std::vector<int> lam(8, 0);
        for (int i = 0; i < n_; ++i) ++lam[entry_type(r, c, i)];
        long long v = A[std::size_t(r) * dim_ + c];
        auto it = coeffs.find(lam);
        if (it == coeffs.end())
          coeffs.emplace(std::move(lam), v);
        else if (it->second != v)
          throw std::logic_error("to_basis: matrix is not constant on a basis support");
      }
    return coeffs;
  }

 private:
  int n_, dim_;
  std::array<std::array<int, 16>, 8> Bt_;

  int pow4(int i) const { return 1 << (2 * i); }

  void iterate_tuples(int coord, std::vector<int> remaining, std::vector<int>& rho, IMat& out) const {
    if (coord == n_) {
      // add tensor product of B_{rho(i)}
      for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) {
          long long v = 1;
          for (int i = 0; i < n_ && v; ++i) {
            int ci = (r / pow4(i)) % 4, di = (c / pow4(i)) % 4;
            v *= Bt_[rho[i]][std::size_t(ci) * 4 + di];
          }
          out[std::size_t(r) * dim_ + c] += v;
        }
      return;
    }
    for (int t = 0; t < 8; ++t) {
      if (!remaining[t]) continue;
      --remaining[t];
      rho[coord] = t;
      iterate_tuples(coord + 1, remaining, rho, out);
      ++remaining[t];
    }
  }
};

// ---------------------------------------------------------------------------
// Even-weight projection oracle
// ---------------------------------------------------------------------------

struct EvenProjectionReport {
  int points_checked = 0;
  double max_objective_drift = 0.0;
  double worst_min_eig = 0.0;  // most negative eigenvalue seen after projection
  bool fixed_point_ok = true;
  bool pass = false;
};

// random maximal codes of minimum distance d, deterministic seeds
inline CodeSet random_code(int n, int d, uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<uint32_t> order(1u << n);
  for (uint32_t w = 0; w < (1u << n); ++w) order[w] = w;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<uint32_t> code;
  for (uint32_t w : order) {
    bool ok = true;
    for (uint32_t c : code)
      if (std::popcount(c ^ w) < d) {
        ok = false;
        break;
      }
    if (ok) code.push_back(w);
  }
  return CodeSet(n, std::move(code));
}

inline EvenProjectionReport even_projection_oracle(int n, int d, int num_points = 100) {
  if (n > 6) throw std::invalid_argument("even_projection_oracle: n > 6 out of range");
  if (d & 1) throw std::invalid_argument("even_projection_oracle: d must be even");
  FullFormulation F = build_full_formulation(n, d, false);
  int nv = (int)F.sets.size();
  uint32_t en = 1u << (n - 1);
  auto eps_word = [&](uint32_t w) { return (std::popcount(w) & 1) ? (w ^ en) : w; };
  auto project = [&](const std::vector<double>& x) {
    std::vector<double> out(nv, 0.0);
    for (int j = 0; j < nv; ++j) {
      if (x[j] == 0.0) continue;
      std::vector<uint32_t> img;
      for (uint32_t w : F.sets[j]) img.push_back(eps_word(w));
      std::sort(img.begin(), img.end());
      img.erase(std::unique(img.begin(), img.end()), img.end());
      int tgt = F.find(img);
      if (tgt < 0) throw std::logic_error("even projection: image set missing");
      out[tgt] += x[j];
    }
    return out;
  };
  auto point_of_code = [&](const CodeSet& C) {
    std::vector<double> x(nv, 0.0);
    int sz = C.size();
    std::function<void(int, std::vector<uint32_t>&)> rec = [&](int from, std::vector<uint32_t>& cur) {
      if (!cur.empty() && cur.size() <= 4) {
        int var = F.find(cur);
        if (var < 0) throw std::logic_error("even projection: code subset missing");
        x[var] = 1.0;
      }
      if (cur.size() == 4) return;
      for (int i = from; i < sz; ++i) {
        cur.push_back(C.words[i]);
        rec(i + 1, cur);
        cur.pop_back();
      }
    };
    std::vector<uint32_t> cur;
    rec(0, cur);
    return x;
  };
  auto objective = [&](const std::vector<double>& x) {
    double s = 0;
    for (int j = 0; j < nv; ++j) s += F.problem.objective[j] * x[j];
    return s;
  };
  auto min_eig_all = [&](const std::vector<double>& x) {
    double worst = 0.0;
    for (const auto& b : F.problem.blocks) {
      double me = block_min_eig(b, x);
      double norm = std::max(1.0, block_max_norm(b, x));
      worst = std::min(worst, me / norm);
    }
    return worst;
  };
  EvenProjectionReport rep;
  std::mt19937 rng(777);
  for (int t = 0; t < num_points; ++t) {
    // convex combination of 1..3 code points
    std::vector<double> x(nv, 0.0);
    int k = 1 + (int)(rng() % 3);
    std::vector<double> wts(k);
    double tot = 0;
    for (auto& w : wts) {
      w = 0.05 + (rng() % 1000) / 1000.0;
      tot += w;
    }
    for (int i = 0; i < k; ++i) {
      auto xp = point_of_code(random_code(n, d, rng()));
      for (int j = 0; j < nv; ++j) x[j] += wts[i] / tot * xp[j];
    }
    auto px = project(x);
    rep.max_objective_drift =
        std::max(rep.max_objective_drift, std::fabs(objective(px) - objective(x)));
    rep.worst_min_eig = std::min(rep.worst_min_eig, min_eig_all(px));
    ++rep.points_checked;
  }
  // fixed point on an even-weight code
  {
    CodeSet C = random_code(n, d, 4242);
    std::vector<uint32_t> shifted;
    for (uint32_t w : C.words) shifted.push_back(eps_word(w));
    CodeSet E(n, std::move(shifted));
    auto x = point_of_code(E);
    auto px = project(x);
    rep.fixed_point_ok = px == x;
  }
  rep.pass = rep.fixed_point_ok && rep.max_objective_drift < 1e-9 && rep.worst_min_eig > -1e-8;
  return rep;
}

}  // namespace codebound
