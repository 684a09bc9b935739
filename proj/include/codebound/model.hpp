#pragma once

// Problem assembly: the quadruple-distance bound A4(n,d) from orbit
// variables and PSD blocks, and the classical Krawtchouk LP giving the
// pairwise (Delsarte) bound A2(n,d).  Both come out in the same
// SdpProblem shape: maximize obj^T x subject to per-block
// C_b + sum_j x_j F_bj  PSD  and x >= 0.

#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "codebound/blocks.hpp"
#include "codebound/orbits.hpp"

namespace codebound {

enum class BoundKind { A2, A4 };
enum class ConstraintSet { Full, EmptyPlusQuad };

struct SdpProblem {
  int n = 0, d = 0;
  BoundKind kind = BoundKind::A4;
  ConstraintSet constraint_set = ConstraintSet::Full;
  bool even_mode = true;

  VariableTable vars;                  // orbit variables; empty for imported problems
  std::vector<std::string> var_names;  // stable text encodings
  std::vector<double> objective;       // maximize objective^T x (+ offset)
  double objective_offset = 0.0;
  std::vector<BlockSpec> blocks;
  bool nonneg_all = true;
  // valid upper bound on every variable (0 = unknown); used by the
  // certification step to absorb dual residuals
  double var_upper_bound = 0.0;

  int num_vars() const { return (int)objective.size(); }
};

// A(n,d) = A(n+1,d+1) for odd d
inline std::pair<int, int> odd_reduction(int n, int d) {
  if (!(d & 1)) throw std::invalid_argument("odd_reduction: d must be odd");
  return {n + 1, d + 1};
}

inline SdpProblem build_a4_problem(int n, int d, ConstraintSet cs = ConstraintSet::Full) {
  if (d & 1) throw std::invalid_argument("build_a4_problem: d must be even (apply odd_reduction first)");
  if (d < 2 || d > n + 1) throw std::invalid_argument("build_a4_problem: need 2 <= d and d <= n+1");
  SdpProblem p;
  p.n = n;
  p.d = d;
  p.kind = BoundKind::A4;
  p.constraint_set = cs;
  p.even_mode = true;
  p.vars = make_variable_table(n, d, 4, true);
  p.var_names.reserve(p.vars.size());
  for (const auto& lab : p.vars.labels) p.var_names.push_back(lab.to_string());
  p.objective.assign(p.vars.size(), 0.0);
  p.objective[p.vars.require(OrbitLabel{1, {n}})] = std::ldexp(1.0, n - 1);  // |E| singletons
  p.blocks = empty_set_blocks(n, d, true, p.vars);
  p.blocks.push_back(invariant_block(n, d, true, p.vars));
  if (cs == ConstraintSet::Full) {
    for (int m = d; m <= n; m += 2) {
      auto pblocks = pair_blocks(n, d, m, p.vars);
      for (auto& b : pblocks) p.blocks.push_back(std::move(b));
    }
  }
  p.var_upper_bound = 1.0;  // diagonal 2x2 minors of the empty-set matrix force x <= 1
  return p;
}

// Classical LP form of the pairwise bound: variables a_i (i = d..n, a_0 = 1
// fixed), maximize 1 + sum a_i subject to a_i >= 0 and
// sum_i a_i K_k(i) >= -C(n,k) for k = 0..n, each a 1x1 block.
inline SdpProblem build_delsarte_lp(int n, int d) {
  if (d < 2 || d > n) throw std::invalid_argument("build_delsarte_lp: need 2 <= d <= n");
  SdpProblem p;
  p.n = n;
  p.d = d;
  p.kind = BoundKind::A2;
  p.even_mode = false;
  int nv = n - d + 1;
  p.objective.assign(nv, 1.0);
  p.objective_offset = 1.0;
  for (int i = d; i <= n; ++i) {
    p.vars.index.emplace(OrbitLabel{2, {n - i, i}}.key(), (int)p.vars.labels.size());
    p.vars.labels.push_back(OrbitLabel{2, {n - i, i}});
    p.var_names.push_back("a" + std::to_string(i));
  }
  for (int k = 0; k <= n; ++k) {
    BlockSpec b;
    b.kind = BlockKind::Generic;
    b.dim = 1;
    b.index_set = {{k, 0}};
    b.constant.entries.push_back({0, 0, to_dd(binomial(n, k))});
    for (int i = d; i <= n; ++i) {
      BigInt kv = krawtchouk(n, k, i);
      if (kv == 0) continue;
      SparseSym mat;
      mat.entries.push_back({0, 0, to_dd(kv)});
      b.coeff.push_back({i - d, std::move(mat)});
    }
    p.blocks.push_back(std::move(b));
  }
  p.var_upper_bound = 0.0;
  return p;
}

// G-averaged feasible point of a concrete code: x_O = (# subsets of C with
// label O) / |O|.  Blocks evaluate PSD at this point and the objective is
// exactly |C|.  In even mode an odd-weight code is first shifted into the
// even-weight class coordinatewise (w -> w + e_n on odd words).
inline std::vector<BigRational> feasible_point_from_code(const SdpProblem& p, CodeSet C) {
  if (p.even_mode) {
    std::vector<uint32_t> shifted;
    for (uint32_t w : C.words)
      shifted.push_back((std::popcount(w) & 1) ? (w ^ (1u << (p.n - 1))) : w);
    C = CodeSet(p.n, std::move(shifted));
  }
  if (!C.distances_at_least(p.d))
    throw std::invalid_argument("feasible_point_from_code: code violates the minimum distance");
  std::vector<BigRational> x(p.num_vars(), BigRational(0));
  int sz = C.size();
  std::vector<int> idx;
  auto account = [&](const std::vector<uint32_t>& subset) {
    CodeSet S(p.n, subset);
    OrbitLabel lab = canonical_label(S);
    int var = p.vars.require(lab);
    x[var] += BigRational(1);
  };
  for (int a = 0; a < sz; ++a) {
    account({C.words[a]});
    for (int b = a + 1; b < sz; ++b) {
      account({C.words[a], C.words[b]});
      for (int c = b + 1; c < sz; ++c) {
        account({C.words[a], C.words[b], C.words[c]});
        for (int e = c + 1; e < sz; ++e) account({C.words[a], C.words[b], C.words[c], C.words[e]});
      }
    }
  }
  for (int j = 0; j < p.num_vars(); ++j) {
    if (x[j] == 0) continue;
    BigInt orb = orbit_size_exact(representative_code(p.vars.labels[j], p.n), p.even_mode);
    x[j] /= BigRational(orb);
  }
  return x;
}

inline std::vector<double> to_doubles(const std::vector<BigRational>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

inline BigRational objective_at(const SdpProblem& p, const std::vector<BigRational>& x) {
  BigRational total(0);
  for (int j = 0; j < p.num_vars(); ++j)
    if (p.objective[j] != 0.0) total += BigRational(BigInt(p.objective[j])) * x[j];
  total += BigRational(BigInt(p.objective_offset));
  return total;
}

// smallest eigenvalue of a block evaluated at x (double precision)
inline double block_min_eig(const BlockSpec& b, const std::vector<double>& x) {
  std::vector<double> A = b.evaluate(x);
  std::vector<double> evals, V;
  linalg::eigh(A, b.dim, evals, V);
  return evals.empty() ? 0.0 : evals.front();
}

inline double block_max_norm(const BlockSpec& b, const std::vector<double>& x) {
  std::vector<double> A = b.evaluate(x);
  return linalg::max_abs(A);
}

struct DoublingReport {
  int n = 0, d = 0;
  double value_n = 0.0, value_n_plus_1 = 0.0;
  double tol = 1e-4;
  bool holds = false;
};

// A4(n+1,d) <= 2 A4(n,d) (+tol); solve_fn maps an SdpProblem to its optimum
template <class SolveFn>
DoublingReport doubling_check(int n, int d, SolveFn&& solve_fn, double tol = 1e-4) {
  DoublingReport rep;
  rep.n = n;
  rep.d = d;
  rep.tol = tol;
  if (d > n + 1) {  // both sides trivial single-word programs
    rep.value_n = 1.0;
    rep.value_n_plus_1 = 1.0;
    rep.holds = true;
    return rep;
  }
  rep.value_n = solve_fn(build_a4_problem(n, d));
  rep.value_n_plus_1 = solve_fn(build_a4_problem(n + 1, d));
  rep.holds = rep.value_n_plus_1 <= 2.0 * rep.value_n + tol;
  return rep;
}

}  // namespace codebound
