#pragma once

// The `verify` suite: cross-checks every algebraic component against an
// independent reference at small n and reports one pass/fail line per
// property.  This is what the CLI's `verify` subcommand runs.

#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "codebound/oracles.hpp"
#include "codebound/sdpa_io.hpp"
#include "codebound/solver.hpp"

namespace codebound {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool pass = true;

  void add(std::string name, bool ok, std::string detail = "") {
    pass = pass && ok;
    checks.push_back({std::move(name), ok, std::move(detail)});
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["pass"] = pass;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      nlohmann::json cj;
      cj["name"] = c.name;
      cj["pass"] = c.pass;
      cj["detail"] = c.detail;
      arr.push_back(cj);
    }
    j["checks"] = arr;
    return j;
  }
};

namespace verifydetail {

// exhaustive group-action reference for canonical labels
inline bool labels_separate_orbits(int n, std::string& detail) {
  // enumerate all code sets of size <= 4 over {0,1}^n, compute labels,
  // then check label-constancy under generators and separation via a
  // union-find over the generator action
  int N = 1 << n;
  std::vector<std::vector<uint32_t>> sets;
  std::unordered_map<uint64_t, int> id;
  auto key_of = [](const std::vector<uint32_t>& s) {
    uint64_t k = uint64_t(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) k |= uint64_t(s[i]) << (10 * i + 3);
    return k;
  };
  std::function<void(uint32_t, std::vector<uint32_t>&)> rec = [&](uint32_t from,
                                                                  std::vector<uint32_t>& cur) {
    if (!cur.empty()) {
      id.emplace(key_of(cur), (int)sets.size());
      sets.push_back(cur);
    }
    if (cur.size() == 4) return;
    for (uint32_t w = from; w < (uint32_t)N; ++w) {
      cur.push_back(w);
      rec(w + 1, cur);
      cur.pop_back();
    }
  };
  std::vector<uint32_t> cur;
  rec(0, cur);
  int ns = (int)sets.size();
  std::vector<int> parent(ns);
  for (int i = 0; i < ns; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  // generators: adjacent transpositions and the flip of coordinate 0
  auto apply = [&](const std::vector<uint32_t>& s, int gen) {
    std::vector<uint32_t> out;
    out.reserve(s.size());
    for (uint32_t w : s) {
      uint32_t img;
      if (gen == n - 1) {
        img = w ^ 1u;  // translation by e_1
      } else {
        uint32_t b0 = (w >> gen) & 1, b1 = (w >> (gen + 1)) & 1;
        img = w & ~((1u << gen) | (1u << (gen + 1)));
        img |= b0 << (gen + 1) | b1 << gen;
      }
      out.push_back(img);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<OrbitLabel> labels(ns);
  for (int i = 0; i < ns; ++i) labels[i] = canonical_label(CodeSet(n, sets[i]));
  for (int i = 0; i < ns; ++i)
    for (int gen = 0; gen < n; ++gen) {
      auto img = apply(sets[i], gen);
      int j = id.at(key_of(img));
      if (!(labels[i] == labels[j])) {
        detail = "label changes under a group generator for set #" + std::to_string(i);
        return false;
      }
      unite(i, j);
    }
  // separation: equal labels must mean same component
  std::map<std::string, int> rep;
  for (int i = 0; i < ns; ++i) {
    auto key = labels[i].to_string();
    int root = find(i);
    auto it = rep.find(key);
    if (it == rep.end())
      rep.emplace(key, root);
    else if (it->second != root) {
      detail = "two distinct orbits share label " + key;
      return false;
    }
  }
  detail = std::to_string(ns) + " sets, " + std::to_string(rep.size()) + " orbits";
  return true;
}

inline std::vector<double> random_orbit_point(const VariableTable& vars, uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<double> x(vars.size());
  for (auto& v : x) v = (rng() % 1000) / 1000.0;
  return x;
}

// eigenvalue set of the word-level ordered-pair matrix at an orbit-variable
// assignment, compared against the direct sum of full psi blocks
inline bool psi_matches_word_level(int n, int d, uint32_t seed, std::string& detail) {
  VariableTable vars = make_variable_table(n, d, 4, false);
  std::vector<double> x = random_orbit_point(vars, seed);
  int dim = 1 << (2 * n);
  std::vector<double> X(std::size_t(dim) * dim, 0.0);
  std::vector<int> lam(8);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      std::fill(lam.begin(), lam.end(), 0);
      for (int i = 0; i < n; ++i) {
        int cr = (r >> (2 * i)) & 3, cc = (c >> (2 * i)) & 3;
        int c1 = cr >> 1, c2 = cr & 1, d1 = cc >> 1, d2 = cc & 1;
        ++lam[4 * (c1 ^ c2) + 2 * (d1 ^ d2) + (c2 ^ d2)];
      }
      auto lab = label_from_lambda_counts(lam.data(), d, false);
      if (lab) X[std::size_t(c) * dim + r] = x[vars.require(*lab)];
    }
  std::vector<double> evals, V;
  linalg::eigh(X, dim, evals, V);
  std::set<long long> word_spec, block_spec;
  auto quantize = [](double v) { return (long long)std::llround(v * 1e6); };
  for (double e : evals) word_spec.insert(quantize(e));
  // psi blocks
  for (int m = 0; m <= n; ++m)
    for (int k = 0; 2 * k <= m; ++k)
      for (int l = 0; 2 * l <= n - m; ++l) {
        int rows = (m - 2 * k + 1) * (n - m - 2 * l + 1);
        std::vector<double> B(std::size_t(rows) * rows, 0.0);
        // sum over lambda of x(label) psi(B_lambda)
        std::function<void(int, int, std::vector<int>&)> rec = [&](int pos, int rem,
                                                                   std::vector<int>& lc) {
          if (pos == 7) {
            lc[7] = rem;
            auto lab = label_from_lambda_counts(lc.data(), d, false);
            if (!lab) return;
            double coeff = x[vars.require(*lab)];
            if (coeff == 0.0) return;
            DenseMat pm = psi_block(m, k, l, Distribution(8, lc), n);
            for (int cc = 0; cc < rows; ++cc)
              for (int rr = 0; rr < rows; ++rr)
                B[std::size_t(cc) * rows + rr] += coeff * pm.at(rr, cc).hi;
            return;
          }
          for (int v = rem; v >= 0; --v) {
            lc[pos] = v;
            rec(pos + 1, rem - v, lc);
          }
        };
        std::vector<int> lc(8);
        rec(0, n, lc);
        std::vector<double> ev2, V2;
        linalg::eigh(B, rows, ev2, V2);
        for (double e : ev2) block_spec.insert(quantize(e));
      }
  // compare as sets with tolerance via quantization neighborhoods
  auto close = [&](const std::set<long long>& a, const std::set<long long>& b) {
    for (long long v : a) {
      bool ok = false;
      for (long long dv = -2; dv <= 2 && !ok; ++dv) ok = b.count(v + dv) > 0;
      if (!ok) return false;
    }
    return true;
  };
  bool ok = close(word_spec, block_spec) && close(block_spec, word_spec);
  if (!ok) detail = "spectra differ at n=" + std::to_string(n) + " d=" + std::to_string(d);
  return ok;
}

}  // namespace verifydetail

inline VerifyReport run_verify(int max_n = 6) {
  VerifyReport rep;

  // Krawtchouk reflection identity, exact
  {
    bool ok = true;
    for (int n = 0; n <= 30 && ok; ++n)
      for (int k = 0; k <= n && ok; ++k)
        for (int t = 0; t <= n && ok; ++t) {
          BigInt lhs = krawtchouk(n, n - k, t);
          BigInt rhs = krawtchouk(n, k, t);
          if (t & 1) rhs = -rhs;
          ok = lhs == rhs;
        }
    rep.add("krawtchouk reflection identity (n <= 30)", ok);
  }
  // distribution enumeration count and omega sums
  {
    bool ok = true;
    std::string detail;
    for (int s : {2, 4, 8})
      for (int n = 0; n <= 8; ++n) {
        auto ds = enumerate_distributions(s, n);
        if ((BigInt)ds.size() != binomial(n + s - 1, s - 1)) {
          ok = false;
          detail = "count mismatch";
        }
      }
    for (int s : {2, 4})
      for (int n = 0; n <= 10; ++n) {
        BigInt total = 0;
        for (const auto& lam : enumerate_distributions(s, n)) total += omega_size(lam);
        BigInt expect = 1;
        for (int i = 0; i < n; ++i) expect *= s;
        if (total != expect) {
          ok = false;
          detail = "omega sum mismatch";
        }
      }
    rep.add("distribution counts and word-count sums", ok, detail);
  }
  // gamma f64 vs dd agreement
  {
    bool ok = true;
    double worst = 0;
    for (int n = 0; n <= 30 && ok; n += 3)
      for (const auto& alpha : enumerate_distributions(4, std::min(n, 12))) {
        for (int k = 0; 2 * k <= alpha.total; ++k) {
          ExactScalar g = gamma_coeff(alpha, k);
          double f = g.eval_f64();
          dd e = g.eval_dd();
          double denom = std::max(1.0, std::fabs(e.to_double()));
          worst = std::max(worst, std::fabs(f - e.to_double()) / denom);
        }
      }
    ok = worst < 1e-12;
    rep.add("gamma agrees between f64 and dd evaluation", ok,
            "max rel diff " + std::to_string(worst));
  }
  // canonical labels: invariance + separation (exhaustive)
  for (int n = 3; n <= std::min(max_n, 6); ++n) {
    std::string detail;
    bool ok = verifydetail::labels_separate_orbits(n, detail);
    rep.add("canonical labels are orbit-exact at n = " + std::to_string(n), ok, detail);
  }
  // orbit enumeration vs exhaustive subset scan (even mode)
  {
    int n = std::min(max_n, 6), d = 4;
    std::set<std::string> exhaustive;
    int N = 1 << n;
    std::function<void(uint32_t, std::vector<uint32_t>&)> rec = [&](uint32_t from,
                                                                    std::vector<uint32_t>& cur) {
      if (!cur.empty()) {
        CodeSet S(n, cur);
        if (S.distances_at_least(d) && S.distances_all_even())
          exhaustive.insert(canonical_label(S).to_string());
      }
      if (cur.size() == 4) return;
      for (uint32_t w = from; w < (uint32_t)N; ++w) {
        cur.push_back(w);
        rec(w + 1, cur);
        cur.pop_back();
      }
    };
    std::vector<uint32_t> cur;
    rec(0, cur);
    exhaustive.insert(OrbitLabel{}.to_string());
    std::set<std::string> generated;
    for (const auto& lab : enumerate_orbits(n, d, 4, true)) generated.insert(lab.to_string());
    bool ok = exhaustive == generated;
    rep.add("orbit enumeration matches exhaustive subset scan (n=" + std::to_string(n) + ",d=4)", ok,
            std::to_string(generated.size()) + " orbits");
  }
  // union labels vs explicit construction at n = 6
  {
    int n = 6, d = 4;
    bool ok = true;
    for (int m = d; m <= n && ok; m += 2) {
      uint32_t u = (m == n) ? ((1u << n) - 1) : ((1u << m) - 1);
      for (const auto& alpha : enumerate_distributions(4, m)) {
        for (const auto& beta : enumerate_distributions(4, n - m)) {
          auto fast = union_label_from_config(n, d, true, m, alpha, beta);
          // explicit words
          uint32_t v = 0, w = 0;
          int pos = 0;
          auto lay = [&](const Distribution& dist) {
            for (int c = 0; c < 4; ++c)
              for (int r = 0; r < dist.counts[c]; ++r, ++pos) {
                if (c >> 1) v |= 1u << pos;
                if (c & 1) w |= 1u << pos;
              }
          };
          lay(alpha);
          lay(beta);
          CodeSet S(n, {0u, u, v, w});
          bool feasible = S.distances_at_least(d) && S.distances_all_even();
          if (feasible != fast.has_value()) {
            ok = false;
            break;
          }
          if (fast && !(canonical_label(S) == *fast)) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
    }
    rep.add("pair-config union labels match explicit word construction (n=6)", ok);
  }
  // psi is a *-isomorphism at n <= 3 (multiplicativity, adjoints)
  {
    bool ok = true;
    std::string detail;
    for (int n = 2; n <= 3 && ok; ++n) {
      WordAlgebra alg(n);
      auto lambdas = enumerate_distributions(8, n);
      std::mt19937 rng(99);
      std::vector<double> ca(lambdas.size()), cb(lambdas.size());
      for (auto& v : ca) v = (int(rng() % 2000) - 1000) / 500.0;
      for (auto& v : cb) v = (int(rng() % 2000) - 1000) / 500.0;
      // word-level A, B and their product, expanded back in the basis
      int dim = alg.dim();
      WordAlgebra::IMat A(dim * dim, 0), B(dim * dim, 0);
      // use integer coefficients to stay exact
      std::vector<long long> ia(lambdas.size()), ib(lambdas.size());
      for (std::size_t i = 0; i < lambdas.size(); ++i) {
        ia[i] = (long long)std::llround(ca[i] * 8);
        ib[i] = (long long)std::llround(cb[i] * 8);
      }
      for (std::size_t i = 0; i < lambdas.size(); ++i) {
        auto bl = alg.b_lambda(lambdas[i]);
        for (int q = 0; q < dim * dim; ++q) {
          A[q] += ia[i] * bl[q];
          B[q] += ib[i] * bl[q];
        }
      }
      auto AB = WordAlgebra::multiply(A, B, dim);
      auto coeffs = alg.to_basis(AB);  // also verifies AB is in the algebra
      // compare psi(A) psi(B) with psi(AB) block by block
      for (int m = 0; m <= n && ok; ++m)
        for (int k = 0; 2 * k <= m && ok; ++k)
          for (int l = 0; 2 * l <= n - m && ok; ++l) {
            int rows = (m - 2 * k + 1) * (n - m - 2 * l + 1);
            std::vector<double> PA(std::size_t(rows) * rows, 0.0), PB = PA, PAB = PA, PT = PA;
            for (std::size_t i = 0; i < lambdas.size(); ++i) {
              if (!ia[i] && !ib[i]) continue;
              DenseMat pm = psi_block(m, k, l, lambdas[i], n);
              for (int c = 0; c < rows; ++c)
                for (int r = 0; r < rows; ++r) {
                  PA[std::size_t(c) * rows + r] += ia[i] * pm.at(r, c).hi;
                  PB[std::size_t(c) * rows + r] += ib[i] * pm.at(r, c).hi;
                }
            }
            for (const auto& [lamc, coeff] : coeffs) {
              if (!coeff) continue;
              DenseMat pm = psi_block(m, k, l, Distribution(8, lamc), n);
              for (int c = 0; c < rows; ++c)
                for (int r = 0; r < rows; ++r) PAB[std::size_t(c) * rows + r] += coeff * pm.at(r, c).hi;
            }
            linalg::gemm(PA, PB, PT, rows);
            double err = 0;
            for (int q = 0; q < rows * rows; ++q) err = std::max(err, std::fabs(PT[q] - PAB[q]));
            double scale = std::max(1.0, linalg::max_abs(PAB));
            if (err / scale > 1e-10) {
              ok = false;
              detail = "multiplicativity fails at (" + std::to_string(m) + "," + std::to_string(k) +
                       "," + std::to_string(l) + ") err " + std::to_string(err);
            }
          }
    }
    rep.add("psi is multiplicative on Sym^n(A) for n <= 3", ok, detail);
  }
  // theta matches the coefficients extracted from the word-level phi
  {
    bool ok = true;
    std::string detail;
    for (int n = 1; n <= 3 && ok; ++n) {
      WordAlgebra alg(n);
      for (const auto& lambda : enumerate_distributions(8, n)) {
        auto bl = alg.b_lambda(lambda);
        for (int m = 0; m <= n && ok; ++m) {
          auto phi = alg.phi_scaled(bl, m);
          Distribution lp = project_prime(lambda);
          for (const auto& alpha : enumerate_distributions(4, m)) {
            bool split_ok = true;
            std::vector<int> bc(4);
            for (int c = 0; c < 4; ++c) {
              bc[c] = lp.counts[c] - alpha.counts[c];
              if (bc[c] < 0) split_ok = false;
            }
            if (!split_ok) continue;
            Distribution beta(4, bc);
            BigInt t = theta(lambda, alpha, beta);
            long long got = alg.phi_coefficient(phi, m, alpha, beta);
            if (BigInt(got) != t) {
              ok = false;
              detail = "theta mismatch at n=" + std::to_string(n);
            }
          }
        }
      }
    }
    rep.add("theta matches word-level phi coefficients (n <= 3)", ok, detail);
  }
  // theta sign relation under the pair swap substitution
  {
    bool ok = true;
    for (int n = 2; n <= std::min(max_n, 6) && ok; ++n) {
      for (const auto& lambda : enumerate_distributions(8, n)) {
        Distribution lt = WordAlgebra::lambda_tilde(lambda);
        Distribution lp = project_prime(lambda);
        for (int m = 0; m <= n && ok; ++m)
          for (const auto& alpha : enumerate_distributions(4, m)) {
            std::vector<int> bc(4);
            bool split_ok = true;
            for (int c = 0; c < 4; ++c) {
              bc[c] = lp.counts[c] - alpha.counts[c];
              if (bc[c] < 0) split_ok = false;
            }
            if (!split_ok) continue;
            Distribution beta(4, bc);
            BigInt lhs = theta(lt, alpha, beta);
            BigInt rhs = theta(lambda, alpha, beta);
            if (i_of(beta) & 1) rhs = -rhs;
            if (lhs != rhs) ok = false;
          }
      }
    }
    rep.add("theta sign relation under the row swap (n <= " + std::to_string(std::min(max_n, 6)) + ")",
            ok);
  }
  // block dimension identity
  {
    bool ok = true;
    for (int n = 1; n <= 8; ++n) {
      BigInt total = 0;
      for (int m = 0; m <= n; ++m)
        for (int k = 0; 2 * k <= m; ++k)
          for (int l = 0; 2 * l <= n - m; ++l) {
            BigInt t = BigInt(m - 2 * k + 1) * (n - m - 2 * l + 1);
            total += t * t;
          }
      if (total != binomial(n + 7, 7)) ok = false;
    }
    rep.add("block dimension identity sums to C(n+7,7) (n <= 8)", ok);
  }
  // psi blocks vs word-level spectra at random points
  {
    bool ok = true;
    std::string detail;
    for (int n = 2; n <= std::min(4, max_n) && ok; ++n)
      for (int d : {2, 4}) {
        if (d > n) continue;
        ok = verifydetail::psi_matches_word_level(n, d, 1000u + n * 10 + d, detail);
        if (!ok) break;
      }
    rep.add("psi block spectra match the word-level matrix (n <= 4)", ok, detail);
  }
  // Q_tau B_lambda = B_lambda-tilde and unitarity of U
  {
    bool ok = true;
    for (int n = 1; n <= 3 && ok; ++n) {
      WordAlgebra alg(n);
      auto q = alg.q_tau();
      for (const auto& lambda : enumerate_distributions(8, n)) {
        auto bl = alg.b_lambda(lambda);
        auto bt = alg.b_lambda(WordAlgebra::lambda_tilde(lambda));
        auto prod = WordAlgebra::multiply(q, bl, alg.dim());
        if (prod != bt) ok = false;
      }
    }
    rep.add("row swap permutation maps B_lambda to B_lambda~", ok);
  }
  return rep;
}

}  // namespace codebound
