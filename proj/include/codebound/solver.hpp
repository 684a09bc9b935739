#pragma once

// Infeasible primal-dual interior-point solver for block-diagonal SDPs in
// the form  min c^T x  s.t.  X(x) = sum_j x_j F_j - F0  PSD  (per block),
// which is the shape both bound programs and imported SDPA files take.
// Directions are HKM with a Mehrotra predictor-corrector; the Schur
// complement is assembled per block with either a dense-intermediate or an
// entrywise formula, whichever is cheaper for the block's sparsity.
//
// The solver is templated on the scalar: double for speed, dd when the
// feasible region is too thin for 53-bit arithmetic.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "codebound/linalg.hpp"
#include "codebound/model.hpp"

namespace codebound {

enum class SolveStatus { Optimal, MaxIter, NumericalFailure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::MaxIter: return "MAX_ITER";
    default: return "NUMERICAL_FAILURE";
  }
}

enum class Precision { F64, DD };

struct SolverOptions {
  double tol = 1e-8;
  int max_iter = 200;
  Precision precision = Precision::F64;
  double frac_boundary = 0.98;
  double init_scale = 0.0;  // 0 = derive from coefficient norms
  bool certify = false;
  int verbosity = 0;
};

struct SolveResult {
  double primal_value = 0.0;  // maximization orientation (includes offset)
  double dual_value = 0.0;    // upper bound side
  SolveStatus status = SolveStatus::NumericalFailure;
  int iterations = 0;
  double max_block_infeasibility = 0.0;
  std::optional<double> certified_upper_bound;
  std::string precision = "f64";
  double wall_seconds = 0.0;
};

namespace conic {

template <class R>
struct Ent {
  int r, c;
  R v;
};

template <class R>
struct ConeBlock {
  int size = 0;
  bool diag = false;
  std::vector<int> vars;       // variable ids present, ascending
  std::vector<int> offs;       // per-var ranges into ents, size vars+1
  std::vector<Ent<R>> ents;    // ordered entries (both triangles)
  std::vector<Ent<R>> f0;      // ordered entries of F0
};

template <class R>
struct ConeProblem {
  int m = 0;
  std::vector<R> c;  // minimize
  std::vector<ConeBlock<R>> blocks;
};

template <class R>
inline ConeProblem<R> build_cone(const SdpProblem& p) {
  ConeProblem<R> P;
  P.m = p.num_vars();
  P.c.resize(P.m);
  for (int j = 0; j < P.m; ++j) P.c[j] = R(-p.objective[j]);
  auto push_entries = [](std::vector<Ent<R>>& out, const SparseSym& mat, double scale) {
    for (const auto& t : mat.entries) {
      R v = R(real_traits<R>::from(t.v)) * R(scale);
      out.push_back({t.r, t.c, v});
      if (t.r != t.c) out.push_back({t.c, t.r, v});
    }
  };
  for (const auto& b : p.blocks) {
    ConeBlock<R> cb;
    cb.size = b.dim;
    push_entries(cb.f0, b.constant, -1.0);  // F0 = -C
    cb.offs.push_back(0);
    for (const auto& [var, mat] : b.coeff) {
      cb.vars.push_back(var);
      push_entries(cb.ents, mat, 1.0);
      cb.offs.push_back((int)cb.ents.size());
    }
    P.blocks.push_back(std::move(cb));
  }
  if (p.nonneg_all && P.m > 0) {
    ConeBlock<R> nb;
    nb.size = P.m;
    nb.diag = true;
    nb.offs.push_back(0);
    for (int j = 0; j < P.m; ++j) {
      nb.vars.push_back(j);
      nb.ents.push_back({j, j, R(1.0)});
      nb.offs.push_back((int)nb.ents.size());
    }
    P.blocks.push_back(std::move(nb));
  }
  return P;
}

template <class R>
struct Solution {
  SolveResult res;
  std::vector<R> x;
  std::vector<std::vector<R>> Y;  // per block, dense (diag blocks: diagonal vector)
};

// dense trace helpers
template <class R>
inline R sparse_trace(const std::vector<Ent<R>>& ents, int lo, int hi, const std::vector<R>& M,
                      int n, bool transpose_M) {
  R s(0.0);
  for (int t = lo; t < hi; ++t) {
    const auto& e = ents[t];
    s += e.v * (transpose_M ? M[std::size_t(e.r) * n + e.c] : M[std::size_t(e.c) * n + e.r]);
  }
  return s;
}

template <class R>
class InteriorPoint {
 public:
  InteriorPoint(const ConeProblem<R>& P, const SolverOptions& opt) : P_(P), opt_(opt) {}

  Solution<R> run() {
    auto t0 = std::chrono::steady_clock::now();
    const int m = P_.m;
    const int nb = (int)P_.blocks.size();
    // scales
    double normF0 = 0.0, normC = 0.0;
    for (const auto& b : P_.blocks)
      for (const auto& e : b.f0) normF0 = std::max(normF0, std::fabs(real_traits<R>::to_double(e.v)));
    for (const auto& e : P_.c) normC = std::max(normC, std::fabs(real_traits<R>::to_double(e)));
    double s0 = opt_.init_scale > 0 ? opt_.init_scale : 10.0 * std::max({1.0, normF0});
    double y0 = opt_.init_scale > 0 ? opt_.init_scale : 10.0 * std::max({1.0, normC});

    x_.assign(m, R(0.0));
    gcheck_.assign(m, R(0.0));
    X_.resize(nb);
    Y_.resize(nb);
    int Ntot = 0;
    for (int b = 0; b < nb; ++b) {
      int s = P_.blocks[b].size;
      Ntot += s;
      if (P_.blocks[b].diag) {
        X_[b].assign(s, R(s0));
        Y_[b].assign(s, R(y0));
      } else {
        linalg::set_identity(X_[b], s, R(s0));
        linalg::set_identity(Y_[b], s, R(y0));
      }
    }
    entrywise_.resize(nb);
    for (int b = 0; b < nb; ++b) entrywise_[b] = pick_entrywise(b);

    Solution<R> best;
    best.res.status = SolveStatus::MaxIter;
    double best_score = 1e300;
    last_progress_score_ = 1e300;
    last_progress_it_ = 0;
    SolveStatus status = SolveStatus::MaxIter;
    int it = 0;
    std::vector<R> B, dx, dxa;
    std::vector<std::vector<R>> G(nb), W(nb), Lx(nb), XY(nb), GY(nb), Maux(nb), dX(nb), dY(nb),
        dXa(nb), dYa(nb);
    std::vector<R> g(m);

    for (it = 0; it < opt_.max_iter; ++it) {
      // residuals and objective values
      compute_G(G);
      compute_g(g);
      double pobj = 0, dobj = 0;
      for (int j = 0; j < m; ++j) pobj += real_traits<R>::to_double(P_.c[j] * x_[j]);
      for (int b = 0; b < nb; ++b) dobj += real_traits<R>::to_double(f0_dot_Y(b));
      double perr = 0, derr = 0;
      for (int b = 0; b < nb; ++b) perr = std::max(perr, to_double(linalg::max_abs(G[b])));
      for (int j = 0; j < m; ++j) derr = std::max(derr, std::fabs(real_traits<R>::to_double(g[j])));
      perr_abs_ = perr;
      double perr_rel = perr / (1.0 + normF0);
      double derr_rel = derr / (1.0 + normC);
      double gap = std::fabs(pobj - dobj) / (1.0 + 0.5 * (std::fabs(pobj) + std::fabs(dobj)));
      double score = std::max({gap, perr_rel, derr_rel});
      if (opt_.verbosity > 0)
        std::fprintf(stderr, "it %3d  pobj %.10e  dobj %.10e  gap %.2e  perr %.2e  derr %.2e\n", it,
                     pobj, dobj, gap, perr_rel, derr_rel);
      if (score < best_score) {
        best_score = score;
        best.x = x_;
        best.Y = Y_;
        best.res.primal_value = -pobj;
        best.res.dual_value = -dobj;
        best.res.max_block_infeasibility = std::max(perr_rel, derr_rel);
      }
      if (gap <= opt_.tol && perr_rel <= opt_.tol && derr_rel <= opt_.tol) {
        status = SolveStatus::Optimal;
        break;
      }
      if (score < 0.99 * last_progress_score_) {
        last_progress_score_ = score;
        last_progress_it_ = it;
      } else if (it - last_progress_it_ > 25) {
        break;  // stagnated; report the best iterate
      }

      // factorizations
      bool ok = true;
      for (int b = 0; b < nb && ok; ++b) ok = factor_and_invert(b, Lx, W);
      if (!ok) {
        status = SolveStatus::NumericalFailure;
        break;
      }
      R mu(0.0);
      for (int b = 0; b < nb; ++b) mu += XdotY(b);
      mu = mu / R(double(Ntot));

      if (!build_schur(W, B)) {
        status = SolveStatus::NumericalFailure;
        break;
      }
      std::vector<R> Bfac = B;
      if (!linalg::cholesky_inplace(Bfac, m)) {
        bool fixed = false;
        double base = 0;
        for (int j = 0; j < m; ++j) base += real_traits<R>::to_double(B[std::size_t(j) * m + j]);
        base = std::max(base / m, 1.0);
        for (int attempt = 0; attempt < 3 && !fixed; ++attempt) {
          Bfac = B;
          double jit = base * 1e-13 * std::pow(100.0, attempt);
          for (int j = 0; j < m; ++j) Bfac[std::size_t(j) * m + j] += R(jit);
          fixed = linalg::cholesky_inplace(Bfac, m);
        }
        if (!fixed) {
          status = SolveStatus::NumericalFailure;
          break;
        }
      }

      // shared per-iteration products
      for (int b = 0; b < nb; ++b) {
        if (P_.blocks[b].diag) continue;
        int s = P_.blocks[b].size;
        linalg::gemm(X_[b], Y_[b], XY[b], s);
        linalg::gemm(G[b], Y_[b], GY[b], s);
      }

      // predictor: Rc = -X Y
      std::vector<R> rhs1(m);
      build_rhs(W, G, XY, GY, g, /*sigma_mu=*/R(0.0), nullptr, rhs1, Maux);
      dxa.assign(m, R(0.0));
      solve_schur(Bfac, rhs1, dxa);
      make_dX(dxa, G, dXa);
      make_dY(W, XY, GY, dXa, /*sigma_mu=*/R(0.0), nullptr, dYa);
      double ap_a = step_length(Lx, dXa, true);
      double ad_a = step_length_dual(dYa);
      // mu_aff
      R mu_aff = mu_after(ap_a, ad_a, dXa, dYa, Ntot);
      double ratio = real_traits<R>::to_double(mu_aff / mu);
      double sigma = std::min(1.0, std::max(1e-6, ratio * ratio * ratio));
      // keep complementarity from collapsing far below the target accuracy,
      // which would poison the Newton systems before feasibility caught up
      double value_scale = 1.0 + 0.5 * (std::fabs(pobj) + std::fabs(dobj));
      double mu_floor = 0.03 * opt_.tol * value_scale / std::max(1, Ntot);
      double mu_d = real_traits<R>::to_double(mu);
      if (mu_d < 30.0 * mu_floor) sigma = std::max(sigma, std::min(1.0, mu_floor / mu_d));

      // corrector: Rc = sigma*mu*I - XY - dXa dYa
      std::vector<std::vector<R>> cross(nb);
      for (int b = 0; b < nb; ++b) {
        if (P_.blocks[b].diag) {
          int s = P_.blocks[b].size;
          cross[b].resize(s);
          for (int i = 0; i < s; ++i) cross[b][i] = dXa[b][i] * dYa[b][i];
        } else {
          linalg::gemm(dXa[b], dYa[b], cross[b], P_.blocks[b].size);
        }
      }
      R smu = R(sigma) * mu;
      build_rhs(W, G, XY, GY, g, smu, &cross, rhs1, Maux);
      dx.assign(m, R(0.0));
      solve_schur(Bfac, rhs1, dx);
      if (opt_.verbosity > 2) {
        double worst = 0;
        for (int i = 0; i < m; ++i) {
          R acc(0.0);
          for (int j2 = 0; j2 < m; ++j2) acc += B[std::size_t(j2) * m + i] * dx[j2];
          worst = std::max(worst, std::fabs(real_traits<R>::to_double(acc - rhs1[i])));
        }
        std::fprintf(stderr, "   |B dx - rhs|_inf = %.3e\n", worst);
      }
      make_dX(dx, G, dX);
      make_dY(W, XY, GY, dX, smu, &cross, dY);
      if (opt_.verbosity > 3 && it < 2) {
        for (std::size_t b = 0; b < P_.blocks.size(); ++b) {
          const auto& blk = P_.blocks[b];
          if (blk.size != 1 && !blk.diag) continue;
          for (int i2 = 0; i2 < (blk.diag ? blk.size : 1); ++i2)
            std::fprintf(stderr, "  blk %zu[%d] diag=%d X=%.6e Y=%.6e W=%.6e G=%.6e dX=%.6e dY=%.6e rc?=smu %.3e\n",
                         b, i2, (int)blk.diag, to_double(X_[b][i2]), to_double(Y_[b][i2]),
                         to_double(W[b][i2]), to_double(G[b][i2]), to_double(dX[b][i2]),
                         to_double(dY[b][i2]), to_double(smu));
        }
        for (int j2 = 0; j2 < m; ++j2)
          std::fprintf(stderr, "  var %d: dx=%.6e g=%.6e rhs=%.6e\n", j2, to_double(dx[j2]),
                       to_double(g[j2]), to_double(rhs1[j2]));
      }
      double ap = step_length(Lx, dX, true);
      double ad = step_length_dual(dY);
      if (opt_.verbosity > 2) {
        // check tr(F_j dY) == g_j
        double worst = 0;
        for (std::size_t b = 0; b < P_.blocks.size(); ++b) {
          const auto& blk = P_.blocks[b];
          for (std::size_t vi = 0; vi < blk.vars.size(); ++vi) {
            R s(0.0);
            if (blk.diag) s = dY[b][blk.ents[blk.offs[vi]].r];
            else
              for (int t = blk.offs[vi]; t < blk.offs[vi + 1]; ++t)
                s += blk.ents[t].v * dY[b][std::size_t(blk.ents[t].c) * blk.size + blk.ents[t].r];
            gcheck_[blk.vars[vi]] += s;
          }
        }
        for (int j = 0; j < m; ++j) {
          worst = std::max(worst, std::fabs(real_traits<R>::to_double(gcheck_[j] - g[j])));
          gcheck_[j] = R(0.0);
        }
        std::fprintf(stderr, "   |tr(F dY) - g|_inf = %.3e\n", worst);
      }
      if (opt_.verbosity > 1)
        std::fprintf(stderr, "   mu %.3e sigma %.3e ap_a %.3f ad_a %.3f ap %.3f ad %.3f\n",
                     real_traits<R>::to_double(mu), sigma, ap_a, ad_a, ap, ad);

      // update with Cholesky backoff
      if (!apply_update(dx, dX, dY, ap, ad)) {
        status = SolveStatus::NumericalFailure;
        break;
      }
      if (real_traits<R>::to_double(mu) < 1e-300) break;
    }
    Solution<R> out = std::move(best);
    out.res.iterations = it;
    out.res.status = status == SolveStatus::Optimal
                         ? SolveStatus::Optimal
                         : (it >= opt_.max_iter ? SolveStatus::MaxIter : status);
    out.res.precision = real_traits<R>::name();
    out.res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

 private:
  const ConeProblem<R>& P_;
  SolverOptions opt_;
  std::vector<R> x_;
  std::vector<std::vector<R>> X_, Y_;
  std::vector<bool> entrywise_;
  std::vector<R> gcheck_;
  double perr_abs_ = 0.0;
  double last_progress_score_ = 1e300;
  int last_progress_it_ = 0;

  static double to_double(R v) { return real_traits<R>::to_double(v); }

  bool pick_entrywise(int b) const {
    const auto& blk = P_.blocks[b];
    if (blk.diag) return false;
    double T = (double)blk.ents.size();
    double V = (double)blk.vars.size();
    double s = blk.size;
    double cost_dense = V * (s * s * (T / std::max(V, 1.0)) + s * s) + 0.5 * V * T;
    double cost_entry = 0.5 * T * T;
    return cost_entry < cost_dense;
  }

  // G_b = sum_j x_j F_j - F0 - X_b
  void compute_G(std::vector<std::vector<R>>& G) {
    int nb = (int)P_.blocks.size();
    G.resize(nb);
    for (int b = 0; b < nb; ++b) {
      const auto& blk = P_.blocks[b];
      int s = blk.size;
      if (blk.diag) {
        G[b].assign(s, R(0.0));
        for (std::size_t vi = 0; vi < blk.vars.size(); ++vi)
          G[b][blk.ents[blk.offs[vi]].r] += x_[blk.vars[vi]];
        for (int i = 0; i < s; ++i) G[b][i] -= X_[b][i];
      } else {
        G[b].assign(std::size_t(s) * s, R(0.0));
        for (std::size_t vi = 0; vi < blk.vars.size(); ++vi) {
          R xv = x_[blk.vars[vi]];
          if (xv == R(0.0)) continue;
          for (int t = blk.offs[vi]; t < blk.offs[vi + 1]; ++t)
            G[b][std::size_t(blk.ents[t].c) * s + blk.ents[t].r] += xv * blk.ents[t].v;
        }
        for (const auto& e : blk.f0) G[b][std::size_t(e.c) * s + e.r] -= e.v;
        for (std::size_t i = 0; i < G[b].size(); ++i) G[b][i] -= X_[b][i];
      }
    }
  }

  void compute_g(std::vector<R>& g) {
    for (int j = 0; j < P_.m; ++j) g[j] = P_.c[j];
    for (std::size_t b = 0; b < P_.blocks.size(); ++b) {
      const auto& blk = P_.blocks[b];
      for (std::size_t vi = 0; vi < blk.vars.size(); ++vi) {
        R s(0.0);
        if (blk.diag) {
          s = Y_[b][blk.ents[blk.offs[vi]].r];
        } else {
          for (int t = blk.offs[vi]; t < blk.offs[vi + 1]; ++t)
            s += blk.ents[t].v * Y_[b][std::size_t(blk.ents[t].c) * blk.size + blk.ents[t].r];
        }
        g[blk.vars[vi]] -= s;
      }
    }
  }

  R f0_dot_Y(int b) {
    const auto& blk = P_.blocks[b];
    R s(0.0);
    if (blk.diag) {
      for (const auto& e : blk.f0) s += e.v * Y_[b][e.r];
    } else {
      for (const auto& e : blk.f0) s += e.v * Y_[b][std::size_t(e.c) * blk.size + e.r];
    }
    return s;
  }

  R XdotY(int b) {
    const auto& blk = P_.blocks[b];
    R s(0.0);
    if (blk.diag) {
      for (int i = 0; i < blk.size; ++i) s += X_[b][i] * Y_[b][i];
    } else {
      s = linalg::trace_dot(X_[b], Y_[b], blk.size);
    }
    return s;
  }

  bool factor_and_invert(int b, std::vector<std::vector<R>>& Lx, std::vector<std::vector<R>>& W) {
    const auto& blk = P_.blocks[b];
    if (blk.diag) {
      Lx[b] = X_[b];
      W[b].resize(blk.size);
      for (int i = 0; i < blk.size; ++i) {
        if (!(to_double(X_[b][i]) > 0)) return false;
        W[b][i] = R(1.0) / X_[b][i];
      }
      return true;
    }
    Lx[b] = X_[b];
    if (!linalg::cholesky_inplace(Lx[b], blk.size)) return false;
    return linalg::inverse_spd(X_[b], W[b], blk.size);
  }

  // Schur matrix B_ij = sum_b tr(F_i W F_j Y)
  bool build_schur(const std::vector<std::vector<R>>& W, std::vector<R>& B) {
    int m = P_.m;
    B.assign(std::size_t(m) * m, R(0.0));
    std::vector<R> H;
    for (std::size_t b = 0; b < P_.blocks.size(); ++b) {
      const auto& blk = P_.blocks[b];
      int s = blk.size;
      if (blk.diag) {
        for (std::size_t vi = 0; vi < blk.vars.size(); ++vi) {
          int t = blk.ents[blk.offs[vi]].r;
          int j = blk.vars[vi];
          B[std::size_t(j) * m + j] += W[b][t] * Y_[b][t];
        }
        continue;
      }
      int nv = (int)blk.vars.size();
      if (entrywise_[b]) {
        for (int vj = 0; vj < nv; ++vj) {
          int gj = blk.vars[vj];
          for (int vi = 0; vi <= vj; ++vi) {
            int gi = blk.vars[vi];
            R acc(0.0);
            for (int t1 = blk.offs[vi]; t1 < blk.offs[vi + 1]; ++t1) {
              const auto& e1 = blk.ents[t1];
              const R* wrow = &W[b][std::size_t(e1.c) * s];  // W[:,e1.c] == W[e1.c,:]
              const R* ycol = &Y_[b][std::size_t(e1.r) * s];
              R inner(0.0);
              for (int t2 = blk.offs[vj]; t2 < blk.offs[vj + 1]; ++t2) {
                const auto& e2 = blk.ents[t2];
                inner += e2.v * wrow[e2.r] * ycol[e2.c];
              }
              acc += e1.v * inner;
            }
            B[std::size_t(gj) * m + gi] += acc;
          }
        }
      } else {
        H.assign(std::size_t(s) * s, R(0.0));
        for (int vj = 0; vj < nv; ++vj) {
          // H = W F_j Y
          std::fill(H.begin(), H.end(), R(0.0));
          for (int t = blk.offs[vj]; t < blk.offs[vj + 1]; ++t) {
            const auto& e = blk.ents[t];
            const R* wcol = &W[b][std::size_t(e.r) * s];
            const R* ycol = &Y_[b][std::size_t(e.c) * s];
            for (int cc = 0; cc < s; ++cc) {
              R yv = e.v * ycol[cc];
              if (yv == R(0.0)) continue;
              R* hcol = &H[std::size_t(cc) * s];
              for (int rr = 0; rr < s; ++rr) hcol[rr] += wcol[rr] * yv;
            }
          }
          int gj = blk.vars[vj];
          for (int vi = 0; vi <= vj; ++vi) {
            int gi = blk.vars[vi];
            R acc(0.0);
            for (int t = blk.offs[vi]; t < blk.offs[vi + 1]; ++t) {
              const auto& e = blk.ents[t];
              acc += e.v * H[std::size_t(e.r) * s + e.c];  // H[c,r] with (r,c) = (e.r,e.c): tr(F_i H)
            }
            B[std::size_t(gj) * m + gi] += acc;
          }
        }
      }
    }
    // fill the lower triangle from the assembled upper one
    for (int j = 0; j < m; ++j)
      for (int i = j + 1; i < m; ++i) B[std::size_t(j) * m + i] = B[std::size_t(i) * m + j];
    return true;
  }

  // rhs_j = tr(F_j W (Rc - G Y)) - g_j  with  Rc = sigma_mu*I - XY - cross
  void build_rhs(const std::vector<std::vector<R>>& W, const std::vector<std::vector<R>>& G,
                 const std::vector<std::vector<R>>& XY, const std::vector<std::vector<R>>& GY,
                 const std::vector<R>& g, R sigma_mu, const std::vector<std::vector<R>>* cross,
                 std::vector<R>& rhs, std::vector<std::vector<R>>& Maux) {
    int m = P_.m;
    rhs.assign(m, R(0.0));
    int nb = (int)P_.blocks.size();
    Maux.resize(nb);
    std::vector<R> T;
    for (int b = 0; b < nb; ++b) {
      const auto& blk = P_.blocks[b];
      int s = blk.size;
      if (blk.diag) {
        Maux[b].resize(s);
        for (int i = 0; i < s; ++i) {
          R rc = sigma_mu - X_[b][i] * Y_[b][i];
          if (cross) rc -= (*cross)[b][i];
          rc -= G[b][i] * Y_[b][i];
          Maux[b][i] = W[b][i] * rc;
        }
        for (std::size_t vi = 0; vi < blk.vars.size(); ++vi)
          rhs[blk.vars[vi]] += Maux[b][blk.ents[blk.offs[vi]].r];
      } else {
        T.assign(std::size_t(s) * s, R(0.0));
        for (int i = 0; i < s; ++i) T[std::size_t(i) * s + i] = sigma_mu;
        for (std::size_t q = 0; q < T.size(); ++q) T[q] -= XY[b][q] + GY[b][q];
        if (cross)
          for (std::size_t q = 0; q < T.size(); ++q) T[q] -= (*cross)[b][q];
        linalg::gemm(W[b], T, Maux[b], s);
        for (std::size_t vi = 0; vi < blk.vars.size(); ++vi) {
          R acc(0.0);
          for (int t = blk.offs[vi]; t < blk.offs[vi + 1]; ++t) {
            const auto& e = blk.ents[t];
            acc += e.v * Maux[b][std::size_t(e.r) * s + e.c];  // tr(F_j M) = sum F[r,c] M[c,r]
          }
          rhs[blk.vars[vi]] += acc;
        }
      }
    }
    for (int j = 0; j < m; ++j) rhs[j] -= g[j];
  }

  void solve_schur(const std::vector<R>& Bfac, const std::vector<R>& rhs, std::vector<R>& dx) {
    int m = P_.m;
    dx = rhs;
    // dx as a single column
    linalg::forward_solve_inplace(Bfac, dx, m, 1);
    linalg::backward_solve_inplace(Bfac, dx, m, 1);
  }

  void make_dX(const std::vector<R>& dx, const std::vector<std::vector<R>>& G,
               std::vector<std::vector<R>>& dX) {
    int nb = (int)P_.blocks.size();
    dX.resize(nb);
    for (int b = 0; b < nb; ++b) {
      const auto& blk = P_.blocks[b];
      int s = blk.size;
      if (blk.diag) {
        dX[b] = G[b];
        for (std::size_t vi = 0; vi < blk.vars.size(); ++vi)
          dX[b][blk.ents[blk.offs[vi]].r] += dx[blk.vars[vi]];
      } else {
        dX[b] = G[b];
        for (std::size_t vi = 0; vi < blk.vars.size(); ++vi) {
          R xv = dx[blk.vars[vi]];
          if (xv == R(0.0)) continue;
          for (int t = blk.offs[vi]; t < blk.offs[vi + 1]; ++t)
            dX[b][std::size_t(blk.ents[t].c) * s + blk.ents[t].r] += xv * blk.ents[t].v;
        }
      }
    }
  }

  // dY = W (Rc - dX Y), symmetrized
  void make_dY(const std::vector<std::vector<R>>& W, const std::vector<std::vector<R>>& XY,
               const std::vector<std::vector<R>>& GY, const std::vector<std::vector<R>>& dX,
               R sigma_mu, const std::vector<std::vector<R>>* cross,
               std::vector<std::vector<R>>& dY) {
    int nb = (int)P_.blocks.size();
    dY.resize(nb);
    std::vector<R> T, U;
    for (int b = 0; b < nb; ++b) {
      const auto& blk = P_.blocks[b];
      int s = blk.size;
      if (blk.diag) {
        dY[b].resize(s);
        for (int i = 0; i < s; ++i) {
          R rc = sigma_mu - X_[b][i] * Y_[b][i];
          if (cross) rc -= (*cross)[b][i];
          dY[b][i] = W[b][i] * (rc - dX[b][i] * Y_[b][i]);
        }
      } else {
        T.assign(std::size_t(s) * s, R(0.0));
        for (int i = 0; i < s; ++i) T[std::size_t(i) * s + i] = sigma_mu;
        for (std::size_t q = 0; q < T.size(); ++q) T[q] -= XY[b][q];
        if (cross)
          for (std::size_t q = 0; q < T.size(); ++q) T[q] -= (*cross)[b][q];
        linalg::gemm(dX[b], Y_[b], U, s);
        for (std::size_t q = 0; q < T.size(); ++q) T[q] -= U[q];
        linalg::gemm(W[b], T, dY[b], s);
        linalg::symmetrize(dY[b], s);
      }
    }
  }

  double step_length(const std::vector<std::vector<R>>& Lx, const std::vector<std::vector<R>>& dX,
                     bool primal) {
    (void)primal;
    double alpha = 1.0;
    for (std::size_t b = 0; b < P_.blocks.size(); ++b) {
      const auto& blk = P_.blocks[b];
      if (blk.diag) {
        for (int i = 0; i < blk.size; ++i) {
          double xi = to_double(X_[b][i]), di = to_double(dX[b][i]);
          if (di < 0) alpha = std::min(alpha, -opt_.frac_boundary * xi / di);
        }
        continue;
      }
      int s = blk.size;
      std::vector<R> M = dX[b];
      linalg::forward_solve_inplace(Lx[b], M, s, s);
      // M := L^{-1} dX L^{-T}: solve on the right via transposing
      // transpose M, forward solve, transpose back
      std::vector<R> Mt(std::size_t(s) * s);
      for (int j = 0; j < s; ++j)
        for (int i = 0; i < s; ++i) Mt[std::size_t(i) * s + j] = M[std::size_t(j) * s + i];
      linalg::forward_solve_inplace(Lx[b], Mt, s, s);
      linalg::symmetrize(Mt, s);
      R lam = linalg::min_eig_estimate(Mt, s);
      double lmin = to_double(lam);
      if (lmin < 0) alpha = std::min(alpha, -opt_.frac_boundary / lmin);
    }
    return alpha;
  }

  double step_length_dual(const std::vector<std::vector<R>>& dY) {
    double alpha = 1.0;
    for (std::size_t b = 0; b < P_.blocks.size(); ++b) {
      const auto& blk = P_.blocks[b];
      if (blk.diag) {
        for (int i = 0; i < blk.size; ++i) {
          double yi = to_double(Y_[b][i]), di = to_double(dY[b][i]);
          if (di < 0) alpha = std::min(alpha, -opt_.frac_boundary * yi / di);
        }
        continue;
      }
      int s = blk.size;
      std::vector<R> Ly = Y_[b];
      if (!linalg::cholesky_inplace(Ly, s)) return 0.5;  // should not happen
      std::vector<R> M = dY[b];
      linalg::forward_solve_inplace(Ly, M, s, s);
      std::vector<R> Mt(std::size_t(s) * s);
      for (int j = 0; j < s; ++j)
        for (int i = 0; i < s; ++i) Mt[std::size_t(i) * s + j] = M[std::size_t(j) * s + i];
      linalg::forward_solve_inplace(Ly, Mt, s, s);
      linalg::symmetrize(Mt, s);
      R lam = linalg::min_eig_estimate(Mt, s);
      double lmin = to_double(lam);
      if (lmin < 0) alpha = std::min(alpha, -opt_.frac_boundary / lmin);
    }
    return alpha;
  }

  R mu_after(double ap, double ad, const std::vector<std::vector<R>>& dX,
             const std::vector<std::vector<R>>& dY, int Ntot) {
    R total(0.0);
    for (std::size_t b = 0; b < P_.blocks.size(); ++b) {
      const auto& blk = P_.blocks[b];
      if (blk.diag) {
        for (int i = 0; i < blk.size; ++i)
          total += (X_[b][i] + R(ap) * dX[b][i]) * (Y_[b][i] + R(ad) * dY[b][i]);
      } else {
        int s = blk.size;
        for (std::size_t q = 0; q < X_[b].size(); ++q) {
          R xv = X_[b][q] + R(ap) * dX[b][q];
          R yv = Y_[b][q] + R(ad) * dY[b][q];
          total += xv * yv;
        }
        (void)s;
      }
    }
    return total / R(double(Ntot));
  }

  bool apply_update(const std::vector<R>& dx, const std::vector<std::vector<R>>& dX,
                    const std::vector<std::vector<R>>& dY, double ap, double ad) {
    int nb = (int)P_.blocks.size();
    // primal with backoff
    for (int attempt = 0;; ++attempt) {
      if (attempt > 60) return false;
      bool ok = true;
      for (int b = 0; b < nb && ok; ++b) {
        const auto& blk = P_.blocks[b];
        if (blk.diag) {
          for (int i = 0; i < blk.size; ++i)
            if (!(to_double(X_[b][i] + R(ap) * dX[b][i]) > 0)) {
              ok = false;
              break;
            }
        } else {
          std::vector<R> cand(X_[b].size());
          for (std::size_t q = 0; q < cand.size(); ++q) cand[q] = X_[b][q] + R(ap) * dX[b][q];
          std::vector<R> L = cand;
          ok = linalg::cholesky_inplace(L, blk.size);
        }
      }
      if (ok) break;
      ap *= 0.7;
    }
    for (int attempt = 0;; ++attempt) {
      if (attempt > 60) return false;
      bool ok = true;
      for (int b = 0; b < nb && ok; ++b) {
        const auto& blk = P_.blocks[b];
        if (blk.diag) {
          for (int i = 0; i < blk.size; ++i)
            if (!(to_double(Y_[b][i] + R(ad) * dY[b][i]) > 0)) {
              ok = false;
              break;
            }
        } else {
          std::vector<R> cand(Y_[b].size());
          for (std::size_t q = 0; q < cand.size(); ++q) cand[q] = Y_[b][q] + R(ad) * dY[b][q];
          std::vector<R> L = cand;
          ok = linalg::cholesky_inplace(L, blk.size);
        }
      }
      if (ok) break;
      ad *= 0.7;
    }
    for (int j = 0; j < P_.m; ++j) x_[j] += R(ap) * dx[j];
    for (int b = 0; b < nb; ++b) {
      for (std::size_t q = 0; q < X_[b].size(); ++q) X_[b][q] += R(ap) * dX[b][q];
      for (std::size_t q = 0; q < Y_[b].size(); ++q) Y_[b][q] += R(ad) * dY[b][q];
    }
    return true;
  }
};

}  // namespace conic

// Rigorous upper bound from an approximate dual: clip the dual blocks to
// the PSD cone (with an explicit margin shift), absorb what the diagonal
// multipliers can absorb, then charge the remaining dual residual against
// the variable upper bound.  Returns nullopt when the residuals are too
// large to correct.
inline std::optional<double> certify_upper_bound(const SdpProblem& p,
                                                 const std::vector<std::vector<double>>& Y) {
  std::size_t nb = p.blocks.size();
  bool has_diag = p.nonneg_all && p.num_vars() > 0;
  if (Y.size() != nb + (has_diag ? 1 : 0))
    throw std::invalid_argument("certify_upper_bound: dual block count mismatch");
  // PSD projection with margin
  std::vector<std::vector<dd>> Yc(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    int s = p.blocks[b].dim;
    std::vector<double> evals, V;
    linalg::eigh(Y[b], s, evals, V);
    double maxabs = 0;
    for (double e : evals) maxabs = std::max(maxabs, std::fabs(e));
    double margin = 8.0 * s * 2.22e-16 * maxabs;
    Yc[b].assign(std::size_t(s) * s, dd(0.0));
    for (int t = 0; t < s; ++t) {
      double lam = std::max(0.0, evals[t]);
      if (lam == 0.0) continue;
      for (int j = 0; j < s; ++j) {
        dd vj = dd(V[std::size_t(t) * s + j] * lam);
        for (int i = 0; i < s; ++i) Yc[b][std::size_t(j) * s + i] += dd(V[std::size_t(t) * s + i]) * vj;
      }
    }
    for (int i = 0; i < s; ++i) Yc[b][std::size_t(i) * s + i] += dd(margin);
  }
  std::vector<dd> eta(p.num_vars(), dd(0.0));
  if (has_diag)
    for (int j = 0; j < p.num_vars(); ++j) eta[j] = dd(std::max(0.0, Y.back()[j]));
  // dual objective  -tr(F0 Y) = tr(C Y)  and residuals r_j = c_j - tr(F_j Y)
  dd dual_obj(0.0);
  std::vector<dd> r(p.num_vars(), dd(0.0));
  for (int j = 0; j < p.num_vars(); ++j) r[j] = dd(-p.objective[j]) - eta[j];
  for (std::size_t b = 0; b < nb; ++b) {
    int s = p.blocks[b].dim;
    auto dot = [&](const SparseSym& M) {
      dd acc(0.0);
      for (const auto& t : M.entries) {
        dd v = t.v * Yc[b][std::size_t(t.c) * s + t.r];
        acc += (t.r == t.c) ? v : v * dd(2.0);
      }
      return acc;
    };
    dual_obj += dot(p.blocks[b].constant);
    for (const auto& [var, mat] : p.blocks[b].coeff) r[var] -= dot(mat);
  }
  // absorb into eta, then charge the rest against x_j <= u
  dd corr(0.0);
  for (int j = 0; j < p.num_vars(); ++j) {
    dd t = eta[j] + r[j];  // leftover residual after re-choosing eta_j = max(0, eta_j + r_j)
    if (t < dd(0.0)) {
      if (p.var_upper_bound <= 0.0) return std::nullopt;  // no valid bound to charge against
      corr += (-t) * dd(p.var_upper_bound);
    }
  }
  double bound = (dual_obj + corr).to_double() + p.objective_offset;
  return bound;
}

// Spec-facing solve: builds the cone form at the requested precision,
// runs the interior-point iteration, optionally certifies.
inline SolveResult solve(const SdpProblem& p, const SolverOptions& opt = {}) {
  double min_tol = opt.precision == Precision::F64 ? 1e-12 : 1e-20;
  if (opt.tol < min_tol) throw std::invalid_argument("solve: tol below precision floor");
  SolveResult res;
  std::vector<std::vector<double>> Yd;
  if (opt.precision == Precision::F64) {
    auto cone = conic::build_cone<double>(p);
    conic::InteriorPoint<double> ip(cone, opt);
    auto sol = ip.run();
    res = sol.res;
    Yd = std::move(sol.Y);
  } else {
    auto cone = conic::build_cone<dd>(p);
    conic::InteriorPoint<dd> ip(cone, opt);
    auto sol = ip.run();
    res = sol.res;
    Yd.resize(sol.Y.size());
    for (std::size_t b = 0; b < sol.Y.size(); ++b) {
      Yd[b].resize(sol.Y[b].size());
      for (std::size_t q = 0; q < sol.Y[b].size(); ++q) Yd[b][q] = sol.Y[b][q].to_double();
    }
  }
  res.primal_value += p.objective_offset;
  res.dual_value += p.objective_offset;
  if (opt.certify) res.certified_upper_bound = certify_upper_bound(p, Yd);
  return res;
}

}  // namespace codebound
