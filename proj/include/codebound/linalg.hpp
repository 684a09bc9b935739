#pragma once

// Dense symmetric kernels templated on the scalar (double or dd).  The
// double instantiations call LAPACK/CBLAS; the dd instantiations fall back
// to straightforward loops, which is fine at the block sizes where the
// double-double path is actually exercised.
//
// Matrices are column-major full-storage; symmetric inputs keep both
// triangles filled.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <cblas.h>
#include <lapacke.h>

#include "codebound/dd.hpp"

namespace codebound::linalg {

template <class R>
using Vec = std::vector<R>;

template <class R>
inline void set_identity(Vec<R>& A, int n, R scale) {
  A.assign(std::size_t(n) * n, R(0.0));
  for (int i = 0; i < n; ++i) A[std::size_t(i) * n + i] = scale;
}

template <class R>
inline void symmetrize(Vec<R>& A, int n) {
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) {
      R v = (A[std::size_t(j) * n + i] + A[std::size_t(i) * n + j]) * R(0.5);
      A[std::size_t(j) * n + i] = v;
      A[std::size_t(i) * n + j] = v;
    }
}

// tr(A*B) for symmetric A, B
template <class R>
inline R trace_dot(const Vec<R>& A, const Vec<R>& B, int n) {
  R s(0.0);
  for (std::size_t k = 0; k < std::size_t(n) * n; ++k) s += A[k] * B[k];
  return s;
}

template <class R>
inline R max_abs(const Vec<R>& A) {
  R m(0.0);
  for (const R& v : A) {
    R a = real_traits<R>::abs(v);
    if (m < a) m = a;
  }
  return m;
}

template <class R>
inline R frob_norm(const Vec<R>& A) {
  R s(0.0);
  for (const R& v : A) s += v * v;
  return real_traits<R>::sqrt(s);
}

// C = A * B (square)
template <class R>
inline void gemm(const Vec<R>& A, const Vec<R>& B, Vec<R>& C, int n) {
  C.assign(std::size_t(n) * n, R(0.0));
  if constexpr (std::is_same_v<R, double>) {
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, n, n, 1.0, A.data(), n, B.data(), n,
                0.0, C.data(), n);
  } else {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        R bkj = B[std::size_t(j) * n + k];
        if (bkj == R(0.0)) continue;
        const R* acol = &A[std::size_t(k) * n];
        R* ccol = &C[std::size_t(j) * n];
        for (int i = 0; i < n; ++i) ccol[i] += acol[i] * bkj;
      }
  }
}

// In-place lower Cholesky; returns false if the matrix is not numerically PD.
template <class R>
inline bool cholesky_inplace(Vec<R>& A, int n) {
  if constexpr (std::is_same_v<R, double>) {
    int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, A.data(), n);
    return info == 0;
  } else {
    for (int j = 0; j < n; ++j) {
      R d = A[std::size_t(j) * n + j];
      for (int k = 0; k < j; ++k) {
        R l = A[std::size_t(k) * n + j];
        d -= l * l;
      }
      if (!(d > R(0.0))) return false;
      d = real_traits<R>::sqrt(d);
      A[std::size_t(j) * n + j] = d;
      for (int i = j + 1; i < n; ++i) {
        R s = A[std::size_t(j) * n + i];
        for (int k = 0; k < j; ++k) s -= A[std::size_t(k) * n + i] * A[std::size_t(k) * n + j];
        A[std::size_t(j) * n + i] = s / d;
      }
    }
    return true;
  }
}

// B := L^{-1} B, L lower from cholesky_inplace (n x n), B is n x ncols
template <class R>
inline void forward_solve_inplace(const Vec<R>& L, Vec<R>& B, int n, int ncols) {
  if constexpr (std::is_same_v<R, double>) {
    cblas_dtrsm(CblasColMajor, CblasLeft, CblasLower, CblasNoTrans, CblasNonUnit, n, ncols, 1.0,
                L.data(), n, B.data(), n);
  } else {
    for (int c = 0; c < ncols; ++c) {
      R* b = &B[std::size_t(c) * n];
      for (int i = 0; i < n; ++i) {
        R s = b[i];
        for (int k = 0; k < i; ++k) s -= L[std::size_t(k) * n + i] * b[k];
        b[i] = s / L[std::size_t(i) * n + i];
      }
    }
  }
}

// B := L^{-T} B
template <class R>
inline void backward_solve_inplace(const Vec<R>& L, Vec<R>& B, int n, int ncols) {
  if constexpr (std::is_same_v<R, double>) {
    cblas_dtrsm(CblasColMajor, CblasLeft, CblasLower, CblasTrans, CblasNonUnit, n, ncols, 1.0,
                L.data(), n, B.data(), n);
  } else {
    for (int c = 0; c < ncols; ++c) {
      R* b = &B[std::size_t(c) * n];
      for (int i = n - 1; i >= 0; --i) {
        R s = b[i];
        for (int k = i + 1; k < n; ++k) s -= L[std::size_t(i) * n + k] * b[k];
        b[i] = s / L[std::size_t(i) * n + i];
      }
    }
  }
}

// SPD inverse from the original matrix (copies, factors, inverts).
template <class R>
inline bool inverse_spd(Vec<R> A, Vec<R>& Ainv, int n) {
  if constexpr (std::is_same_v<R, double>) {
    int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, A.data(), n);
    if (info != 0) return false;
    info = LAPACKE_dpotri(LAPACK_COL_MAJOR, 'L', n, A.data(), n);
    if (info != 0) return false;
    for (int j = 0; j < n; ++j)
      for (int i = j; i < n; ++i) A[std::size_t(i) * n + j] = A[std::size_t(j) * n + i];
    Ainv = std::move(A);
    return true;
  } else {
    if (!cholesky_inplace(A, n)) return false;
    // columns of the identity, solved in place
    set_identity(Ainv, n, R(1.0));
    forward_solve_inplace(A, Ainv, n, n);
    backward_solve_inplace(A, Ainv, n, n);
    symmetrize(Ainv, n);
    return true;
  }
}

// Symmetric eigendecomposition, eigenvalues ascending; V column-major
// holds eigenvectors in columns.  double -> LAPACK, dd -> cyclic Jacobi.
template <class R>
inline void eigh(Vec<R> A, int n, Vec<R>& evals, Vec<R>& V) {
  if constexpr (std::is_same_v<R, double>) {
    evals.assign(n, 0.0);
    int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, A.data(), n, evals.data());
    if (info != 0) throw std::runtime_error("eigh: LAPACK dsyevd failed");
    V = std::move(A);
  } else {
    V.assign(std::size_t(n) * n, R(0.0));
    for (int i = 0; i < n; ++i) V[std::size_t(i) * n + i] = R(1.0);
    auto off = [&]() {
      R s(0.0);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          if (i != j) s += A[std::size_t(j) * n + i] * A[std::size_t(j) * n + i];
      return s;
    };
    R scale = max_abs(A);
    if (!(scale > R(0.0))) scale = R(1.0);
    R tol = scale * scale * R(real_traits<R>::eps()) * R(real_traits<R>::eps()) * R(double(n) * n);
    for (int sweep = 0; sweep < 60 && off() > tol; ++sweep) {
      for (int p = 0; p < n - 1; ++p)
        for (int q = p + 1; q < n; ++q) {
          R apq = A[std::size_t(q) * n + p];
          if (real_traits<R>::abs(apq) == R(0.0)) continue;
          R app = A[std::size_t(p) * n + p], aqq = A[std::size_t(q) * n + q];
          R theta = (aqq - app) / (R(2.0) * apq);
          R t = R(1.0) / (real_traits<R>::abs(theta) + real_traits<R>::sqrt(theta * theta + R(1.0)));
          if (theta < R(0.0)) t = -t;
          R c = R(1.0) / real_traits<R>::sqrt(t * t + R(1.0));
          R s = t * c;
          for (int k = 0; k < n; ++k) {
            R akp = A[std::size_t(p) * n + k], akq = A[std::size_t(q) * n + k];
            A[std::size_t(p) * n + k] = c * akp - s * akq;
            A[std::size_t(q) * n + k] = s * akp + c * akq;
          }
          for (int k = 0; k < n; ++k) {
            R apk = A[std::size_t(k) * n + p], aqk = A[std::size_t(k) * n + q];
            A[std::size_t(k) * n + p] = c * apk - s * aqk;
            A[std::size_t(k) * n + q] = s * apk + c * aqk;
          }
          for (int k = 0; k < n; ++k) {
            R vkp = V[std::size_t(p) * n + k], vkq = V[std::size_t(q) * n + k];
            V[std::size_t(p) * n + k] = c * vkp - s * vkq;
            V[std::size_t(q) * n + k] = s * vkp + c * vkq;
          }
        }
    }
    evals.assign(n, R(0.0));
    for (int i = 0; i < n; ++i) evals[i] = A[std::size_t(i) * n + i];
    // sort ascending along with columns of V
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return evals[a] < evals[b]; });
    Vec<R> ev2(n), V2(std::size_t(n) * n);
    for (int i = 0; i < n; ++i) {
      ev2[i] = evals[order[i]];
      for (int k = 0; k < n; ++k) V2[std::size_t(i) * n + k] = V[std::size_t(order[i]) * n + k];
    }
    evals = std::move(ev2);
    V = std::move(V2);
  }
}

// Smallest eigenvalue of a symmetric matrix, cheap estimate via power
// iteration on (c*I - S).  May overestimate; callers that need a safe
// step length verify with a Cholesky afterwards.
template <class R>
inline R min_eig_estimate(const Vec<R>& S, int n, int iters = 80) {
  if (n == 0) return R(0.0);
  if (n == 1) return S[0];
  R c = frob_norm(S);
  if (!(c > R(0.0))) return R(0.0);
  Vec<R> v(n), w(n);
  for (int i = 0; i < n; ++i) v[i] = R(1.0 + 0.01 * ((i * 2654435761u) % 97));
  R lam(0.0);
  for (int it = 0; it < iters; ++it) {
    // w = (c I - S) v
    for (int i = 0; i < n; ++i) w[i] = c * v[i];
    for (int j = 0; j < n; ++j) {
      R vj = v[j];
      const R* col = &S[std::size_t(j) * n];
      for (int i = 0; i < n; ++i) w[i] -= col[i] * vj;
    }
    R nrm(0.0);
    for (int i = 0; i < n; ++i) nrm += w[i] * w[i];
    nrm = real_traits<R>::sqrt(nrm);
    if (!(nrm > R(0.0))) return R(0.0);
    for (int i = 0; i < n; ++i) v[i] = w[i] / nrm;
    lam = nrm;  // Rayleigh-like estimate of lambda_max(cI - S)
  }
  return c - lam;
}

}  // namespace codebound::linalg
