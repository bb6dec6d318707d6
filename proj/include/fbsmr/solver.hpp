// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

/// \file solver.hpp
/// \brief Right-preconditioned minimal-residual solvers.
///
/// One restarted Krylov core serves two entry points.  `fbsmr` runs with
/// stabilization on: the preconditioner is applied in binary32, the Krylov
/// machinery (Arnoldi, Givens QR, projected back substitution) stays in
/// working precision, and exactly four operations run in the extended tier:
/// the solution holder, the matrix-vector products feeding Arnoldi, the
/// block solution update, and the true residual.  `rp_gmres` is the same
/// loop with every tier forced to working precision.
///
/// Convergence is always decided on the true residual of the extended (or
/// working, for rp_gmres) iterate at block boundaries, measured against
/// ||b||; the rotated-RHS estimate only decides when to end an inner block.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fbsmr/kernels.hpp"
#include "fbsmr/matrix.hpp"
#include "fbsmr/precond.hpp"
#include "fbsmr/scalar.hpp"

namespace fbsmr {

enum class Orth { Mgs, Cgs };
enum class InitGuess { PrecondRhs, Zero };
enum class SolveStatus { Converged, MaxIterations, Stagnated, Diverged };

struct SolverConfig {
  double tol = 10.0 * std::numeric_limits<double>::epsilon() / 2.0;
  int restart = 30;
  int maxit = 500;
  Orth orth = Orth::Mgs;
  InitGuess init_guess = InitGuess::PrecondRhs;
  bool stabilized = true;

  void validate() const {
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("SolverConfig: tol must be in (0,1)");
    if (restart < 1 || maxit < restart)
      throw std::invalid_argument("SolverConfig: need 1 <= restart <= maxit");
  }
};

struct HistoryRecord {
  int it = 0;
  double est_rel_res = 0.0;   // |g_{k+1}| / ||b||
  double true_rel_res = std::numeric_limits<double>::quiet_NaN();  // at block ends only
  bool restart_boundary = false;
};

template <class T>
struct SolveReport {
  Vector<T> x_hat;
  ExtendedVector<T> x_tilde;
  double gamma = 0.0;  // ||b - A x~|| / ||b|| of the returned iterate
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  int restarts = 0;
  std::vector<HistoryRecord> history;
};

// ---------------------------------------------------------------------------
// Givens machinery
// ---------------------------------------------------------------------------

template <class T>
struct GivensRotation {
  double c = 1.0;  // real by construction
  T s = T(0);
  T r = T(0);
};

/// Rotation annihilating the real nonnegative beta under a:
/// [c, s; -conj(s), c] [a; beta] = [r; 0] with r = sign(a) * hypot(|a|, beta).
template <class T>
GivensRotation<T> givens_rotation(const T& a, double beta) {
  GivensRotation<T> g;
  const double amag = abs_of(a);
  if (amag == 0.0 && beta == 0.0) return g;  // c=1, s=0, r=0
  const double r0 = std::hypot(amag, beta);
  const T sgn = sign_of(a);
  g.c = amag / r0;
  g.s = sgn * T(beta / r0);
  g.r = sgn * T(r0);
  return g;
}

template <class T>
struct KrylovWorkspace {
  std::vector<Vector<T>> q_basis;   // test-space vectors q_0..q_k
  std::vector<Vector<T>> z_basis;   // trial-space vectors z_1..z_k
  std::vector<Vector<T>> r_cols;    // column k holds R(0..k, k), diagonal last
  Vector<T> g;                      // rotated beta*e_1
  struct StoredRotation {
    double c = 1.0;
    T s = T(0);
    T phase = T(1);  // folded into the top row so the R diagonal stays real >= 0
  };
  std::vector<StoredRotation> rotations;

  void reset(Vector<T> q0, double beta, int restart) {
    q_basis.clear();
    z_basis.clear();
    r_cols.clear();
    rotations.clear();
    q_basis.push_back(std::move(q0));
    g.assign(static_cast<std::size_t>(restart) + 1, T(0));
    g[0] = T(beta);
  }
};

class SingularProjectedSystemError : public std::runtime_error {
 public:
  SingularProjectedSystemError() : std::runtime_error("projected system has a zero diagonal") {}
};

/// Applies the stored rotations to the new Hessenberg column [h; alpha],
/// generates and stores the k-th rotation, updates g, and returns the
/// quasi-residual |g_{k+1}|.
template <class T>
double hessenberg_update(KrylovWorkspace<T>& ws, const Vector<T>& h, double alpha) {
  const std::size_t k = ws.rotations.size();  // 0-based index of the new column
  if (h.size() != k + 1) throw std::invalid_argument("hessenberg_update: column length mismatch");

  Vector<T> col = h;
  for (std::size_t j = 0; j < k; ++j) {
    const auto& rot = ws.rotations[j];
    const T top = conj_of(rot.phase) * (T(rot.c) * col[j] + rot.s * col[j + 1]);
    const T bot = -conj_of(rot.s) * col[j] + T(rot.c) * col[j + 1];
    col[j] = top;
    col[j + 1] = bot;
  }

  const GivensRotation<T> rot_k = givens_rotation(col[k], alpha);
  const T phase = sign_of(col[k]);
  // conj(phase) * r = |r|, keeping the diagonal real nonnegative.
  col[k] = conj_of(phase) * rot_k.r;

  const T gk = ws.g[k];
  const T gk1 = ws.g[k + 1];
  ws.g[k] = conj_of(phase) * (T(rot_k.c) * gk + rot_k.s * gk1);
  ws.g[k + 1] = -conj_of(rot_k.s) * gk + T(rot_k.c) * gk1;

  ws.rotations.push_back({rot_k.c, rot_k.s, phase});
  ws.r_cols.push_back(std::move(col));
  return abs_of(ws.g[k + 1]);
}

/// y = R(1:k,1:k)^{-1} g(1:k) in working precision.
template <class T>
Vector<T> back_substitute(const KrylovWorkspace<T>& ws, std::size_t k) {
  Vector<T> y(k);
  for (std::size_t ii = k; ii-- > 0;) {
    T s = ws.g[ii];
    for (std::size_t j = ii + 1; j < k; ++j) s -= ws.r_cols[j][ii] * y[j];
    const T diag = ws.r_cols[ii][ii];
    if (abs_of(diag) == 0.0) throw SingularProjectedSystemError();
    y[ii] = s / diag;
  }
  return y;
}

// ---------------------------------------------------------------------------
// Arnoldi
// ---------------------------------------------------------------------------

template <class T>
struct ArnoldiResult {
  Vector<T> h;        // projections onto the existing basis
  double alpha = 0.0; // norm of the orthogonalized remainder
  Vector<T> q_next;   // empty on breakdown
  bool breakdown = false;
};

/// One orthogonalization step; CGS projects against the original vector in a
/// single pass, MGS updates sequentially.
template <class T>
ArnoldiResult<T> arnoldi_step(const std::vector<Vector<T>>& q_basis, Vector<T> w, Orth orth) {
  ArnoldiResult<T> out;
  const std::size_t k = q_basis.size();
  out.h.resize(k);
  if (orth == Orth::Cgs) {
    for (std::size_t j = 0; j < k; ++j) out.h[j] = dot(q_basis[j], w);
    for (std::size_t j = 0; j < k; ++j) axpy(w, -out.h[j], q_basis[j]);
  } else {
    for (std::size_t j = 0; j < k; ++j) {
      out.h[j] = dot(q_basis[j], w);
      axpy(w, -out.h[j], q_basis[j]);
    }
  }
  out.alpha = norm2(w);
  if (!(out.alpha >= std::numeric_limits<double>::min()) && std::isfinite(out.alpha)) {
    out.breakdown = true;  // exact or subnormal alpha: the space is invariant
    return out;
  }
  scale(w, 1.0 / out.alpha);
  out.q_next = std::move(w);
  return out;
}

// ---------------------------------------------------------------------------
// Restarted solver core
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
bool all_finite(const Vector<T>& v) {
  for (const T& e : v)
    if (!isfinite_scalar(e)) return false;
  return true;
}

// The four boxed operations, switched between the extended and working tiers.

template <class Mat, class T>
std::pair<Vector<T>, double> boxed_residual(const Mat& a, const Vector<T>& b,
                                            const ExtendedVector<T>& xt, bool stabilized) {
  if (stabilized) return residual_extended(a, b, xt);
  Vector<T> ax = matvec(a, to_working<T>(xt));
  Vector<T> r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - ax[i];
  const double beta = norm2(r);
  return {std::move(r), beta};
}

template <class Mat, class T>
Vector<T> boxed_matvec(const Mat& a, const Vector<T>& z, bool stabilized) {
  if (stabilized) return to_working<T>(matvec_extended(a, z));
  return matvec(a, z);
}

template <class T>
void boxed_solution_update(ExtendedVector<T>& xt, const std::vector<Vector<T>>& z_cols,
                           const Vector<T>& y, bool stabilized) {
  if (stabilized) {
    axpy_extended(xt, z_cols, y);
    return;
  }
  Vector<T> x = to_working<T>(xt);
  for (std::size_t j = 0; j < y.size(); ++j) axpy(x, y[j], z_cols[j]);
  xt = to_extended<T>(x);
}

template <class Mat>
SolveReport<typename Mat::value_type> solve_core(const Mat& a,
                                                 const Vector<typename Mat::value_type>& b,
                                                 const LowPrecFactorization<typename Mat::value_type>& m,
                                                 const SolverConfig& cfg) {
  using T = typename Mat::value_type;
  cfg.validate();
  if (a.n_rows() != a.n_cols()) throw std::invalid_argument("solve: matrix must be square");
  if (a.n_rows() != b.size() || m.n != b.size())
    throw std::invalid_argument("solve: dimension mismatch");
  const std::size_t n = b.size();

  SolveReport<T> report;
  const double beta0 = norm2(b);
  if (beta0 == 0.0) {
    report.x_hat.assign(n, T(0));
    report.x_tilde.assign(n, ExtendedOf<T>{});
    report.gamma = 0.0;
    report.converged = true;
    report.status = SolveStatus::Converged;
    report.history.push_back({0, 0.0, 0.0, false});
    return report;
  }

  ExtendedVector<T> xt(n);
  if (cfg.init_guess == InitGuess::PrecondRhs) {
    const Vector<T> x0 = apply_inverse(m, b);
    for (std::size_t i = 0; i < n; ++i) xt[i] = ext_from(x0[i]);
  }

  auto [r, beta] = boxed_residual(a, b, xt, cfg.stabilized);
  double gamma = beta / beta0;
  report.history.push_back({0, gamma, gamma, false});

  const auto finish = [&](SolveStatus status, ExtendedVector<T>&& x, double g) {
    report.status = status;
    report.converged = status == SolveStatus::Converged;
    report.gamma = g;
    report.x_hat = to_working<T>(x);
    report.x_tilde = std::move(x);
    return std::move(report);
  };

  if (!std::isfinite(gamma)) return finish(SolveStatus::Diverged, std::move(xt), gamma);
  if (gamma <= cfg.tol) return finish(SolveStatus::Converged, std::move(xt), gamma);

  ExtendedVector<T> best_x = xt;
  double best_gamma = gamma;
  int stagnant_restarts = 0;
  int it = 0;
  int blocks = 0;
  KrylovWorkspace<T> ws;

  while (it < cfg.maxit) {
    Vector<T> q0 = r;
    scale(q0, 1.0 / beta);
    ws.reset(std::move(q0), beta, cfg.restart);
    ++blocks;

    bool diverged = false;
    for (int k = 1; k <= cfg.restart && it < cfg.maxit; ++k) {
      ++it;
      Vector<T> z = apply_inverse(m, ws.q_basis.back());
      Vector<T> w = boxed_matvec(a, z, cfg.stabilized);
      ws.z_basis.push_back(std::move(z));
      if (!all_finite(w)) {
        diverged = true;
        break;
      }
      ArnoldiResult<T> ar = arnoldi_step(ws.q_basis, std::move(w), cfg.orth);
      const double quasi = hessenberg_update(ws, ar.h, ar.alpha);
      const double est = quasi / beta0;
      report.history.push_back({it, est, std::numeric_limits<double>::quiet_NaN(), false});
      if (!std::isfinite(quasi)) {
        diverged = true;
        break;
      }
      if (quasi <= cfg.tol * beta0) break;
      if (ar.breakdown) break;
      if (k < cfg.restart && it < cfg.maxit) ws.q_basis.push_back(std::move(ar.q_next));
    }
    report.iterations = it;
    report.restarts = blocks - 1;
    if (diverged) return finish(SolveStatus::Diverged, std::move(best_x), best_gamma);

    // Block solve: projected system in working precision, then the boxed
    // solution/residual updates.
    const std::size_t k_cols = ws.z_basis.size();
    if (k_cols > 0) {
      try {
        const Vector<T> y = back_substitute(ws, k_cols);
        boxed_solution_update(xt, ws.z_basis, y, cfg.stabilized);
      } catch (const SingularProjectedSystemError&) {
        // Degenerate block: keep the iterate and let the restart logic decide.
      }
    }
    std::tie(r, beta) = boxed_residual(a, b, xt, cfg.stabilized);
    gamma = beta / beta0;
    report.history.back().true_rel_res = gamma;
    report.history.back().restart_boundary = true;
    if (!std::isfinite(gamma)) return finish(SolveStatus::Diverged, std::move(best_x), best_gamma);
    if (gamma <= cfg.tol) return finish(SolveStatus::Converged, std::move(xt), gamma);
    if (gamma < best_gamma) {
      best_gamma = gamma;
      best_x = xt;
      stagnant_restarts = 0;
    } else {
      ++stagnant_restarts;
      if (stagnant_restarts >= 3)
        return finish(SolveStatus::Stagnated, std::move(best_x), best_gamma);
    }
  }
  return finish(SolveStatus::MaxIterations, std::move(best_x), best_gamma);
}

}  // namespace detail

/// Stabilized solver: extended-tier gaxpy/residual/update, binary32
/// preconditioner, working-precision quasi-minimization.
template <class Mat>
SolveReport<typename Mat::value_type> solve_fbsmr(
    const Mat& a, const Vector<typename Mat::value_type>& b,
    const LowPrecFactorization<typename Mat::value_type>& m, SolverConfig cfg = {}) {
  return detail::solve_core(a, b, m, cfg);
}

/// Right-preconditioned GMRES baseline: identical loop with every tier in
/// working precision; the reported gamma is the recomputed true residual,
/// not the rotated-RHS estimate.
template <class Mat>
SolveReport<typename Mat::value_type> solve_rp_gmres(
    const Mat& a, const Vector<typename Mat::value_type>& b,
    const LowPrecFactorization<typename Mat::value_type>& m, SolverConfig cfg = {}) {
  cfg.stabilized = false;
  return detail::solve_core(a, b, m, cfg);
}

}  // namespace fbsmr
