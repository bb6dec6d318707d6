// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

/// \file analysis.hpp
/// \brief Conditioning toolkit: dense SVD, per-instance condition numbers,
/// pollution-correlation measure, stability verdicts, and the extended-tier
/// direct solve used as the forward-error reference.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fbsmr/kernels.hpp"
#include "fbsmr/matrix.hpp"
#include "fbsmr/scalar.hpp"
#include "fbsmr/solver.hpp"

namespace fbsmr {

class SvdNoConvergenceError : public std::runtime_error {
 public:
  explicit SvdNoConvergenceError(int sweeps)
      : std::runtime_error("one-sided Jacobi SVD did not converge after " +
                           std::to_string(sweeps) + " sweeps") {}
};

struct SvdOptions {
  int max_sweeps = 30;
  double tol = 10.0 * kEps;
  std::size_t dense_limit = 2000;
};

template <class T>
struct SvdResult {
  DenseMatrix<T> u;
  DenseMatrix<T> v;
  Vector<double> sigma;  // nonincreasing, nonnegative
  int sweeps = 0;
};

/// One-sided Jacobi SVD; high relative accuracy for small singular values,
/// which the geometric spectra here need.  Accepts m >= n.
template <class T>
SvdResult<T> svd_jacobi(const DenseMatrix<T>& a, const SvdOptions& opts = {}) {
  const std::size_t m = a.n_rows();
  const std::size_t n = a.n_cols();
  if (m < n) throw std::invalid_argument("svd_jacobi: need n_rows >= n_cols");
  if (n > opts.dense_limit) throw std::invalid_argument("svd_jacobi: dimension above dense limit");

  DenseMatrix<T> g = a;
  DenseMatrix<T> v = DenseMatrix<T>::identity(n);

  int sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double aii = 0.0, ajj = 0.0;
        T aij(0);
        for (std::size_t k = 0; k < m; ++k) {
          const T gi = g(k, i), gj = g(k, j);
          aii += abs_of(gi) * abs_of(gi);
          ajj += abs_of(gj) * abs_of(gj);
          aij += conj_of(gi) * gj;
        }
        const double off = abs_of(aij);
        if (off <= opts.tol * std::sqrt(aii) * std::sqrt(ajj)) continue;
        rotated = true;

        const T phase = sign_of(aij);
        const double zeta = (ajj - aii) / (2.0 * off);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const T js = T(s) * phase;
        for (std::size_t k = 0; k < m; ++k) {
          const T gi = g(k, i), gj = g(k, j);
          g(k, i) = T(c) * gi - conj_of(js) * gj;
          g(k, j) = js * gi + T(c) * gj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const T vi = v(k, i), vj = v(k, j);
          v(k, i) = T(c) * vi - conj_of(js) * vj;
          v(k, j) = js * vi + T(c) * vj;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == opts.max_sweeps) throw SvdNoConvergenceError(opts.max_sweeps);

  SvdResult<T> out;
  out.sweeps = sweep + 1;
  out.sigma.resize(n);
  out.u = DenseMatrix<T>(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    double norm = 0.0;
    {
      Vector<T> col(m);
      for (std::size_t k = 0; k < m; ++k) col[k] = g(k, j);
      norm = norm2(col);
    }
    out.sigma[j] = norm;
    if (norm > 0.0)
      for (std::size_t k = 0; k < m; ++k) out.u(k, j) = g(k, j) / T(norm);
  }

  // Sort descending, permuting U and V columns along.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::stable_sort(order.begin(), order.end(),
                   [&out](std::size_t x, std::size_t y) { return out.sigma[x] > out.sigma[y]; });
  SvdResult<T> sorted;
  sorted.sweeps = out.sweeps;
  sorted.sigma.resize(n);
  sorted.u = DenseMatrix<T>(m, n);
  sorted.v = DenseMatrix<T>(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    sorted.sigma[j] = out.sigma[src];
    for (std::size_t k = 0; k < m; ++k) sorted.u(k, j) = out.u(k, src);
    for (std::size_t k = 0; k < n; ++k) sorted.v(k, j) = v(k, src);
  }
  return sorted;
}

// ---------------------------------------------------------------------------
// Intrinsic condition numbers
// ---------------------------------------------------------------------------

template <class T>
struct ConditioningReport {
  double kappa_a = 0.0;
  double kappa_db = 0.0;
  double kappa_dx = 0.0;
  Vector<T> coeffs;        // c with b = ||b|| sum c_i u_i
  bool beyond_tier = false;  // sigma_n below 10 eps sigma_1
};

namespace detail {

template <class T>
Vector<double> coefficient_magnitudes(const SvdResult<T>& svd, const Vector<T>& b) {
  const std::size_t n = svd.sigma.size();
  if (b.size() != svd.u.n_rows()) throw std::invalid_argument("conditioning: dimension mismatch");
  const double bnorm = norm2(b);
  if (bnorm == 0.0) throw std::invalid_argument("conditioning: b must be nonzero");
  Vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) {
    T acc(0);
    for (std::size_t k = 0; k < b.size(); ++k) acc += conj_of(svd.u(k, j)) * b[k];
    c[j] = abs_of(acc) / bnorm;
  }
  return c;
}

}  // namespace detail

/// kappa_db = 1 / sqrt(sum |c_i sigma_n / sigma_i|^2): sensitivity of
/// x = A^{-1} b to perturbations of this particular b.
template <class T>
double kappa_delta_b(const SvdResult<T>& svd, const Vector<T>& b) {
  const Vector<double> c = detail::coefficient_magnitudes(svd, b);
  const std::size_t n = c.size();
  const double sn = svd.sigma[n - 1];
  if (sn <= 0.0) throw std::invalid_argument("kappa_delta_b: singular matrix");
  Vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i] = c[i] * (sn / svd.sigma[i]);
  return 1.0 / norm2(terms);
}

/// kappa_dx = sqrt(sum |c_i sigma_1 / sigma_i|^2): sensitivity of the
/// inverse problem A x to perturbations of x, expressed through b.
template <class T>
double kappa_delta_x(const SvdResult<T>& svd, const Vector<T>& b) {
  const Vector<double> c = detail::coefficient_magnitudes(svd, b);
  const std::size_t n = c.size();
  const double s1 = svd.sigma[0];
  if (svd.sigma[n - 1] <= 0.0) throw std::invalid_argument("kappa_delta_x: singular matrix");
  Vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i] = c[i] * (s1 / svd.sigma[i]);
  return norm2(terms);
}

template <class T>
double kappa_delta_b(const DenseMatrix<T>& a, const Vector<T>& b) {
  return kappa_delta_b(svd_jacobi(a), b);
}

template <class T>
double kappa_delta_x(const DenseMatrix<T>& a, const Vector<T>& b) {
  return kappa_delta_x(svd_jacobi(a), b);
}

template <class T>
ConditioningReport<T> conditioning_report(const SvdResult<T>& svd, const Vector<T>& b) {
  ConditioningReport<T> rep;
  const std::size_t n = svd.sigma.size();
  rep.kappa_a = svd.sigma[0] / svd.sigma[n - 1];
  rep.kappa_db = kappa_delta_b(svd, b);
  rep.kappa_dx = kappa_delta_x(svd, b);
  rep.beyond_tier = svd.sigma[n - 1] < 10.0 * kEps * svd.sigma[0];
  const double bnorm = norm2(b);
  rep.coeffs.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    T acc(0);
    for (std::size_t k = 0; k < b.size(); ++k) acc += conj_of(svd.u(k, j)) * b[k];
    rep.coeffs[j] = acc / T(bnorm);
  }
  return rep;
}

/// Deviation of the identity kappa_db * kappa_dx = kappa(A); returns
/// |kappa_db kappa_dx / kappa(A) - 1|.
template <class T>
double conservation_check(const DenseMatrix<T>& a, const Vector<T>& b) {
  const SvdResult<T> svd = svd_jacobi(a);
  const double kappa = svd.sigma[0] / svd.sigma[svd.sigma.size() - 1];
  return std::fabs(kappa_delta_b(svd, b) * kappa_delta_x(svd, b) / kappa - 1.0);
}

// ---------------------------------------------------------------------------
// Pollution correlation
// ---------------------------------------------------------------------------

enum class Correlation { Strong, Weak, Uncorrelated };

struct CorrelationResult {
  double rho = 0.0;
  Correlation cls = Correlation::Strong;
};

/// rho = ||dA x|| / ||b|| evaluated with extended accumulation.  Strong when
/// rho stays at working roundoff, uncorrelated when it scales like
/// kappa(A) eps; the 1e2 and 0.1 factors pin down the asymptotic classes.
template <class Mat, class T>
CorrelationResult correlation_measure(const Mat& delta_a, const Vector<T>& x, const Vector<T>& b,
                                      double kappa_a) {
  const double bnorm = norm2(b);
  if (bnorm == 0.0) throw std::invalid_argument("correlation_measure: b must be nonzero");
  CorrelationResult out;
  out.rho = norm2(to_working<T>(matvec_extended(delta_a, x))) / bnorm;
  if (out.rho <= 1e2 * kEps)
    out.cls = Correlation::Strong;
  else if (kappa_a > 0.0 && out.rho >= 0.1 * kappa_a * kEps)
    out.cls = Correlation::Uncorrelated;
  else
    out.cls = Correlation::Weak;
  return out;
}

template <class Mat, class T>
CorrelationResult correlation_measure(const Mat& delta_a, const Vector<T>& x, const Vector<T>& b,
                                      const DenseMatrix<T>& a) {
  const SvdResult<T> svd = svd_jacobi(a);
  return correlation_measure(delta_a, x, b, svd.sigma[0] / svd.sigma[svd.sigma.size() - 1]);
}

// ---------------------------------------------------------------------------
// Extended-tier direct solve (forward-error reference)
// ---------------------------------------------------------------------------

namespace detail {

inline double ext_pivot_magnitude(const DDouble& x) { return std::fabs(x.hi); }
inline double ext_pivot_magnitude(const DDComplex& z) {
  return std::fabs(z.re.hi) + std::fabs(z.im.hi);
}

}  // namespace detail

/// Dense LU with full pivoting where every arithmetic operation runs in the
/// extended tier; the result carries roughly kappa(A) eps^2 error, far below
/// anything the solvers under test can reach.
template <class T>
ExtendedVector<T> solve_direct_extended(const DenseMatrix<T>& a, const Vector<T>& b) {
  using E = ExtendedOf<T>;
  if (a.n_rows() != a.n_cols()) throw std::invalid_argument("solve_direct_extended: not square");
  const std::size_t n = a.n_rows();
  if (b.size() != n) throw std::invalid_argument("solve_direct_extended: dimension mismatch");

  std::vector<E> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = ext_from(a(i, j));
  std::vector<E> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = ext_from(b[i]);
  std::vector<std::size_t> col_perm(n);
  std::iota(col_perm.begin(), col_perm.end(), std::size_t(0));

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pi = k, pj = k;
    double best = -1.0;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j) {
        const double mag = detail::ext_pivot_magnitude(m[i * n + j]);
        if (mag > best) {
          best = mag;
          pi = i;
          pj = j;
        }
      }
    if (best == 0.0) throw std::invalid_argument("solve_direct_extended: singular matrix");
    if (pi != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[pi * n + j]);
      std::swap(rhs[k], rhs[pi]);
    }
    if (pj != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(m[i * n + k], m[i * n + pj]);
      std::swap(col_perm[k], col_perm[pj]);
    }
    const E pivot = m[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const E factor = ext_div(m[i * n + k], pivot);
      m[i * n + k] = factor;
      for (std::size_t j = k + 1; j < n; ++j)
        m[i * n + j] = ext_sub(m[i * n + j], ext_mul(factor, m[k * n + j]));
      rhs[i] = ext_sub(rhs[i], ext_mul(factor, rhs[k]));
    }
  }

  std::vector<E> y(n);
  for (std::size_t ii = n; ii-- > 0;) {
    E s = rhs[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s = ext_sub(s, ext_mul(m[ii * n + j], y[j]));
    y[ii] = ext_div(s, m[ii * n + ii]);
  }

  ExtendedVector<T> x(n);
  for (std::size_t k = 0; k < n; ++k) x[col_perm[k]] = y[k];
  return x;
}

// ---------------------------------------------------------------------------
// Stability verdicts
// ---------------------------------------------------------------------------

struct StabilityVerdict {
  bool efs = false;
  bool ebs = false;
  double forward_error = 0.0;
  double backward_error = 0.0;
};

struct StabilityThresholds {
  double c_forward = 100.0;  // EFS: ||x^ - x*|| <= c_f n eps ||x*||
  double c_backward = 100.0;  // EBS: gamma <= c_b eps
};

/// Essential forward/backward stability verdict for a solve report, judged
/// against an extended-tier reference solution.
template <class T>
StabilityVerdict efbs_verdict(const SolveReport<T>& report, const ExtendedVector<T>& oracle_x,
                              const StabilityThresholds& thr = {}) {
  const std::size_t n = oracle_x.size();
  if (report.x_hat.size() != n) throw std::invalid_argument("efbs_verdict: dimension mismatch");
  Vector<T> diff(n), ref(n);
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = ext_round(ext_sub(ext_from(report.x_hat[i]), oracle_x[i]));
    ref[i] = ext_round(oracle_x[i]);
  }
  StabilityVerdict v;
  v.forward_error = norm2(diff) / norm2(ref);
  v.backward_error = report.gamma;
  v.efs = v.forward_error <= thr.c_forward * static_cast<double>(n) * kEps;
  v.ebs = v.backward_error <= thr.c_backward * kEps;
  return v;
}

}  // namespace fbsmr
