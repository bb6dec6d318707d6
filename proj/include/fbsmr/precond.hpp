// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

/// \file precond.hpp
/// \brief Approximate-inverse preconditioners factored and applied in binary32.
///
/// Dense LU with partial pivoting, dense Cholesky for SPD inputs, and
/// pattern-preserving ILU(0) for CSR.  Both the factorization and every
/// triangular solve run in the low-precision tier; vectors are down-cast on
/// entry and up-cast on exit.  Values that overflow binary32 on down-cast are
/// an error rather than saturated.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbsmr/matrix.hpp"
#include "fbsmr/scalar.hpp"

namespace fbsmr {

enum class FactorKind { Lu, Cholesky, Ilu0 };

class ZeroPivotError : public std::runtime_error {
 public:
  ZeroPivotError(const std::string& what, std::size_t row)
      : std::runtime_error(what + " (row " + std::to_string(row) + ")"), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class NotSpdError : public std::runtime_error {
 public:
  NotSpdError(std::size_t pivot)
      : std::runtime_error("matrix is not positive definite in binary32 (pivot " +
                           std::to_string(pivot) + ")"),
        pivot_(pivot) {}
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

class DowncastOverflowError : public std::runtime_error {
 public:
  DowncastOverflowError() : std::runtime_error("entry overflows binary32 on down-cast") {}
};

template <class T>
struct LowPrecFactorization {
  using low_type = LowOf<T>;

  FactorKind kind = FactorKind::Lu;
  std::size_t n = 0;

  // Dense kinds: packed n*n factors.  LU keeps unit-lower L below the
  // diagonal and U on/above it; Cholesky keeps L in the lower triangle.
  std::vector<low_type> dense;
  std::vector<std::size_t> perm;  // LU only: factored row i came from row perm[i]

  // ILU0: CSR pattern of A with factored values and diagonal positions.
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col_idx;
  std::vector<std::size_t> diag_ptr;
  std::vector<low_type> sparse;
};

namespace detail {

template <class T>
LowOf<T> downcast_checked(const T& v) {
  const LowOf<T> low = to_low(v);
  if (!isfinite_scalar(low)) throw DowncastOverflowError();
  return low;
}

}  // namespace detail

/// Gaussian elimination with partial pivoting, entirely in binary32.
template <class T>
LowPrecFactorization<T> lu_factor_lowprec(const DenseMatrix<T>& a) {
  using low_t = LowOf<T>;
  if (a.n_rows() != a.n_cols()) throw std::invalid_argument("lu_factor_lowprec: matrix not square");
  const std::size_t n = a.n_rows();

  LowPrecFactorization<T> f;
  f.kind = FactorKind::Lu;
  f.n = n;
  f.dense.resize(n * n);
  for (std::size_t i = 0; i < n * n; ++i) f.dense[i] = detail::downcast_checked(a.data()[i]);
  f.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

  auto at = [&f, n](std::size_t i, std::size_t j) -> low_t& { return f.dense[i * n + j]; };
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    float piv_mag = abs_of(at(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const float mag = abs_of(at(i, k));
      if (mag > piv_mag) {
        piv_mag = mag;
        piv = i;
      }
    }
    if (piv_mag == 0.0f) throw ZeroPivotError("lu_factor_lowprec: exact zero pivot", k);
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
    }
    const low_t pivot = at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const low_t l = at(i, k) / pivot;
      at(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) at(i, j) -= l * at(k, j);
    }
  }
  return f;
}

/// Lower-triangular Cholesky factor in binary32; the upper triangle of the
/// input is ignored (Hermitian assumption).
template <class T>
LowPrecFactorization<T> cholesky_factor_lowprec(const DenseMatrix<T>& a) {
  using low_t = LowOf<T>;
  if (a.n_rows() != a.n_cols())
    throw std::invalid_argument("cholesky_factor_lowprec: matrix not square");
  const std::size_t n = a.n_rows();

  LowPrecFactorization<T> f;
  f.kind = FactorKind::Cholesky;
  f.n = n;
  f.dense.assign(n * n, low_t(0));
  auto at = [&f, n](std::size_t i, std::size_t j) -> low_t& { return f.dense[i * n + j]; };

  for (std::size_t j = 0; j < n; ++j) {
    float diag = static_cast<float>(real_of(a(j, j)));
    if (!std::isfinite(diag)) throw DowncastOverflowError();
    for (std::size_t k = 0; k < j; ++k) {
      const float m = abs_of(at(j, k));
      diag -= m * m;
    }
    if (!(diag > 0.0f)) throw NotSpdError(j);
    const float ljj = std::sqrt(diag);
    at(j, j) = low_t(ljj);
    for (std::size_t i = j + 1; i < n; ++i) {
      low_t s = detail::downcast_checked(a(i, j));
      for (std::size_t k = 0; k < j; ++k) s -= at(i, k) * conj_of(at(j, k));
      at(i, j) = s / low_t(ljj);
    }
  }
  return f;
}

/// Sparse SPD input: densified before factoring (complete factor; intended
/// for desk-scale systems).
template <class T>
LowPrecFactorization<T> cholesky_factor_lowprec(const CsrMatrix<T>& a) {
  return cholesky_factor_lowprec(a.to_dense());
}

/// Pattern-preserving incomplete LU (IKJ form) in binary32.
template <class T>
LowPrecFactorization<T> ilu0_lowprec(const CsrMatrix<T>& a) {
  using low_t = LowOf<T>;
  if (a.n_rows() != a.n_cols()) throw std::invalid_argument("ilu0_lowprec: matrix not square");
  const std::size_t n = a.n_rows();

  LowPrecFactorization<T> f;
  f.kind = FactorKind::Ilu0;
  f.n = n;
  f.row_ptr = a.row_ptr();
  f.col_idx = a.col_idx();
  f.sparse.resize(a.nnz());
  for (std::size_t k = 0; k < a.nnz(); ++k) f.sparse[k] = detail::downcast_checked(a.values()[k]);

  f.diag_ptr.assign(n, std::size_t(-1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = f.row_ptr[i]; k < f.row_ptr[i + 1]; ++k)
      if (f.col_idx[k] == i) f.diag_ptr[i] = k;
  for (std::size_t i = 0; i < n; ++i)
    if (f.diag_ptr[i] == std::size_t(-1))
      throw ZeroPivotError("ilu0_lowprec: diagonal missing from pattern", i);

  // Column positions scratch for the current row.
  std::vector<std::size_t> pos(n, std::size_t(-1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = f.row_ptr[i]; k < f.row_ptr[i + 1]; ++k) pos[f.col_idx[k]] = k;
    for (std::size_t kk = f.row_ptr[i]; kk < f.row_ptr[i + 1]; ++kk) {
      const std::size_t k = f.col_idx[kk];
      if (k >= i) break;  // columns sorted: L part exhausted
      const low_t ukk = f.sparse[f.diag_ptr[k]];
      if (abs_of(ukk) == 0.0f) throw ZeroPivotError("ilu0_lowprec: zero pivot", k);
      const low_t lik = f.sparse[kk] / ukk;
      f.sparse[kk] = lik;
      for (std::size_t jj = f.diag_ptr[k] + 1; jj < f.row_ptr[k + 1]; ++jj) {
        const std::size_t j = f.col_idx[jj];
        const std::size_t p = pos[j];
        if (p != std::size_t(-1)) f.sparse[p] -= lik * f.sparse[jj];
      }
    }
    if (abs_of(f.sparse[f.diag_ptr[i]]) == 0.0f)
      throw ZeroPivotError("ilu0_lowprec: zero pivot", i);
    for (std::size_t k = f.row_ptr[i]; k < f.row_ptr[i + 1]; ++k) pos[f.col_idx[k]] = std::size_t(-1);
  }
  return f;
}

/// z = M^{-1} v: down-cast, permute, binary32 triangular solves, up-cast.
template <class T>
Vector<T> apply_inverse(const LowPrecFactorization<T>& m, const Vector<T>& v) {
  using low_t = LowOf<T>;
  if (v.size() != m.n) throw std::invalid_argument("apply_inverse: dimension mismatch");
  const std::size_t n = m.n;
  std::vector<low_t> w(n);

  switch (m.kind) {
    case FactorKind::Lu: {
      for (std::size_t i = 0; i < n; ++i) w[i] = to_low(v[m.perm[i]]);
      const auto at = [&m, n](std::size_t i, std::size_t j) { return m.dense[i * n + j]; };
      for (std::size_t i = 0; i < n; ++i) {
        low_t s = w[i];
        for (std::size_t j = 0; j < i; ++j) s -= at(i, j) * w[j];
        w[i] = s;  // unit diagonal
      }
      for (std::size_t ii = n; ii-- > 0;) {
        low_t s = w[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= at(ii, j) * w[j];
        w[ii] = s / at(ii, ii);
      }
      break;
    }
    case FactorKind::Cholesky: {
      for (std::size_t i = 0; i < n; ++i) w[i] = to_low(v[i]);
      const auto at = [&m, n](std::size_t i, std::size_t j) { return m.dense[i * n + j]; };
      for (std::size_t i = 0; i < n; ++i) {
        low_t s = w[i];
        for (std::size_t j = 0; j < i; ++j) s -= at(i, j) * w[j];
        w[i] = s / at(i, i);
      }
      for (std::size_t ii = n; ii-- > 0;) {
        low_t s = w[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= conj_of(at(j, ii)) * w[j];
        w[ii] = s / at(ii, ii);
      }
      break;
    }
    case FactorKind::Ilu0: {
      for (std::size_t i = 0; i < n; ++i) w[i] = to_low(v[i]);
      for (std::size_t i = 0; i < n; ++i) {
        low_t s = w[i];
        for (std::size_t k = m.row_ptr[i]; k < m.diag_ptr[i]; ++k)
          if (m.col_idx[k] < i) s -= m.sparse[k] * w[m.col_idx[k]];
        w[i] = s;  // unit diagonal
      }
      for (std::size_t ii = n; ii-- > 0;) {
        low_t s = w[ii];
        for (std::size_t k = m.diag_ptr[ii] + 1; k < m.row_ptr[ii + 1]; ++k)
          s -= m.sparse[k] * w[m.col_idx[k]];
        w[ii] = s / m.sparse[m.diag_ptr[ii]];
      }
      break;
    }
  }

  Vector<T> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = from_low(w[i]);
  return z;
}

}  // namespace fbsmr
