// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

/// \file kernels.hpp
/// \brief Working-precision and extended-accumulation matrix/vector kernels.
///
/// Matvec-style kernels come in two flavors: the default ones parallelize
/// over rows with OpenMP, and `fbsmr::serial` keeps plain loops as the
/// reference implementation.  Accumulation order within a row is identical
/// in both, so results are bitwise equal regardless of thread count; the
/// extended tier is order-sensitive at the 1e-32 level and the tests rely
/// on this determinism.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "fbsmr/matrix.hpp"
#include "fbsmr/scalar.hpp"

namespace fbsmr {

namespace detail {

template <class T>
inline T row_dot(const DenseMatrix<T>& a, const Vector<T>& x, std::size_t i) {
  const T* row = a.row(i);
  T sum(0);
  for (std::size_t j = 0; j < a.n_cols(); ++j) sum += row[j] * x[j];
  return sum;
}

template <class T>
inline T row_dot(const CsrMatrix<T>& a, const Vector<T>& x, std::size_t i) {
  T sum(0);
  for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
    sum += a.values()[k] * x[a.col_idx()[k]];
  return sum;
}

// Extended accumulation; operands are up-converted just in time.
template <class T>
inline ExtendedOf<T> row_dot_ext(const DenseMatrix<T>& a, const Vector<T>& x, std::size_t i) {
  const T* row = a.row(i);
  ExtendedOf<T> sum;
  for (std::size_t j = 0; j < a.n_cols(); ++j) sum = ext_add(sum, ext_prod(row[j], x[j]));
  return sum;
}

template <class T>
inline ExtendedOf<T> row_dot_ext(const DenseMatrix<T>& a, const ExtendedVector<T>& x,
                                 std::size_t i) {
  const T* row = a.row(i);
  ExtendedOf<T> sum;
  for (std::size_t j = 0; j < a.n_cols(); ++j) sum = ext_add(sum, ext_mul(x[j], row[j]));
  return sum;
}

template <class T>
inline ExtendedOf<T> row_dot_ext(const CsrMatrix<T>& a, const Vector<T>& x, std::size_t i) {
  ExtendedOf<T> sum;
  for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
    sum = ext_add(sum, ext_prod(a.values()[k], x[a.col_idx()[k]]));
  return sum;
}

template <class T>
inline ExtendedOf<T> row_dot_ext(const CsrMatrix<T>& a, const ExtendedVector<T>& x,
                                 std::size_t i) {
  ExtendedOf<T> sum;
  for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
    sum = ext_add(sum, ext_mul(x[a.col_idx()[k]], a.values()[k]));
  return sum;
}

template <class Mat>
inline void check_matvec_dims(const Mat& a, std::size_t x_len) {
  if (a.n_cols() != x_len) throw std::invalid_argument("matvec: dimension mismatch");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// BLAS-1
// ---------------------------------------------------------------------------

/// 2-norm with scaled accumulation to avoid overflow on large entries.
template <class T>
double norm2(const Vector<T>& v) {
  double peak = 0.0;
  for (const T& e : v) peak = std::max(peak, abs_of(e));
  if (peak == 0.0) return 0.0;
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  if constexpr (kIsComplex<T>) {
    for (const T& e : v) {
      const double re = e.real() / peak;
      const double im = e.imag() / peak;
      sum += re * re + im * im;
    }
  } else {
    for (const T& e : v) {
      const double s = e / peak;
      sum += s * s;
    }
  }
  return peak * std::sqrt(sum);
}

/// Inner product conjugating the first argument.
template <class T>
T dot(const Vector<T>& u, const Vector<T>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dot: dimension mismatch");
  T sum(0);
  for (std::size_t i = 0; i < u.size(); ++i) sum += conj_of(u[i]) * v[i];
  return sum;
}

/// y += alpha * x in working precision.
template <class T>
void axpy(Vector<T>& y, const T& alpha, const Vector<T>& x) {
  if (y.size() != x.size()) throw std::invalid_argument("axpy: dimension mismatch");
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

template <class T>
void scale(Vector<T>& v, double alpha) {
  for (T& e : v) e *= T(alpha);
}

// ---------------------------------------------------------------------------
// Serial reference kernels
// ---------------------------------------------------------------------------

namespace serial {

template <class Mat>
Vector<typename Mat::value_type> matvec(const Mat& a,
                                        const Vector<typename Mat::value_type>& x) {
  detail::check_matvec_dims(a, x.size());
  Vector<typename Mat::value_type> y(a.n_rows());
  for (std::size_t i = 0; i < a.n_rows(); ++i) y[i] = detail::row_dot(a, x, i);
  return y;
}

template <class Mat, class Vec>
ExtendedVector<typename Mat::value_type> matvec_extended(const Mat& a, const Vec& x) {
  detail::check_matvec_dims(a, x.size());
  ExtendedVector<typename Mat::value_type> y(a.n_rows());
  for (std::size_t i = 0; i < a.n_rows(); ++i) y[i] = detail::row_dot_ext(a, x, i);
  return y;
}

/// r = round(b - A*xt) accumulated entirely in the extended tier; also
/// returns the working-precision 2-norm of r.
template <class Mat>
std::pair<Vector<typename Mat::value_type>, double> residual_extended(
    const Mat& a, const Vector<typename Mat::value_type>& b,
    const ExtendedVector<typename Mat::value_type>& xt) {
  using T = typename Mat::value_type;
  detail::check_matvec_dims(a, xt.size());
  if (a.n_rows() != b.size()) throw std::invalid_argument("residual: dimension mismatch");
  Vector<T> r(a.n_rows());
  for (std::size_t i = 0; i < a.n_rows(); ++i)
    r[i] = ext_round(ext_sub(ext_from(b[i]), detail::row_dot_ext(a, xt, i)));
  double beta = norm2(r);
  return {std::move(r), beta};
}

template <class T>
void axpy_extended(ExtendedVector<T>& xt, const std::vector<Vector<T>>& z_cols,
                   const Vector<T>& y) {
  if (z_cols.size() < y.size()) throw std::invalid_argument("axpy_extended: rank mismatch");
  for (std::size_t i = 0; i < xt.size(); ++i) {
    ExtendedOf<T> acc = xt[i];
    for (std::size_t j = 0; j < y.size(); ++j) acc = ext_add(acc, ext_prod(z_cols[j][i], y[j]));
    xt[i] = acc;
  }
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP row-parallel kernels (bitwise identical to the serial ones)
// ---------------------------------------------------------------------------

template <class Mat>
Vector<typename Mat::value_type> matvec(const Mat& a,
                                        const Vector<typename Mat::value_type>& x) {
  detail::check_matvec_dims(a, x.size());
  Vector<typename Mat::value_type> y(a.n_rows());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.n_rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = detail::row_dot(a, x, i);
  return y;
}

template <class Mat, class Vec>
ExtendedVector<typename Mat::value_type> matvec_extended(const Mat& a, const Vec& x) {
  detail::check_matvec_dims(a, x.size());
  ExtendedVector<typename Mat::value_type> y(a.n_rows());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.n_rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = detail::row_dot_ext(a, x, i);
  return y;
}

/// r = round(b - A*xt) in the extended tier, with beta = ||r||_2.
template <class Mat>
std::pair<Vector<typename Mat::value_type>, double> residual_extended(
    const Mat& a, const Vector<typename Mat::value_type>& b,
    const ExtendedVector<typename Mat::value_type>& xt) {
  using T = typename Mat::value_type;
  detail::check_matvec_dims(a, xt.size());
  if (a.n_rows() != b.size()) throw std::invalid_argument("residual: dimension mismatch");
  Vector<T> r(a.n_rows());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.n_rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    r[i] = ext_round(ext_sub(ext_from(b[i]), detail::row_dot_ext(a, xt, i)));
  double beta = norm2(r);
  return {std::move(r), beta};
}

/// xt += Z(:,1:k) * y accumulated in the extended tier.
template <class T>
void axpy_extended(ExtendedVector<T>& xt, const std::vector<Vector<T>>& z_cols,
                   const Vector<T>& y) {
  if (z_cols.size() < y.size()) throw std::invalid_argument("axpy_extended: rank mismatch");
  for (const auto& col : z_cols)
    if (col.size() != xt.size()) throw std::invalid_argument("axpy_extended: dimension mismatch");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(xt.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    ExtendedOf<T> acc = xt[i];
    for (std::size_t j = 0; j < y.size(); ++j) acc = ext_add(acc, ext_prod(z_cols[j][i], y[j]));
    xt[i] = acc;
  }
}

}  // namespace fbsmr
