// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

/// \file matrix.hpp
/// \brief Dense (row-major) and CSR sparse containers plus vector aliases.

#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "fbsmr/scalar.hpp"

namespace fbsmr {

template <class T>
using Vector = std::vector<T>;

template <class T>
using ExtendedVector = std::vector<ExtendedOf<T>>;

template <class T>
class DenseMatrix {
 public:
  using value_type = T;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw std::invalid_argument("DenseMatrix: entry count does not match dimensions");
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t n_rows() const { return rows_; }
  std::size_t n_cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const T* row(std::size_t i) const { return data_.data() + i * cols_; }
  T* row(std::size_t i) { return data_.data() + i * cols_; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& v) { return isfinite_scalar(v); });
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Compressed sparse row matrix with strictly increasing, deduplicated column
/// indices within each row.
template <class T>
class CsrMatrix {
 public:
  using value_type = T;

  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<T> values)
      : rows_(rows),
        cols_(cols),
        row_ptr_(std::move(row_ptr)),
        col_idx_(std::move(col_idx)),
        values_(std::move(values)) {
    validate();
  }

  /// Builds from (i, j, v) triplets; duplicates are summed, columns sorted.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols,
                                 std::vector<std::tuple<std::size_t, std::size_t, T>> triplets) {
    for (const auto& [i, j, v] : triplets) {
      (void)v;
      if (i >= rows || j >= cols) throw std::invalid_argument("CsrMatrix: triplet index out of range");
    }
    std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    CsrMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    m.col_idx_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      m.row_ptr_[i] = m.col_idx_.size();
      while (pos < triplets.size() && std::get<0>(triplets[pos]) == i) {
        const std::size_t j = std::get<1>(triplets[pos]);
        T v = std::get<2>(triplets[pos]);
        ++pos;
        while (pos < triplets.size() && std::get<0>(triplets[pos]) == i &&
               std::get<1>(triplets[pos]) == j) {
          v += std::get<2>(triplets[pos]);
          ++pos;
        }
        m.col_idx_.push_back(j);
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[rows] = m.col_idx_.size();
    return m;
  }

  std::size_t n_rows() const { return rows_; }
  std::size_t n_cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<T>& values() const { return values_; }
  std::vector<T>& values() { return values_; }

  DenseMatrix<T> to_dense() const {
    DenseMatrix<T> d(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, col_idx_[k]) = values_[k];
    return d;
  }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](const T& v) { return isfinite_scalar(v); });
  }

  void validate() const {
    if (row_ptr_.size() != rows_ + 1) throw std::invalid_argument("CsrMatrix: row_ptr size mismatch");
    if (row_ptr_.front() != 0) throw std::invalid_argument("CsrMatrix: row_ptr must start at 0");
    if (row_ptr_.back() != values_.size() || col_idx_.size() != values_.size())
      throw std::invalid_argument("CsrMatrix: nnz mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
      if (row_ptr_[i] > row_ptr_[i + 1]) throw std::invalid_argument("CsrMatrix: row_ptr not monotone");
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
        if (col_idx_[k] >= cols_) throw std::invalid_argument("CsrMatrix: column index out of range");
        if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
          throw std::invalid_argument("CsrMatrix: columns not strictly increasing within row");
      }
    }
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<T> values_;
};

template <class T>
Vector<T> to_working(const ExtendedVector<T>& x) {
  Vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = ext_round(x[i]);
  return out;
}

template <class T>
ExtendedVector<T> to_extended(const Vector<T>& x) {
  ExtendedVector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = ext_from(x[i]);
  return out;
}

}  // namespace fbsmr
