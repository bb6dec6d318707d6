// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

/// \file matrix_market.hpp
/// \brief MatrixMarket reader/writer (coordinate and array formats).
///
/// Real, integer, and complex fields with general, symmetric, or Hermitian
/// symmetry are supported; symmetric storage is expanded on read.  Duplicate
/// coordinate entries are summed during CSR assembly.

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "fbsmr/matrix.hpp"

namespace fbsmr {

class MatrixMarketError : public std::runtime_error {
 public:
  explicit MatrixMarketError(const std::string& what) : std::runtime_error(what) {}
};

struct MmInfo {
  bool coordinate = true;
  bool complex_field = false;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t nnz = 0;  // declared entries (before symmetric expansion)
};

/// Parses only the banner and size line.
MmInfo read_matrix_market_info(const std::string& path);

namespace detail {

struct MmParsed {
  MmInfo info;
  // Entries after symmetric/Hermitian expansion, as (row, col, value).
  std::vector<std::tuple<std::size_t, std::size_t, std::complex<double>>> entries;
};

MmParsed parse_matrix_market(const std::string& path);

template <class T>
T mm_cast(const std::complex<double>& v, const std::string& path) {
  if constexpr (kIsComplex<T>) {
    return v;
  } else {
    if (v.imag() != 0.0)
      throw MatrixMarketError(path + ": complex data cannot be read into a real matrix");
    return v.real();
  }
}

}  // namespace detail

template <class T>
CsrMatrix<T> read_matrix_market_csr(const std::string& path) {
  auto parsed = detail::parse_matrix_market(path);
  std::vector<std::tuple<std::size_t, std::size_t, T>> trip;
  trip.reserve(parsed.entries.size());
  for (const auto& [i, j, v] : parsed.entries) trip.emplace_back(i, j, detail::mm_cast<T>(v, path));
  return CsrMatrix<T>::from_triplets(parsed.info.rows, parsed.info.cols, std::move(trip));
}

template <class T>
DenseMatrix<T> read_matrix_market_dense(const std::string& path) {
  auto parsed = detail::parse_matrix_market(path);
  DenseMatrix<T> m(parsed.info.rows, parsed.info.cols);
  for (const auto& [i, j, v] : parsed.entries) m(i, j) += detail::mm_cast<T>(v, path);
  return m;
}

template <class T>
Vector<T> read_matrix_market_vector(const std::string& path) {
  auto parsed = detail::parse_matrix_market(path);
  if (parsed.info.cols != 1)
    throw MatrixMarketError(path + ": expected a single-column vector");
  Vector<T> v(parsed.info.rows, T(0));
  for (const auto& [i, j, val] : parsed.entries) {
    (void)j;
    v[i] += detail::mm_cast<T>(val, path);
  }
  return v;
}

void write_matrix_market(const std::string& path, const CsrMatrix<double>& a);
void write_matrix_market(const std::string& path, const CsrMatrix<std::complex<double>>& a);
void write_matrix_market(const std::string& path, const DenseMatrix<double>& a);
void write_matrix_market(const std::string& path, const DenseMatrix<std::complex<double>>& a);
void write_matrix_market_vector(const std::string& path, const Vector<double>& v);
void write_matrix_market_vector(const std::string& path, const Vector<std::complex<double>>& v);

}  // namespace fbsmr
