// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

#include "fbsmr/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fbsmr {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

enum class Symmetry { General, Symmetric, Hermitian };

struct Banner {
  bool coordinate = true;
  bool complex_field = false;
  bool integer_field = false;
  Symmetry symmetry = Symmetry::General;
};

Banner parse_banner(const std::string& line, const std::string& path) {
  std::istringstream ss(line);
  std::string tag, object, format, field, symmetry;
  ss >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix")
    throw MatrixMarketError(path + ": not a MatrixMarket matrix file");
  Banner b;
  const std::string fmt = lower(format);
  if (fmt == "coordinate")
    b.coordinate = true;
  else if (fmt == "array")
    b.coordinate = false;
  else
    throw MatrixMarketError(path + ": unsupported format '" + format + "'");
  const std::string fld = lower(field);
  if (fld == "real")
    ;
  else if (fld == "integer")
    b.integer_field = true;
  else if (fld == "complex")
    b.complex_field = true;
  else
    throw MatrixMarketError(path + ": unsupported field '" + field + "'");
  const std::string sym = lower(symmetry);
  if (sym == "general")
    b.symmetry = Symmetry::General;
  else if (sym == "symmetric")
    b.symmetry = Symmetry::Symmetric;
  else if (sym == "hermitian")
    b.symmetry = Symmetry::Hermitian;
  else
    throw MatrixMarketError(path + ": unsupported symmetry '" + symmetry + "'");
  return b;
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return true;
  }
  return false;
}

[[noreturn]] void fail_at(const std::string& path, std::size_t lineno, const std::string& msg) {
  throw MatrixMarketError(path + ":" + std::to_string(lineno) + ": " + msg);
}

}  // namespace

MmInfo read_matrix_market_info(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixMarketError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw MatrixMarketError(path + ": empty file");
  std::size_t lineno = 1;
  const Banner banner = parse_banner(line, path);
  if (!next_content_line(in, line, lineno)) fail_at(path, lineno, "missing size line");
  std::istringstream ss(line);
  MmInfo info;
  info.coordinate = banner.coordinate;
  info.complex_field = banner.complex_field;
  if (banner.coordinate) {
    if (!(ss >> info.rows >> info.cols >> info.nnz)) fail_at(path, lineno, "malformed size line");
  } else {
    if (!(ss >> info.rows >> info.cols)) fail_at(path, lineno, "malformed size line");
    info.nnz = info.rows * info.cols;
  }
  return info;
}

namespace detail {

MmParsed parse_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MatrixMarketError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw MatrixMarketError(path + ": empty file");
  std::size_t lineno = 1;
  const Banner banner = parse_banner(line, path);

  if (!next_content_line(in, line, lineno)) fail_at(path, lineno, "missing size line");
  MmParsed out;
  out.info.coordinate = banner.coordinate;
  out.info.complex_field = banner.complex_field;
  {
    std::istringstream ss(line);
    if (banner.coordinate) {
      if (!(ss >> out.info.rows >> out.info.cols >> out.info.nnz))
        fail_at(path, lineno, "malformed size line");
    } else {
      if (!(ss >> out.info.rows >> out.info.cols)) fail_at(path, lineno, "malformed size line");
      out.info.nnz = out.info.rows * out.info.cols;
    }
  }
  if (banner.symmetry != Symmetry::General && out.info.rows != out.info.cols)
    fail_at(path, lineno, "symmetric matrix must be square");

  const auto push_expanded = [&](std::size_t i, std::size_t j, std::complex<double> v) {
    out.entries.emplace_back(i, j, v);
    if (i != j) {
      if (banner.symmetry == Symmetry::Symmetric)
        out.entries.emplace_back(j, i, v);
      else if (banner.symmetry == Symmetry::Hermitian)
        out.entries.emplace_back(j, i, std::conj(v));
    }
  };

  if (banner.coordinate) {
    out.entries.reserve(out.info.nnz * (banner.symmetry == Symmetry::General ? 1 : 2));
    for (std::size_t k = 0; k < out.info.nnz; ++k) {
      if (!next_content_line(in, line, lineno))
        fail_at(path, lineno, "unexpected end of file: expected " + std::to_string(out.info.nnz) +
                                  " entries, found " + std::to_string(k));
      std::istringstream ss(line);
      std::size_t i = 0, j = 0;
      double re = 0.0, im = 0.0;
      if (!(ss >> i >> j >> re)) fail_at(path, lineno, "malformed coordinate entry");
      if (banner.complex_field && !(ss >> im)) fail_at(path, lineno, "missing imaginary part");
      if (i < 1 || j < 1 || i > out.info.rows || j > out.info.cols)
        fail_at(path, lineno, "index out of range");
      if (banner.symmetry != Symmetry::General && j > i)
        fail_at(path, lineno, "symmetric storage requires lower-triangular entries");
      push_expanded(i - 1, j - 1, {re, im});
    }
  } else {
    // Array data is column-major; symmetric array stores the lower triangle.
    const bool lower_only = banner.symmetry != Symmetry::General;
    for (std::size_t j = 0; j < out.info.cols; ++j) {
      for (std::size_t i = lower_only ? j : 0; i < out.info.rows; ++i) {
        if (!next_content_line(in, line, lineno))
          fail_at(path, lineno, "unexpected end of file in array data");
        std::istringstream ss(line);
        double re = 0.0, im = 0.0;
        if (!(ss >> re)) fail_at(path, lineno, "malformed array entry");
        if (banner.complex_field && !(ss >> im)) fail_at(path, lineno, "missing imaginary part");
        push_expanded(i, j, {re, im});
      }
    }
  }
  for (const auto& [i, j, v] : out.entries) {
    (void)i;
    (void)j;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw MatrixMarketError(path + ": non-finite entry");
  }
  return out;
}

}  // namespace detail

namespace {

void append_value(std::string& buf, double v) {
  char tmp[40];
  std::snprintf(tmp, sizeof(tmp), "%.17g", v);
  buf += tmp;
}

template <class T>
void write_csr(const std::string& path, const CsrMatrix<T>& a) {
  std::ofstream out(path);
  if (!out) throw MatrixMarketError(path + ": cannot open file for writing");
  out << "%%MatrixMarket matrix coordinate " << (kIsComplex<T> ? "complex" : "real")
      << " general\n";
  out << a.n_rows() << ' ' << a.n_cols() << ' ' << a.nnz() << '\n';
  std::string buf;
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      buf.clear();
      buf += std::to_string(i + 1);
      buf += ' ';
      buf += std::to_string(a.col_idx()[k] + 1);
      buf += ' ';
      if constexpr (kIsComplex<T>) {
        append_value(buf, a.values()[k].real());
        buf += ' ';
        append_value(buf, a.values()[k].imag());
      } else {
        append_value(buf, a.values()[k]);
      }
      buf += '\n';
      out << buf;
    }
  }
}

template <class T>
void write_dense(const std::string& path, const DenseMatrix<T>& a) {
  std::ofstream out(path);
  if (!out) throw MatrixMarketError(path + ": cannot open file for writing");
  out << "%%MatrixMarket matrix array " << (kIsComplex<T> ? "complex" : "real") << " general\n";
  out << a.n_rows() << ' ' << a.n_cols() << '\n';
  std::string buf;
  for (std::size_t j = 0; j < a.n_cols(); ++j) {
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
      buf.clear();
      if constexpr (kIsComplex<T>) {
        append_value(buf, a(i, j).real());
        buf += ' ';
        append_value(buf, a(i, j).imag());
      } else {
        append_value(buf, a(i, j));
      }
      buf += '\n';
      out << buf;
    }
  }
}

template <class T>
void write_vec(const std::string& path, const Vector<T>& v) {
  DenseMatrix<T> m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  write_dense(path, m);
}

}  // namespace

void write_matrix_market(const std::string& path, const CsrMatrix<double>& a) { write_csr(path, a); }
void write_matrix_market(const std::string& path, const CsrMatrix<std::complex<double>>& a) {
  write_csr(path, a);
}
void write_matrix_market(const std::string& path, const DenseMatrix<double>& a) {
  write_dense(path, a);
}
void write_matrix_market(const std::string& path, const DenseMatrix<std::complex<double>>& a) {
  write_dense(path, a);
}
void write_matrix_market_vector(const std::string& path, const Vector<double>& v) {
  write_vec(path, v);
}
void write_matrix_market_vector(const std::string& path, const Vector<std::complex<double>>& v) {
  write_vec(path, v);
}

}  // namespace fbsmr
