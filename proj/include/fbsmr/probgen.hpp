// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

/// \file probgen.hpp
/// \brief Reproducible test-problem generators.
///
/// randsvd matrices with a prescribed geometric spectrum and Haar orthogonal
/// factors, the 5-point Poisson stencil on the unit square, and right-hand
/// side builders.  Randomness comes from mt19937_64 (bit-reproducible per the
/// C++ standard) driving an explicit Box-Muller transform, so identical seeds
/// give bitwise identical problems everywhere.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "fbsmr/kernels.hpp"
#include "fbsmr/matrix.hpp"

namespace fbsmr {

/// Standard normal sampler: Box-Muller over 53-bit uniforms.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;  // (0, 1]
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1p-53;          // [0, 1)
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 6.283185307179586476925286766559 * u2;
    cached_ = rad * std::sin(ang);
    has_cached_ = true;
    return rad * std::cos(ang);
  }

 private:
  std::mt19937_64 rng_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

struct RandsvdSpec {
  std::size_t n = 100;
  double alpha = 10.0;  // kappa(A) = 10^alpha
  double r = 1.0;       // spectrum shape exponent
  std::uint64_t seed = 1;
};

struct RandsvdProblem {
  DenseMatrix<double> a;
  Vector<double> sigma;
  DenseMatrix<double> u;
  DenseMatrix<double> v;
};

namespace detail {

/// Haar-distributed orthogonal matrix: QR of a standard Gaussian matrix with
/// the R diagonal forced positive (column sign fix).
inline DenseMatrix<double> haar_orthogonal(std::size_t n, NormalSampler& gauss) {
  DenseMatrix<double> a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = gauss();

  // Householder QR keeping the reflectors.
  std::vector<Vector<double>> reflectors(n);
  Vector<double> diag_sign(n, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    Vector<double> v(n - k);
    for (std::size_t i = k; i < n; ++i) v[i - k] = a(i, k);
    double norm = norm2(v);
    if (norm == 0.0) {
      reflectors[k] = Vector<double>();
      diag_sign[k] = 1.0;
      continue;
    }
    const double alpha = v[0] >= 0.0 ? -norm : norm;
    v[0] -= alpha;
    const double vnorm = norm2(v);
    if (vnorm > 0.0) scale(v, 1.0 / vnorm);
    // Apply I - 2 v v^T to the trailing block.
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += v[i - k] * a(i, j);
      s *= 2.0;
      for (std::size_t i = k; i < n; ++i) a(i, j) -= s * v[i - k];
    }
    diag_sign[k] = alpha >= 0.0 ? 1.0 : -1.0;
    reflectors[k] = std::move(v);
  }

  // Accumulate Q = H_0 ... H_{n-1} applied to I.
  DenseMatrix<double> q = DenseMatrix<double>::identity(n);
  for (std::size_t kk = n; kk-- > 0;) {
    const Vector<double>& v = reflectors[kk];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = kk; i < n; ++i) s += v[i - kk] * q(i, j);
      s *= 2.0;
      for (std::size_t i = kk; i < n; ++i) q(i, j) -= s * v[i - kk];
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    if (diag_sign[j] < 0.0)
      for (std::size_t i = 0; i < n; ++i) q(i, j) = -q(i, j);
  return q;
}

}  // namespace detail

/// Prescribed spectrum sigma_i = 10^(-alpha ((i-1)/(n-1))^r).
inline Vector<double> randsvd_spectrum(const RandsvdSpec& spec) {
  Vector<double> sigma(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(spec.n - 1);
    sigma[i] = std::pow(10.0, -spec.alpha * std::pow(t, spec.r));
  }
  return sigma;
}

inline RandsvdProblem randsvd(const RandsvdSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("randsvd: n must be at least 2");
  if (spec.alpha < 0.0) throw std::invalid_argument("randsvd: alpha must be nonnegative");
  if (spec.r <= 0.0) throw std::invalid_argument("randsvd: r must be positive");

  RandsvdProblem p;
  p.sigma = randsvd_spectrum(spec);
  NormalSampler gauss(spec.seed);
  p.u = detail::haar_orthogonal(spec.n, gauss);
  p.v = detail::haar_orthogonal(spec.n, gauss);

  const std::size_t n = spec.n;
  p.a = DenseMatrix<double>(n, n);
  const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += p.u(i, k) * p.sigma[k] * p.v(j, k);
      p.a(i, j) = sum;
    }
  return p;
}

/// 5-point Laplacian on an m x m cell grid of the unit square with Dirichlet
/// boundary elimination: (m-1)^2 unknowns, diagonal -4/h^2, off-diagonal
/// 1/h^2 with h = 1/m.  All entries are exact binary64 scalings when m is a
/// power of two.
inline CsrMatrix<double> poisson2d(std::size_t m) {
  if (m < 2) throw std::invalid_argument("poisson2d: m must be at least 2");
  const std::size_t g = m - 1;  // interior points per side
  const double inv_h2 = static_cast<double>(m) * static_cast<double>(m);
  std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
  trip.reserve(5 * g * g);
  const auto idx = [g](std::size_t gx, std::size_t gy) { return gy * g + gx; };
  for (std::size_t gy = 0; gy < g; ++gy) {
    for (std::size_t gx = 0; gx < g; ++gx) {
      const std::size_t row = idx(gx, gy);
      trip.emplace_back(row, row, -4.0 * inv_h2);
      if (gx > 0) trip.emplace_back(row, idx(gx - 1, gy), inv_h2);
      if (gx + 1 < g) trip.emplace_back(row, idx(gx + 1, gy), inv_h2);
      if (gy > 0) trip.emplace_back(row, idx(gx, gy - 1), inv_h2);
      if (gy + 1 < g) trip.emplace_back(row, idx(gx, gy + 1), inv_h2);
    }
  }
  return CsrMatrix<double>::from_triplets(g * g, g * g, std::move(trip));
}

inline Vector<double> random_rhs(std::size_t n, std::uint64_t seed) {
  NormalSampler gauss(seed);
  Vector<double> b(n);
  for (double& e : b) e = gauss();
  return b;
}

inline Vector<double> ones_rhs(std::size_t n) { return Vector<double>(n, 1.0); }

/// b = A * x_star accumulated in the extended tier, then rounded; keeps the
/// representation error of b strongly correlated with the intended solution.
template <class Mat>
Vector<typename Mat::value_type> manufactured_rhs(const Mat& a,
                                                  const Vector<typename Mat::value_type>& x_star) {
  return to_working<typename Mat::value_type>(matvec_extended(a, x_star));
}

}  // namespace fbsmr
