// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

/// \file scalar.hpp
/// \brief Scalar-kind traits tying the three precision tiers together.
///
/// Every kernel is parameterized on the working scalar T, which is either
/// binary64 or complex binary64.  The traits map T to its low-precision
/// (binary32) storage kind used by preconditioners and to its extended
/// (double-double) kind used by the stabilized operations.

#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

#include "fbsmr/ddouble.hpp"

namespace fbsmr {

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  using value_type = double;
  using real_type = double;
  using low_type = float;
  using extended_type = DDouble;
  static constexpr bool is_complex = false;
};

template <>
struct ScalarTraits<std::complex<double>> {
  using value_type = std::complex<double>;
  using real_type = double;
  using low_type = std::complex<float>;
  using extended_type = DDComplex;
  static constexpr bool is_complex = true;
};

template <class T>
using LowOf = typename ScalarTraits<T>::low_type;

template <class T>
using ExtendedOf = typename ScalarTraits<T>::extended_type;

template <class T>
inline constexpr bool kIsComplex = ScalarTraits<T>::is_complex;

inline double conj_of(double x) { return x; }
inline std::complex<double> conj_of(const std::complex<double>& z) { return std::conj(z); }
inline float conj_of(float x) { return x; }
inline std::complex<float> conj_of(const std::complex<float>& z) { return std::conj(z); }

inline double abs_of(double x) { return std::fabs(x); }
inline double abs_of(const std::complex<double>& z) { return std::abs(z); }
inline float abs_of(float x) { return std::fabs(x); }
inline float abs_of(const std::complex<float>& z) { return std::abs(z); }

inline double real_of(double x) { return x; }
inline double real_of(const std::complex<double>& z) { return z.real(); }

inline bool isfinite_scalar(double x) { return std::isfinite(x); }
inline bool isfinite_scalar(const std::complex<double>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}
inline bool isfinite_scalar(float x) { return std::isfinite(x); }
inline bool isfinite_scalar(const std::complex<float>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// sign(x) = x / |x| for x != 0, and 1 for x == 0.
template <class T>
inline T sign_of(const T& x) {
  const double a = abs_of(x);
  if (a == 0.0) return T(1);
  return x / T(a);
}

/// Round-to-nearest down-cast to the binary32 kind.
inline float to_low(double x) { return static_cast<float>(x); }
inline std::complex<float> to_low(const std::complex<double>& z) {
  return {static_cast<float>(z.real()), static_cast<float>(z.imag())};
}

inline double from_low(float x) { return static_cast<double>(x); }
inline std::complex<double> from_low(const std::complex<float>& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

}  // namespace fbsmr
