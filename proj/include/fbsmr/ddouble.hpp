// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

/// \file ddouble.hpp
/// \brief Double-double (unevaluated sum of two binary64) scalar arithmetic.
///
/// Provides the eps^2 accuracy tier used by the stabilized gaxpy kernels.
/// A value is stored as hi + lo with hi = fl(hi + lo); rounding back to
/// binary64 simply returns hi.  Addition and multiplication carry relative
/// errors of a few eps^2 even under cancellation, which is what the
/// stabilized residual and solution updates require.

#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace fbsmr {

inline constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // unit roundoff 2^-53

struct TwoSumResult {
  double value;
  double error;
};

/// Knuth branch-free two-sum: value = fl(a+b) and a + b = value + error
/// exactly for finite inputs without overflow.
inline TwoSumResult two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

/// Fast two-sum; requires |a| >= |b| (or a == 0).
inline TwoSumResult quick_two_sum(double a, double b) {
  const double s = a + b;
  const double err = b - (s - a);
  return {s, err};
}

namespace detail {

// Dekker splitting fallback for two_prod on targets without usable fma.
inline TwoSumResult two_prod_split(double a, double b) {
  constexpr double splitter = 134217729.0;  // 2^27 + 1
  const double p = a * b;
  double ta = splitter * a;
  const double a_hi = ta - (ta - a);
  const double a_lo = a - a_hi;
  double tb = splitter * b;
  const double b_hi = tb - (tb - b);
  const double b_lo = b - b_hi;
  const double err = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo;
  return {p, err};
}

inline TwoSumResult two_prod_fma(double a, double b) {
  const double p = a * b;
  const double err = std::fma(a, b, -p);
  return {p, err};
}

}  // namespace detail

/// value = fl(a*b) and a*b = value + error exactly, barring
/// overflow/underflow of the product (error may be subnormal).
inline TwoSumResult two_prod(double a, double b) {
#if defined(FBSMR_NO_FMA)
  return detail::two_prod_split(a, b);
#else
  return detail::two_prod_fma(a, b);
#endif
}

/// Extended-precision scalar: hi carries the binary64 rounding of the value,
/// lo the trailing error term (|lo| <= ulp(hi)/2 when normalized).
struct DDouble {
  double hi = 0.0;
  double lo = 0.0;

  DDouble() = default;
  constexpr DDouble(double h, double l) : hi(h), lo(l) {}
  explicit constexpr DDouble(double h) : hi(h), lo(0.0) {}
};

namespace detail {

// Renormalize (s, e) with |e| roughly below ulp(s); NaN/Inf collapse lo to 0.
inline DDouble renorm(double s, double e) {
  if (!std::isfinite(s)) return {s, 0.0};
  const TwoSumResult r = quick_two_sum(s, e);
  return {r.value, r.error};
}

}  // namespace detail

inline DDouble ext_from(double a) { return DDouble(a); }
inline double ext_round(const DDouble& x) { return x.hi; }

inline DDouble ext_neg(const DDouble& x) { return {-x.hi, -x.lo}; }

inline DDouble ext_add(const DDouble& x, const DDouble& y) {
  TwoSumResult s = two_sum(x.hi, y.hi);
  if (!std::isfinite(s.value)) return {s.value, 0.0};
  const TwoSumResult t = two_sum(x.lo, y.lo);
  s = quick_two_sum(s.value, s.error + t.value);
  return detail::renorm(s.value, s.error + t.error);
}

inline DDouble ext_add(const DDouble& x, double y) {
  const TwoSumResult s = two_sum(x.hi, y);
  if (!std::isfinite(s.value)) return {s.value, 0.0};
  return detail::renorm(s.value, s.error + x.lo);
}

inline DDouble ext_sub(const DDouble& x, const DDouble& y) { return ext_add(x, ext_neg(y)); }
inline DDouble ext_sub(const DDouble& x, double y) { return ext_add(x, -y); }

inline DDouble ext_mul(const DDouble& x, const DDouble& y) {
  const TwoSumResult p = two_prod(x.hi, y.hi);
  if (!std::isfinite(p.value)) return {p.value, 0.0};
  return detail::renorm(p.value, p.error + (x.hi * y.lo + x.lo * y.hi));
}

inline DDouble ext_mul(const DDouble& x, double y) {
  const TwoSumResult p = two_prod(x.hi, y);
  if (!std::isfinite(p.value)) return {p.value, 0.0};
  return detail::renorm(p.value, p.error + x.lo * y);
}

/// Product of two binary64 values, exact as a DDouble.
inline DDouble ext_prod(double a, double b) {
  const TwoSumResult p = two_prod(a, b);
  return {p.value, p.error};
}

/// Quotient with one Newton-style correction; relative error a few eps^2.
/// Provided for extended-tier direct solves and test oracles.
inline DDouble ext_div(const DDouble& x, const DDouble& y) {
  const double q1 = x.hi / y.hi;
  if (!std::isfinite(q1)) return {q1, 0.0};
  const DDouble rem = ext_sub(x, ext_mul(y, q1));
  const double q2 = rem.hi / y.hi;
  const DDouble rem2 = ext_sub(rem, ext_mul(y, q2));
  const double q3 = rem2.hi / y.hi;
  return ext_add(ext_add(DDouble(q1), q2), q3);
}

inline DDouble ext_abs(const DDouble& x) { return x.hi < 0.0 ? ext_neg(x) : x; }

inline bool ext_isfinite(const DDouble& x) { return std::isfinite(x.hi); }

/// Extended-precision complex scalar (componentwise DDouble).
struct DDComplex {
  DDouble re;
  DDouble im;

  DDComplex() = default;
  DDComplex(const DDouble& r, const DDouble& i) : re(r), im(i) {}
  explicit DDComplex(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}
};

inline DDComplex ext_from(const std::complex<double>& z) { return DDComplex(z); }
inline std::complex<double> ext_round(const DDComplex& z) { return {z.re.hi, z.im.hi}; }

inline DDComplex ext_neg(const DDComplex& z) { return {ext_neg(z.re), ext_neg(z.im)}; }
inline DDComplex ext_conj(const DDComplex& z) { return {z.re, ext_neg(z.im)}; }
inline DDouble ext_conj(const DDouble& x) { return x; }

inline DDComplex ext_add(const DDComplex& x, const DDComplex& y) {
  return {ext_add(x.re, y.re), ext_add(x.im, y.im)};
}

inline DDComplex ext_add(const DDComplex& x, const std::complex<double>& y) {
  return {ext_add(x.re, y.real()), ext_add(x.im, y.imag())};
}

inline DDComplex ext_sub(const DDComplex& x, const DDComplex& y) {
  return {ext_sub(x.re, y.re), ext_sub(x.im, y.im)};
}

inline DDComplex ext_mul(const DDComplex& x, const DDComplex& y) {
  return {ext_sub(ext_mul(x.re, y.re), ext_mul(x.im, y.im)),
          ext_add(ext_mul(x.re, y.im), ext_mul(x.im, y.re))};
}

inline DDComplex ext_mul(const DDComplex& x, const std::complex<double>& y) {
  return {ext_sub(ext_mul(x.re, y.real()), ext_mul(x.im, y.imag())),
          ext_add(ext_mul(x.re, y.imag()), ext_mul(x.im, y.real()))};
}

/// Exact product of two binary64 complex values in the extended tier.
inline DDComplex ext_prod(const std::complex<double>& a, const std::complex<double>& b) {
  return {ext_add(ext_prod(a.real(), b.real()), ext_neg(ext_prod(a.imag(), b.imag()))),
          ext_add(ext_prod(a.real(), b.imag()), ext_prod(a.imag(), b.real()))};
}

inline DDComplex ext_div(const DDComplex& x, const DDComplex& y) {
  const DDouble denom = ext_add(ext_mul(y.re, y.re), ext_mul(y.im, y.im));
  const DDComplex num = ext_mul(x, ext_conj(y));
  return {ext_div(num.re, denom), ext_div(num.im, denom)};
}

inline bool ext_isfinite(const DDComplex& z) { return ext_isfinite(z.re) && ext_isfinite(z.im); }

/// |z|^2 in the extended tier.
inline DDouble ext_abs2(const DDComplex& z) {
  return ext_add(ext_mul(z.re, z.re), ext_mul(z.im, z.im));
}

inline DDouble ext_abs2(const DDouble& x) { return ext_mul(x, x); }

}  // namespace fbsmr
