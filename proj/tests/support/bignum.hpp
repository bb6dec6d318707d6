// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

/// \file bignum.hpp
/// \brief Thin RAII wrapper over MPFR used as the big-significand oracle.
///
/// 4096-bit significands make every binary64 value, every pairwise sum, and
/// every pairwise product of in-range doubles exactly representable, so the
/// oracle evaluates error-free-transform identities exactly.  Test-only; the
/// library itself never touches MPFR.

#pragma once

#include <mpfr.h>

#include <cmath>
#include <string>

namespace fbsmr::testing {

class BigFloat {
 public:
  static constexpr mpfr_prec_t kPrecision = 4096;

  BigFloat() { mpfr_init2(v_, kPrecision); mpfr_set_zero(v_, 1); }
  explicit BigFloat(double d) { mpfr_init2(v_, kPrecision); mpfr_set_d(v_, d, MPFR_RNDN); }
  BigFloat(const BigFloat& o) { mpfr_init2(v_, kPrecision); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  BigFloat operator+(const BigFloat& o) const {
    BigFloat r;
    mpfr_add(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
  }
  BigFloat operator-(const BigFloat& o) const {
    BigFloat r;
    mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
  }
  BigFloat operator*(const BigFloat& o) const {
    BigFloat r;
    mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
  }
  BigFloat operator/(const BigFloat& o) const {
    BigFloat r;
    mpfr_div(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
  }

  bool operator==(const BigFloat& o) const { return mpfr_cmp(v_, o.v_) == 0; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  BigFloat abs() const {
    BigFloat r;
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
  }

 private:
  mpfr_t v_;
};

inline BigFloat big_sum2(double a, double b) { return BigFloat(a) + BigFloat(b); }
inline BigFloat big_prod2(double a, double b) { return BigFloat(a) * BigFloat(b); }

/// |x - ref| / |ref|, with |x| returned when ref == 0.
inline double relative_error(const BigFloat& x, const BigFloat& ref) {
  if (ref.is_zero()) return (x - ref).abs().to_double();
  return ((x - ref).abs() / ref.abs()).to_double();
}

}  // namespace fbsmr::testing
