// Copyright (c) 2026 The FBSMR Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "fbsmr/ddouble.hpp"
#include "support/bignum.hpp"

using namespace fbsmr;
using fbsmr::testing::BigFloat;
using fbsmr::testing::relative_error;

namespace {

double uniform_pm1(std::mt19937_64& rng) {
  // 53 random bits mapped to [-1, 1); deterministic across platforms.
  const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
  return 2.0 * u - 1.0;
}

BigFloat big_of(const DDouble& x) { return BigFloat(x.hi) + BigFloat(x.lo); }

}  // namespace

TEST_CASE("two_sum recovers error terms below the ulp") {
  const auto r = two_sum(1.0, 0x1p-60);
  CHECK(r.value == 1.0);
  CHECK(r.error == 0x1p-60);
}

TEST_CASE("two_sum identity on zero addend") {
  for (double x : {1.0, -3.5, 0x1p300, 0x1p-300, 0.0}) {
    const auto r = two_sum(x, 0.0);
    CHECK(r.value == x);
    CHECK(r.error == 0.0);
  }
}

TEST_CASE("two_sum is an exact decomposition on random pairs") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 100000; ++i) {
    const double a = uniform_pm1(rng);
    const double b = uniform_pm1(rng);
    const auto r = two_sum(a, b);
    REQUIRE(fbsmr::testing::big_sum2(a, b) == fbsmr::testing::big_sum2(r.value, r.error));
  }
}

TEST_CASE("two_prod splits the square of 1+2^-27 exactly") {
  const double x = 1.0 + 0x1p-27;
  const auto r = two_prod(x, x);
  // (1+e)^2 = 1 + 2e + e^2 with e = 2^-27; the e^2 = 2^-54 term is the
  // rounding error of the binary64 product.
  CHECK(r.value == 1.0 + 0x1p-26);
  CHECK(r.error == 0x1p-54);
}

TEST_CASE("two_prod identity on unit factor") {
  for (double x : {1.0, -3.5, 0.1, 0x1p200}) {
    const auto r = two_prod(x, 1.0);
    CHECK(r.value == x);
    CHECK(r.error == 0.0);
  }
}

TEST_CASE("two_prod is an exact decomposition on random pairs") {
  std::mt19937_64 rng(54321);
  for (int i = 0; i < 100000; ++i) {
    const double a = uniform_pm1(rng);
    const double b = uniform_pm1(rng);
    const auto r = two_prod(a, b);
    REQUIRE(fbsmr::testing::big_prod2(a, b) == fbsmr::testing::big_sum2(r.value, r.error));
  }
}

TEST_CASE("Dekker-split two_prod matches the fma path in exactness") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20000; ++i) {
    const double a = uniform_pm1(rng);
    const double b = uniform_pm1(rng);
    const auto r = detail::two_prod_split(a, b);
    REQUIRE(fbsmr::testing::big_prod2(a, b) == fbsmr::testing::big_sum2(r.value, r.error));
  }
}

TEST_CASE("extended value retains components far below the working ulp") {
  const DDouble x = ext_add(ext_from(1.0), ext_from(0x1p-80));
  CHECK(ext_round(x) == 1.0);
  CHECK(x.lo == 0x1p-80);
}

TEST_CASE("ext_mul identity") {
  const DDouble x{0.1, 1.2e-18};
  const DDouble r = ext_mul(x, ext_from(1.0));
  CHECK(r.hi == x.hi);
  CHECK(r.lo == x.lo);
}

TEST_CASE("ext_round of ext_from is the identity on binary64") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double a = uniform_pm1(rng) * std::pow(10.0, (i % 40) - 20);
    CHECK(ext_round(ext_from(a)) == a);
  }
}

TEST_CASE("summing 0.1 ten thousand times stays within 1e-28 of the oracle") {
  DDouble acc;
  BigFloat ref;
  const BigFloat tenth(0.1);
  for (int i = 0; i < 10000; ++i) {
    acc = ext_add(acc, ext_from(0.1));
    ref = ref + tenth;
  }
  CHECK(relative_error(big_of(acc), ref) <= 1e-28);
}

TEST_CASE("ext_add and ext_mul keep eps^2-level relative error on random triples") {
  std::mt19937_64 rng(2024);
  const double bound = 8.0 * kEps * kEps;
  for (int i = 0; i < 10000; ++i) {
    const DDouble x = ext_prod(uniform_pm1(rng), uniform_pm1(rng));
    const DDouble y = ext_prod(uniform_pm1(rng), uniform_pm1(rng));
    const DDouble z = ext_prod(uniform_pm1(rng), uniform_pm1(rng));

    const DDouble s = ext_add(ext_add(x, y), z);
    const BigFloat s_ref = big_of(x) + big_of(y) + big_of(z);
    REQUIRE(relative_error(big_of(s), s_ref) <= bound);

    const DDouble p = ext_mul(ext_mul(x, y), z);
    const BigFloat p_ref = big_of(x) * big_of(y) * big_of(z);
    REQUIRE(relative_error(big_of(p), p_ref) <= bound);
  }
}

TEST_CASE("ext_add/ext_mul commute bitwise") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 5000; ++i) {
    const DDouble x = ext_prod(uniform_pm1(rng), uniform_pm1(rng));
    const DDouble y = ext_prod(uniform_pm1(rng), uniform_pm1(rng));
    const DDouble ab = ext_add(x, y), ba = ext_add(y, x);
    CHECK(ab.hi == ba.hi);
    CHECK(ab.lo == ba.lo);
    const DDouble mab = ext_mul(x, y), mba = ext_mul(y, x);
    CHECK(mab.hi == mba.hi);
    CHECK(mab.lo == mba.lo);
  }
}

TEST_CASE("associativity holds to 8 eps^2 on random triples") {
  std::mt19937_64 rng(555);
  const double bound = 8.0 * kEps * kEps;
  for (int i = 0; i < 10000; ++i) {
    const DDouble x = ext_from(uniform_pm1(rng));
    const DDouble y = ext_from(uniform_pm1(rng));
    const DDouble z = ext_from(uniform_pm1(rng));
    const DDouble lhs = ext_add(ext_add(x, y), z);
    const DDouble rhs = ext_add(x, ext_add(y, z));
    const BigFloat ref = big_of(x) + big_of(y) + big_of(z);
    if (ref.is_zero()) continue;
    const double d = ((big_of(lhs) - big_of(rhs)).abs() / ref.abs()).to_double();
    REQUIRE(d <= 2.0 * bound);
  }
}

TEST_CASE("ext_div reaches eps^2 accuracy with one refinement") {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 5000; ++i) {
    const DDouble x = ext_prod(uniform_pm1(rng), uniform_pm1(rng));
    double d = uniform_pm1(rng);
    if (std::fabs(d) < 1e-3) d += (d >= 0 ? 1.0 : -1.0);
    const DDouble y = ext_from(d);
    const DDouble q = ext_div(x, y);
    REQUIRE(relative_error(big_of(q), big_of(x) / big_of(y)) <= 16.0 * kEps * kEps);
  }
}

TEST_CASE("non-finite hi collapses lo to zero") {
  const DDouble inf = ext_add(ext_from(std::numeric_limits<double>::max()),
                              ext_from(std::numeric_limits<double>::max()));
  CHECK(std::isinf(inf.hi));
  CHECK(inf.lo == 0.0);
  const DDouble nan = ext_mul(inf, ext_from(0.0));
  CHECK(std::isnan(nan.hi));
  CHECK(nan.lo == 0.0);
  CHECK(!ext_isfinite(nan));
}

TEST_CASE("normalized results keep |lo| at or below half an ulp of hi") {
  std::mt19937_64 rng(808);
  for (int i = 0; i < 20000; ++i) {
    const DDouble x = ext_prod(uniform_pm1(rng), uniform_pm1(rng));
    const DDouble y = ext_prod(uniform_pm1(rng), uniform_pm1(rng));
    const DDouble s = ext_add(x, y);
    if (s.hi == 0.0) continue;
    const double ulp = std::nexttoward(std::fabs(s.hi), INFINITY) - std::fabs(s.hi);
    REQUIRE(std::fabs(s.lo) <= 0.5 * ulp * (1.0 + 4.0 * kEps));
    REQUIRE(s.hi + s.lo == s.hi);
  }
}

TEST_CASE("complex extended arithmetic against the componentwise oracle") {
  std::mt19937_64 rng(1618);
  const double bound = 64.0 * kEps * kEps;
  for (int i = 0; i < 2000; ++i) {
    const std::complex<double> a{uniform_pm1(rng), uniform_pm1(rng)};
    const std::complex<double> b{uniform_pm1(rng), uniform_pm1(rng)};
    const std::complex<double> c{uniform_pm1(rng), uniform_pm1(rng)};

    const DDComplex p = ext_mul(ext_add(ext_from(a), ext_from(b)), ext_from(c));
    // (a+b)*c expanded in the real/imaginary oracle.
    const BigFloat sr = BigFloat(a.real()) + BigFloat(b.real());
    const BigFloat si = BigFloat(a.imag()) + BigFloat(b.imag());
    const BigFloat pr = sr * BigFloat(c.real()) - si * BigFloat(c.imag());
    const BigFloat pi = sr * BigFloat(c.imag()) + si * BigFloat(c.real());
    REQUIRE(relative_error(big_of(p.re), pr) <= bound);
    REQUIRE(relative_error(big_of(p.im), pi) <= bound);
  }
}

TEST_CASE("complex extended division round-trips") {
  std::mt19937_64 rng(2718);
  for (int i = 0; i < 2000; ++i) {
    const std::complex<double> a{uniform_pm1(rng), uniform_pm1(rng)};
    std::complex<double> d{uniform_pm1(rng), uniform_pm1(rng)};
    if (std::abs(d) < 1e-3) d += std::complex<double>(1.0, 1.0);
    const DDComplex q = ext_div(ext_from(a), ext_from(d));
    const DDComplex back = ext_mul(q, ext_from(d));
    const double err = std::hypot(ext_round(ext_sub(back, ext_from(a)).re),
                                  ext_round(ext_sub(back, ext_from(a)).im));
    REQUIRE(err <= 64.0 * kEps * kEps * std::abs(a) + 1e-300);
  }
}
