#include <catch2/catch_amalgamated.hpp>

#include "nrel/padic.hpp"
#include "nrel/rng.hpp"

using namespace nrel;

namespace {

Mat2 random_matrix(SplitMix64& rng, long p) {
  // Entries p^e * small rational, retried until invertible.
  for (;;) {
    auto entry = [&]() {
      long e = rng.range(-2, 2);
      Rat num(rng.range(-5, 5));
      Rat den(rng.range(1, 5));
      return num == 0 ? Rat(0) : num / den * pow_p(p, e);
    };
    Mat2 m(entry(), entry(), entry(), entry());
    if (m.det() != 0) return m;
  }
}

Mat2 random_unit(SplitMix64& rng, long p) {
  for (;;) {
    Mat2 m(Rat(rng.range(-6, 6)), Rat(rng.range(-6, 6)), Rat(rng.range(-6, 6)),
           Rat(rng.range(-6, 6)));
    if (m.det() != 0 && in_gl2_zp(m, p)) return m;
  }
}

}  // namespace

TEST_CASE("valuation basics") {
  CHECK(valuation(Rat(1), 3) == 0);
  CHECK(valuation(Rat(9, 2), 3) == 2);
  CHECK(valuation(Rat(3, 25), 5) == -2);
  CHECK_THROWS_AS(valuation(Rat(0), 3), std::domain_error);
}

TEST_CASE("in_gl2_zp basics") {
  long p = 5;
  CHECK(in_gl2_zp(Mat2::identity(), p));
  CHECK_FALSE(in_gl2_zp(Mat2::diag(Rat(p), Rat(1)), p));
  CHECK_FALSE(in_gl2_zp(Mat2(1, Rat(1, p), 0, 1), p));
}

TEST_CASE("iwasawa_decompose examples") {
  long p = 3;
  auto iw = iwasawa_decompose(Mat2::identity(), p);
  CHECK(iw.t1 == 0);
  CHECK(iw.t2 == 0);
  CHECK(iw.y == 0);
  CHECK(iw.k == Mat2::identity());

  auto iw2 = iwasawa_decompose(Mat2(Rat(p), 1, 0, 1), p);
  CHECK(iw2.t1 == 1);
  CHECK(iw2.t2 == 0);
  CHECK(iw2.y == 1);
  CHECK(iw2.k == Mat2::identity());

  Mat2 g(1, 0, 1, 1);
  auto iw3 = iwasawa_decompose(g, p);
  CHECK(iw3.t1 == 0);
  CHECK(iw3.t2 == 0);
  Mat2 b(pow_p(p, iw3.t1), iw3.y, 0, pow_p(p, iw3.t2));
  CHECK(b * iw3.k == g);
  CHECK(in_gl2_zp(iw3.k, p));
}

TEST_CASE("iwasawa recomposes on random matrices") {
  for (long p : {2L, 3L, 5L}) {
    SplitMix64 rng(42 + p);
    for (int i = 0; i < 200; ++i) {
      Mat2 g = random_matrix(rng, p);
      auto iw = iwasawa_decompose(g, p);
      Mat2 b(pow_p(p, iw.t1), iw.y, 0, pow_p(p, iw.t2));
      CHECK(b * iw.k == g);
      CHECK(in_gl2_zp(iw.k, p));
    }
  }
}

TEST_CASE("smith_normal_form examples") {
  long p = 3;
  auto s = smith_normal_form(Mat2::diag(Rat(p), 1), p);
  CHECK(s.a == 0);
  CHECK(s.c == 1);
  auto s2 = smith_normal_form(Mat2(Rat(p * p), 1, 0, Rat(p)), p);
  CHECK(s2.a == 0);
  CHECK(s2.c == 3);
  auto s3 = smith_normal_form(Mat2::identity(), p);
  CHECK(s3.a == 0);
  CHECK(s3.c == 0);
}

TEST_CASE("smith recomposes and divisors are invariant") {
  for (long p : {2L, 5L}) {
    SplitMix64 rng(7 + p);
    for (int i = 0; i < 150; ++i) {
      Mat2 g = random_matrix(rng, p);
      auto s = smith_normal_form(g, p);
      CHECK(s.a <= s.c);
      CHECK(in_gl2_zp(s.k1, p));
      CHECK(in_gl2_zp(s.k2, p));
      Mat2 d = Mat2::diag(pow_p(p, s.a), pow_p(p, s.c));
      CHECK(s.k1 * d * s.k2 == g);
      // Invariance under unit multiplication.
      auto s2 = smith_normal_form(random_unit(rng, p) * g * random_unit(rng, p), p);
      CHECK(s2.a == s.a);
      CHECK(s2.c == s.c);
    }
  }
}

TEST_CASE("solve_double_coset examples") {
  long p = 3;
  auto k0 = solve_double_coset(Mat2::identity(), Mat2::identity(), p);
  REQUIRE(k0.has_value());
  CHECK(in_gl2_zp(*k0, p));

  auto k1 = solve_double_coset(Mat2::diag(Rat(p), 1), Mat2::diag(Rat(1, p), 1), p);
  REQUIRE(k1.has_value());
  CHECK(in_gl2_zp(*k1, p));
  CHECK(in_gl2_zp(Mat2::diag(Rat(p), 1) * *k1 * Mat2::diag(Rat(1, p), 1), p));

  CHECK_FALSE(solve_double_coset(Mat2::diag(Rat(p), 1), Mat2::identity(), p));
}

TEST_CASE("solve_double_coset iff divisor multisets match") {
  for (long p : {2L, 3L}) {
    SplitMix64 rng(99 + p);
    for (int i = 0; i < 100; ++i) {
      Mat2 A = random_matrix(rng, p), B = random_matrix(rng, p);
      auto sa = smith_normal_form(A, p);
      auto sb = smith_normal_form(B.inverse(), p);
      auto k = solve_double_coset(A, B, p);
      bool match = sa.a == sb.a && sa.c == sb.c;
      CHECK(k.has_value() == match);
      if (k) {
        CHECK(in_gl2_zp(*k, p));
        CHECK(in_gl2_zp(A * *k * B, p));
      }
    }
  }
}
