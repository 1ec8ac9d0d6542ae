#include <catch2/catch_amalgamated.hpp>

#include "nrel/coset.hpp"
#include "nrel/rng.hpp"

using namespace nrel;

namespace {

Rat random_unit_rat(SplitMix64& rng, long p) {
  for (;;) {
    long num = rng.range(-5, 5);
    long den = rng.range(1, 5);
    if (num == 0) continue;
    Rat r(num, den);
    if (valuation(r, p) == 0) return r;
  }
}

// Random element of P_p = the mirabolic {[[a,b],[0,1]]} of the diagonal GL2.
Mat2 random_mirabolic(SplitMix64& rng, long p) {
  Rat a = random_unit_rat(rng, p) * pow_p(p, rng.range(-2, 2));
  Rat b = Rat(rng.range(-6, 6), rng.range(1, 4)) * pow_p(p, rng.range(-1, 1));
  return Mat2(a, b, 0, 1);
}

Mat2 random_k(SplitMix64& rng, long p) {
  for (;;) {
    Mat2 m(Rat(rng.range(-6, 6)), Rat(rng.range(-6, 6)), Rat(rng.range(-6, 6)),
           Rat(rng.range(-6, 6)));
    if (m.det() != 0 && in_gl2_zp(m, p)) return m;
  }
}

CanonicalCoset random_coset(SplitMix64& rng) {
  for (;;) {
    CanonicalCoset x{rng.range(-1, 1), rng.range(-1, 1), rng.range(-2, 2),
                     rng.range(0, 2)};
    if (x.valid()) return x;
  }
}

}  // namespace

TEST_CASE("canonicalize examples") {
  CHECK(canonicalize(Mat2::identity(), Mat2::identity(), 3) ==
        CanonicalCoset{0, 0, 0, 0});
  for (long p : {2L, 3L, 5L}) {
    CHECK(canonicalize(Mat2::scalar(Rat(p)), Mat2::scalar(Rat(p)), p) ==
          CanonicalCoset{1, 0, 0, 0});
    CHECK(canonicalize(Mat2::scalar(Rat(1, p)), Mat2::scalar(Rat(1, p)), p) ==
          CanonicalCoset{-1, 0, 0, 0});
  }
  // Slot-1 matrix [[p, 1/p],[0,1]] with trivial slot 2.
  CHECK(canonicalize(Mat2(3, Rat(1, 3), 0, 1), Mat2::identity(), 3) ==
        CanonicalCoset{0, 0, 1, 1});
  // Off-diagonal entry in Z_p clears.
  CHECK(canonicalize(Mat2(3, 1, 0, 1), Mat2::identity(), 3) ==
        CanonicalCoset{0, 0, 1, 0});
  // Slot-2 P-part transfers to slot 1.
  CHECK(canonicalize(Mat2::identity(), Mat2(3, 0, 0, 1), 3) ==
        CanonicalCoset{0, 0, -1, 0});
}

TEST_CASE("canonical_rep is a fixed point of canonicalize") {
  SplitMix64 rng(11);
  for (long p : {2L, 3L}) {
    for (int i = 0; i < 100; ++i) {
      CanonicalCoset x = random_coset(rng);
      CHECK(canonicalize(canonical_rep(x, p), p) == x);
    }
  }
}

TEST_CASE("canonicalize is invariant under left P (diagonal) and right K x K") {
  for (long p : {2L, 3L, 5L}) {
    SplitMix64 rng(101 + p);
    for (int i = 0; i < 100; ++i) {
      CanonicalCoset x = random_coset(rng);
      GElement g = canonical_rep(x, p);
      Mat2 rho = random_mirabolic(rng, p);
      GElement moved{rho * g.slot1 * random_k(rng, p),
                     rho * g.slot2 * random_k(rng, p)};
      CHECK(canonicalize(moved, p) == x);
    }
  }
}

TEST_CASE("distinct tuples give distinct double cosets") {
  // Spot-check injectivity: canonical reps of distinct valid tuples are not
  // related by (left P, right K x K); equivalently canonicalize separates them.
  SplitMix64 rng(77);
  long p = 3;
  for (int i = 0; i < 60; ++i) {
    CanonicalCoset x = random_coset(rng), y = random_coset(rng);
    if (x == y) continue;
    CHECK(canonicalize(canonical_rep(x, p), p) !=
          canonicalize(canonical_rep(y, p), p));
  }
}

TEST_CASE("volume_P_cap and volume_orbit closed forms") {
  long p = 3;
  CHECK(volume_P_cap({0, 0, 0, 0}, PVariant::P, p) == Rat(1));
  CHECK(volume_P_cap({0, 0, 0, 0}, PVariant::P1, p) == Rat(1, p - 1));
  CHECK(volume_P_cap({0, 0, 2, 0}, PVariant::P, p) == Rat(1, p * p));
  CHECK(volume_P_cap({0, 0, -3, 0}, PVariant::P, p) == Rat(1));
  CHECK(volume_P_cap({0, 0, 1, 1}, PVariant::P, p) == Rat(1, (p - 1) * p));
  CHECK(volume_P_cap({0, 0, 1, 1}, PVariant::P1, p) == Rat(1, (p - 1) * p));
  CHECK(volume_P_cap({0, 0, 0, 2}, PVariant::P, p) == Rat(1, (p - 1) * p));
  CHECK(volume_P_cap({0, 0, -1, 2}, PVariant::P, p) == Rat(1, p - 1));

  CHECK(volume_orbit({0, 0, 0, 0}, p) == Rat(1));
  CHECK(volume_orbit({0, 0, 2, 0}, p) == Rat(p * p));
  CHECK(volume_orbit({0, 0, -2, 0}, p) == Rat(1));
  CHECK(volume_orbit({0, 0, 1, 1}, p) == Rat((p - 1) * p));
  CHECK(volume_orbit({5, -2, 1, 1}, p) == Rat((p - 1) * p));
  CHECK(volume_orbit({0, 0, -1, 2}, p) == Rat(p - 1));
  // Volumes ignore the central parameters r0, r1.
  CHECK(volume_P_cap({3, -1, 1, 1}, PVariant::P, p) ==
        volume_P_cap({0, 0, 1, 1}, PVariant::P, p));
}

TEST_CASE("hecke_act on f0 by 1 - S1S2") {
  for (long p : {2L, 3L}) {
    HeckeElement theta = HeckeElement::one() - HeckeElement::Sp(1);
    PGCosetFunction g = hecke_act(theta, PGCosetFunction::f0(), p);
    CHECK(g.value({-1, 0, 0, 0}) == QSqrtP(-1));
    CHECK(g.value({0, 0, 0, 0}) == QSqrtP(1));
    CHECK(g.support.size() == 2);
  }
}

TEST_CASE("central generators shift r0 and r1") {
  long p = 3;
  CanonicalCoset x{0, 1, 1, 1};
  auto f = PGCosetFunction::indicator(x);
  CHECK(hecke_act(HeckeElement::Sp(1), f, p) ==
        PGCosetFunction::indicator({-1, 1, 1, 1}));
  CHECK(hecke_act(HeckeElement::Sp(-1), f, p) ==
        PGCosetFunction::indicator({1, 1, 1, 1}));
  CHECK(hecke_act(HeckeElement::S(1, 1), f, p) ==
        PGCosetFunction::indicator({0, 0, 1, 1}));
  CHECK(hecke_act(HeckeElement::S(1, -1), f, p) ==
        PGCosetFunction::indicator({0, 2, 1, 1}));
}

TEST_CASE("hecke_act is an algebra action") {
  for (long p : {2L, 3L}) {
    SplitMix64 rng(55 + p);
    std::vector<HeckeElement> gens = {
        HeckeElement::S(1, 1), HeckeElement::S(1, -1), HeckeElement::T(1),
        HeckeElement::S(2, 1), HeckeElement::S(2, -1), HeckeElement::T(2)};
    for (int i = 0; i < 20; ++i) {
      const HeckeElement& t1 = gens[rng.below(gens.size())];
      const HeckeElement& t2 = gens[rng.below(gens.size())];
      PGCosetFunction f = PGCosetFunction::indicator(random_coset(rng));
      if (rng.below(2)) f.add(random_coset(rng), QSqrtP(Rat(2)));
      CHECK(hecke_act(t1 * t2, f, p) == hecke_act(t1, hecke_act(t2, f, p), p));
      CHECK(hecke_act(t1 + t2, f, p) ==
            hecke_act(t1, f, p) + hecke_act(t2, f, p));
    }
  }
}

TEST_CASE("T1 on the base point") {
  // Only the beta = 0 representative lands back in the identity coset from
  // (0,0,-1,0), and only the lower representative does from (0,-1,1,0).
  for (long p : {2L, 3L}) {
    PGCosetFunction g = hecke_act(HeckeElement::T(1), PGCosetFunction::f0(), p);
    CHECK(g.value({0, 0, -1, 0}) == QSqrtP(1));
    CHECK(g.value({0, -1, 1, 0}) == QSqrtP(1));
    CHECK(g.support.size() == 2);
  }
}

TEST_CASE("phi/psi are mutually inverse") {
  long p = 3;
  SplitMix64 rng(123);
  for (int i = 0; i < 50; ++i) {
    PGCosetFunction f;
    for (int j = 0; j < 3; ++j)
      f.add(random_coset(rng), QSqrtP(Rat(rng.range(-3, 3)), Rat(0), p));
    CHECK(psi_iso(phi_iso(f, p), p) == f);
  }
}

TEST_CASE("generator action matches brute-force multiplicity counting") {
  // (θ·f)(y) = #{reps ρ : y·ρ in the support coset}; enumerate y over a
  // window around x wide enough to contain the support of θ·ch_x.
  for (long p : {2L, 3L}) {
    SplitMix64 rng(401 + p);
    for (int trial = 0; trial < 12; ++trial) {
      CanonicalCoset x = random_coset(rng);
      int which = (int)rng.below(6);
      PGCosetFunction acted =
          detail::act_generator(which, PGCosetFunction::indicator(x), p);
      auto reps = detail::generator_reps(which, p);
      for (long r0 = x.r0 - 3; r0 <= x.r0 + 3; ++r0)
        for (long r1 = x.r1 - 3; r1 <= x.r1 + 3; ++r1)
          for (long m = x.m - 3; m <= x.m + 3; ++m)
            for (long n = 0; n <= x.n + 3; ++n) {
              CanonicalCoset y{r0, r1, m, n};
              if (!y.valid()) continue;
              GElement ry = canonical_rep(y, p);
              long mult = 0;
              for (const auto& rho : reps)
                if (canonicalize(ry * rho, p) == x) ++mult;
              CHECK(acted.value(y) == QSqrtP(Rat(mult)));
            }
      // no support outside the window
      for (const auto& [y, v] : acted.support) {
        CHECK(std::abs(y.r0 - x.r0) <= 3);
        CHECK(std::abs(y.r1 - x.r1) <= 3);
        CHECK(std::abs(y.m - x.m) <= 3);
        CHECK(y.n <= x.n + 3);
      }
    }
  }
}
