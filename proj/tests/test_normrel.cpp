#include <catch2/catch_amalgamated.hpp>

#include "nrel/normrel.hpp"
#include "nrel/rng.hpp"
#include "nrel/sampling.hpp"

using namespace nrel;

namespace {

/// The δ₁-shape datum at level G°[p]: c·φ_{p,2}⊗(ch(G°[p]) − ch((1,u)G°[p]))
/// with u = [[1,1/p],[0,1]].
std::vector<LatticeElement> delta1_datum(const Rat& c, long p) {
  Mat2 u(Rat(1), Rat(1, p), Rat(0), Rat(1));
  return {{c, SchwartzFunction::phi_p2(p), GElement::identity(), Level::DetP},
          {-c, SchwartzFunction::phi_p2(p), {Mat2::identity(), u},
           Level::DetP}};
}

CanonicalCoset random_coset(SplitMix64& rng, long r0lo, long r0hi) {
  for (;;) {
    CanonicalCoset x{rng.range(r0lo, r0hi), rng.range(-2, 2), rng.range(-2, 2),
                     rng.range(0, 2)};
    if (x.valid()) return x;
  }
}

}  // namespace

TEST_CASE("q_operator at the base point is 1 - S_p") {
  for (long p : {2L, 3L, 5L}) {
    HeckeElement q = q_operator({0, 0, 0, 0}, p);
    CHECK(q == HeckeElement::one() - HeckeElement::Sp(1));
    SplitMix64 rng(11 + p);
    SatakeData sat = sample_satake(rng, p);
    CHECK(theta_eval(q, sat) == QSqrtP(1) - sat.omega());
  }
}

TEST_CASE("q_operator Q-part: zero for n = 0, boundary shell for n = 1") {
  long p = 3;
  for (const CanonicalCoset& x :
       {CanonicalCoset{0, 0, 1, 0}, CanonicalCoset{0, 0, -1, 0},
        CanonicalCoset{1, 1, 2, 0}})
    CHECK(q_operator_split(x, p).q_part.is_zero());
  // (0,0,0,1): 𝒱 = p−1, 𝒫 = 1−S₁S₂, 𝒬 = −p/(p−1); the assembled operator is
  // (p−1)(1−S₁S₂) − p·𝒫_p(1), integral as the lemma asserts.
  HeckeElement q = q_operator({0, 0, 0, 1}, p);
  HeckeElement expect =
      QSqrtP(Rat(p - 1)) * (HeckeElement::one() - HeckeElement::Sp(1)) -
      QSqrtP(Rat(p)) * euler_at_one(p);
  CHECK(q == expect);
  CHECK(is_integral(q, p));
}

TEST_CASE("P-parts match the small-operator table") {
  for (long p : {2L, 3L}) {
    // m = 1: 𝒱·𝒫 = p·(1/p)(T₁ − S₁T₂) = T₁ − S₁T₂.
    CHECK(q_operator_split({0, 0, 1, 0}, p).p_part ==
          HeckeElement::T(1) - HeckeElement::S(1) * HeckeElement::T(2));
    // m = −1: 𝒱·𝒫 = T₂ − S₂T₁.
    CHECK(q_operator_split({0, 0, -1, 0}, p).p_part ==
          HeckeElement::T(2) - HeckeElement::S(2) * HeckeElement::T(1));
  }
}

TEST_CASE("Theta of q_operator equals the Whittaker functional") {
  for (long p : {2L, 3L}) {
    SplitMix64 rng(501 + p);
    for (int i = 0; i < 12; ++i) {
      CanonicalCoset x = random_coset(rng, 0, 2);
      SatakeData sat = sample_satake(rng, p);
      HeckeElement q = q_operator(x, p);
      INFO("x = " << x << " p = " << p);
      CHECK(theta_eval(q, sat) == lambda_value(PGCosetFunction::indicator(x), sat));
      CHECK(is_integral(q, p));
    }
    // Negative central exponents remain integral (S_p^{-1} is a unit).
    CHECK(is_integral(q_operator({-2, 1, 0, 1}, p), p));
  }
}

TEST_CASE("p_of_function examples") {
  for (long p : {2L, 3L}) {
    CHECK(p_of_function(PGCosetFunction::f0(), p) ==
          (LocalizedHecke{HeckeElement::one(), 0}));
    CHECK(p_of_function(PGCosetFunction::indicator({1, 0, 0, 0}), p) ==
          (LocalizedHecke{HeckeElement::Sp(-1), 0}));
    CHECK(p_of_function(PGCosetFunction{}, p).numer.is_zero());
  }
}

TEST_CASE("p_delta examples at level Full") {
  for (long p : {2L, 3L}) {
    std::vector<LatticeElement> delta0 = {
        {Rat(1), SchwartzFunction::phi0(p), GElement::identity(), Level::Full}};
    CHECK(p_delta(delta0) == (LocalizedHecke{HeckeElement::one(), 0}));
    std::vector<LatticeElement> central = {
        {Rat(1), SchwartzFunction::phi0(p),
         {Mat2::scalar(Rat(p)), Mat2::scalar(Rat(p))}, Level::Full}};
    CHECK(p_delta(central) == (LocalizedHecke{HeckeElement::Sp(-1), 0}));
  }
}

TEST_CASE("apply_to_f0_matches realizes the freeness formula") {
  for (long p : {2L, 3L}) {
    CHECK(apply_to_f0_matches({HeckeElement::one(), 0},
                              PGCosetFunction::f0(), p));
    CHECK(apply_to_f0_matches(
        {QSqrtP(Rat(p - 1)) * HeckeElement::one(), 0},
        PGCosetFunction::indicator({0, 0, 0, 0}, QSqrtP(Rat(p - 1))), p));
    SplitMix64 rng(707 + p);
    for (int i = 0; i < 4; ++i) {
      PGCosetFunction f = PGCosetFunction::indicator(random_coset(rng, -1, 1));
      if (rng.below(2))
        f.add(random_coset(rng, -1, 1), QSqrtP(Rat(rng.range(1, 2))));
      LocalizedHecke P = p_of_function(f, p);
      INFO("p = " << p << " i = " << i);
      CHECK(apply_to_f0_matches(P, f, p));
    }
  }
}

TEST_CASE("certificate of the delta_0 datum") {
  for (long p : {2L, 3L, 5L}) {
    std::vector<LatticeElement> delta0 = {
        {Rat(p - 1), SchwartzFunction::phi0(p), GElement::identity(),
         Level::DetP}};
    IdealCertificate cert = certificate(delta0, SVariant::S);
    CHECK(cert.verified);
    CHECK(cert.note.empty());
    CHECK(cert.denomPower == 0);
    CHECK(cert.A == HeckeElement::one());
    CHECK(cert.B.is_zero());
    CHECK(cert.target ==
          (LocalizedHecke{QSqrtP(Rat(p - 1)) * HeckeElement::one(), 0}));
    CHECK(cert.check_identity());
  }
  CHECK_THROWS_AS(certificate({}, SVariant::S), std::domain_error);
  std::vector<LatticeElement> full = {
      {Rat(1), SchwartzFunction::phi0(3), GElement::identity(), Level::Full}};
  CHECK_THROWS_AS(certificate(full, SVariant::S), std::domain_error);
}

TEST_CASE("delta_1 with the corrected coefficient gives the Euler factor") {
  // With coefficient p(p−1)²(p+1) the traced datum maps exactly to
  // dual(𝒫_p(1))·f₀ and certifies with target dual(𝒫_p(1)).
  for (long p : {2L, 3L}) {
    Rat c = Rat(p) * Rat((p - 1) * (p - 1)) * Rat(p + 1);
    auto delta = delta1_datum(c, p);
    PGCosetFunction f = xi_c(trace_level(delta));
    PGCosetFunction target =
        hecke_act(dual(euler_at_one(p)), PGCosetFunction::f0(), p);
    CHECK(f == target);
    IdealCertificate cert = certificate(delta, SVariant::S0);
    CHECK(cert.verified);
    CHECK(cert.denomPower == 0);
    CHECK(cert.target == (LocalizedHecke{dual(euler_at_one(p)), 0}));
    if (p == 3) {
      ModEllRelation rel = mod_ell_certificate(cert, 2);
      CHECK(rel.verified);
      CHECK(rel.ell == 2);
    }
  }
}

TEST_CASE("delta_1 with the presented coefficient misses by n_p^2/p exactly") {
  // Honest record: the literal coefficient n_p = 1/((p−1)²(p+1)) produces a
  // function exactly proportional to the Euler-factor target, scaled by
  // n_p²/p — so the certificate reports a falsification instead of a proof.
  for (long p : {2L, 3L}) {
    long pm1 = p - 1, pp1 = p + 1;
    Rat np = Rat(1, pm1 * pm1 * pp1);
    auto delta = delta1_datum(np, p);
    PGCosetFunction f = xi_c(trace_level(delta));
    PGCosetFunction target =
        hecke_act(dual(euler_at_one(p)), PGCosetFunction::f0(), p);
    CHECK(f == QSqrtP(np * np / p) * target);
    CHECK_FALSE(f == target);
    IdealCertificate cert = certificate(delta, SVariant::S0);
    CHECK_FALSE(cert.verified);
    CHECK_FALSE(cert.note.empty());
  }
}

TEST_CASE("random certified S0 data at p = 3 produce verified certificates") {
  long p = 3;
  SplitMix64 rng(2024);
  for (int i = 0; i < 5; ++i) {
    auto delta = sample_delta(rng, p, Level::DetP, SVariant::S0, 1 + rng.below(2));
    REQUIRE(lattice_membership(delta, SVariant::S0));
    IdealCertificate cert = certificate(delta, SVariant::S0);
    INFO("i = " << i << " note = " << cert.note);
    CHECK(cert.verified);
    CHECK(cert.denomPower == 0);
    ModEllRelation rel = mod_ell_certificate(cert, 2);
    CHECK(rel.verified);
  }
}

TEST_CASE("random certified variant-S data keep denomPower at most one") {
  long p = 3;
  SplitMix64 rng(4096);
  for (int i = 0; i < 3; ++i) {
    auto delta = sample_delta(rng, p, Level::DetP, SVariant::S, 1);
    REQUIRE(lattice_membership(delta, SVariant::S));
    IdealCertificate cert = certificate(delta, SVariant::S);
    INFO("i = " << i << " note = " << cert.note);
    CHECK(cert.verified);
    CHECK(cert.denomPower <= 1);
  }
}

TEST_CASE("Full-level certified data have integral p_delta") {
  for (long p : {2L, 3L}) {
    SplitMix64 rng(88 + p);
    for (int i = 0; i < 3; ++i) {
      auto delta = sample_delta(rng, p, Level::Full, SVariant::S, 1);
      REQUIRE(lattice_membership(delta, SVariant::S));
      LocalizedHecke P = p_delta(delta);
      INFO("p = " << p << " i = " << i);
      CHECK(P.denomPower == 0);
      CHECK(is_integral(P.numer, p));
      CHECK(apply_to_f0_matches(P, xi_c(delta), p));
    }
  }
}

TEST_CASE("independence_check") {
  long p = 3;
  CHECK(independence_check({{0, 0, 0, 0}}, p));
  std::vector<CanonicalCoset> family;
  for (long m = -2; m <= 2; ++m)
    for (long n = 0; n <= 2; ++n) {
      CanonicalCoset x{0, 0, m, n};
      if (x.valid()) family.push_back(x);
    }
  CHECK(family.size() == 12);
  CHECK(independence_check(family, p));
  CHECK(independence_check(family, 2));
  family.push_back(family.front());
  CHECK_FALSE(independence_check(family, p));
}

TEST_CASE("mod_ell_certificate content and error paths") {
  long p = 3;
  std::vector<LatticeElement> delta0 = {
      {Rat(p - 1), SchwartzFunction::phi0(p), GElement::identity(),
       Level::DetP}};
  IdealCertificate cert = certificate(delta0, SVariant::S);
  // p−1 ≡ 0 and B = 0: the reduced target vanishes identically.
  ModEllRelation rel = mod_ell_certificate(cert, 2);
  CHECK(rel.verified);
  CHECK(rel.target.empty());
  CHECK(rel.B.empty());
  CHECK_FALSE(rel.p_prime.empty());
  // ℓ must divide p−1.
  CHECK_THROWS_AS(mod_ell_certificate(cert, 5), std::domain_error);
  // A denominator power blocks reduction.
  IdealCertificate pending = cert;
  pending.denomPower = 1;
  CHECK_THROWS_AS(mod_ell_certificate(pending, 2), std::domain_error);
}
