#pragma once

/**
 * @file sampling.hpp
 * @brief Seed-deterministic samplers for property suites: Satake tuples
 *        with genericity rejection (small nonzero rationals).
 */

#include "hecke.hpp"
#include "rng.hpp"
#include "schwartz.hpp"

namespace nrel {

/// Small nonzero rational, |num| ≤ 4, den ≤ 3.
inline Rat small_nonzero_rational(SplitMix64& rng) {
  for (;;) {
    long num = rng.range(-4, 4);
    long den = rng.range(1, 3);
    if (num != 0) return Rat(num, den);
  }
}

/**
 * Generic Satake tuple: rejects α_i = β_i, ω = 1 and α_iα'_j = 1 so that
 * all evaluations at X = 1 are defined.
 */
inline SatakeData sample_satake(SplitMix64& rng, long p) {
  for (;;) {
    SatakeData sat;
    sat.p = p;
    sat.a1 = QSqrtP(small_nonzero_rational(rng), Rat(0), p);
    sat.b1 = QSqrtP(small_nonzero_rational(rng), Rat(0), p);
    sat.a2 = QSqrtP(small_nonzero_rational(rng), Rat(0), p);
    sat.b2 = QSqrtP(small_nonzero_rational(rng), Rat(0), p);
    // Occasionally include a genuine √p part to exercise Q(√p) arithmetic.
    if (rng.below(4) == 0) sat.a1.irr = Rat(rng.range(1, 2));
    if (rng.below(4) == 0) sat.b2.irr = Rat(rng.range(1, 2));
    if (sat.generic()) return sat;
  }
}

/**
 * Shallow level datum: identity, a one-slot unipotent p^{-1}-translate, a
 * one-slot diag(p,1), or the central p-translate — kept shallow so the Ξ
 * windows and stabilizer-volume enumerations stay small.
 */
inline GElement sample_g(SplitMix64& rng, long p) {
  Mat2 id = Mat2::identity();
  Mat2 u(Rat(1), Rat(1, p), Rat(0), Rat(1));
  Mat2 d = Mat2::diag(Rat(p), Rat(1));
  switch (rng.below(6)) {
    case 0: return {id, id};
    case 1: return {u, id};
    case 2: return {id, u};
    case 3: return {d, id};
    case 4: return {id, d};
    default: return {Mat2::scalar(Rat(p)), Mat2::scalar(Rat(p))};
  }
}

/// Depth-1 grid function with small integer values; optionally vanishing at 0.
inline SchwartzFunction sample_box_function(SplitMix64& rng, long p,
                                            bool vanish_at_origin) {
  for (;;) {
    std::vector<std::pair<Box, Rat>> parts;
    int k = 1 + (int)rng.below(2);
    for (int i = 0; i < k; ++i) {
      long a = rng.range(0, p - 1), c = rng.range(0, p - 1);
      if (vanish_at_origin && a == 0 && c == 0) continue;
      parts.emplace_back(Box{Rat(a), 1, Rat(c), 1}, Rat(rng.range(-3, 3)));
    }
    SchwartzFunction phi = SchwartzFunction::from_boxes(parts, p);
    if (!phi.is_zero() &&
        !(vanish_at_origin && phi.evaluate(Rat(0), Rat(0)) != 0))
      return phi;
  }
}

/**
 * Literal-certified lattice data: each generator's coefficient lies in
 * (1/vol)·Z[1/p] with vol the stabilizer-intersection volume, so every value
 * of coeff·φ sits in (1/vol)·Z[1/p] and the datum is certified for the
 * integral lattice (and a fortiori passes lattice_membership).
 */
inline std::vector<LatticeElement> sample_delta(SplitMix64& rng, long p,
                                                Level level, SVariant variant,
                                                int count,
                                                double ceiling = 2e6) {
  std::vector<LatticeElement> out;
  for (int i = 0; i < count; ++i) {
    SchwartzFunction phi =
        sample_box_function(rng, p, variant == SVariant::S0);
    GElement g = sample_g(rng, p);
    Rat vol = volume_stab_intersection(phi, g, level, ceiling);
    long k = 0;
    while (k == 0) k = rng.range(-2, 2);
    Rat coeff = Rat(k) / vol * pow_p(p, rng.range(-1, 1));
    out.push_back({coeff, phi, g, level});
  }
  return out;
}

}  // namespace nrel
