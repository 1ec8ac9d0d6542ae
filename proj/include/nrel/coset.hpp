#pragma once

/**
 * @file coset.hpp
 * @brief Canonical forms for P_p\G_p/G_p° double cosets, orbit/intersection
 *        volumes, the Hecke-module action on C_c^∞(P_p\G_p/G_p°), and the
 *        invariants↔coinvariants isomorphism Φ/Ψ.
 */

#include <compare>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "hecke.hpp"
#include "padic.hpp"

namespace nrel {

/**
 * The double coset P_p·p^{r0}·(p^{r1}[[p^m, p^{−n}],[0,1]], 1)·G_p°
 * (p^{−n} replaced by 0 when n = 0).  Invariant: n = 0, or n ≥ 1 and m > −n.
 */
struct CanonicalCoset {
  long r0{0}, r1{0}, m{0}, n{0};

  auto operator<=>(const CanonicalCoset&) const = default;

  bool valid() const { return n == 0 || (n >= 1 && m > -n); }

  friend std::ostream& operator<<(std::ostream& os, const CanonicalCoset& x) {
    return os << "(" << x.r0 << "," << x.r1 << "," << x.m << "," << x.n << ")";
  }
};

/// The canonical representative of the double coset as a group element.
inline GElement canonical_rep(const CanonicalCoset& x, long p) {
  Rat y = x.n >= 1 ? pow_p(p, -x.n) : Rat(0);
  Rat z1 = pow_p(p, x.r0 + x.r1);
  Mat2 slot1 = z1 * Mat2(pow_p(p, x.m), y, 0, 1);
  Mat2 slot2 = Mat2::scalar(pow_p(p, x.r0));
  return {slot1, slot2};
}

/**
 * Canonical form of a double coset: reduce slot 2 to a central p-power via
 * Iwasawa + unit absorption, transfer the P-part to slot 1, then
 * column-Hermite-reduce slot 1 and normalize the off-diagonal entry to a
 * pure power of p (or clear it when possible).
 */
inline CanonicalCoset canonicalize(const GElement& g, long p) {
  // Step 1: slot 2 = [[p^{t1}, y],[0, p^{t2}]]·k₂; peel the P-part
  // ρ = [[p^{t1−t2}, y·p^{−t2}],[0,1]] off both slots from the left.
  Iwasawa iw2 = iwasawa_decompose(g.slot2, p);
  long r0 = iw2.t2;
  Mat2 rho(pow_p(p, iw2.t1 - iw2.t2), iw2.y * pow_p(p, -iw2.t2), 0, 1);
  Mat2 s1 = rho.inverse() * g.slot1;

  // Step 2: slot 1 Iwasawa: s1 = [[p^a, w],[0, p^b]]·k.
  Iwasawa iw1 = iwasawa_decompose(s1, p);
  long a = iw1.t1, b = iw1.t2;
  Rat w = iw1.y;

  // Clear w when v_p(w) ≥ a (right column operation) or ≥ b (left P∩K).
  long n;
  if (w == 0 || valuation(w, p) >= a || valuation(w, p) >= b) {
    n = 0;
  } else {
    n = b - valuation(w, p);  // j = v(w) < min(a,b) so n ≥ 1
  }
  CanonicalCoset out{r0, b - r0, a - b, n};
  if (!out.valid()) throw std::logic_error("canonicalize produced invalid tuple");
  return out;
}

inline CanonicalCoset canonicalize(const Mat2& slot1, const Mat2& slot2, long p) {
  return canonicalize(GElement{slot1, slot2}, p);
}

enum class PVariant { P, P1 };

/**
 * vol_{P_p}(P_p ∩ gG_p°g^{-1}) with canonical g, for P_p or the congruence
 * variant P_p(1) = {det ≡ 1 mod p}.  Right Haar measure d^×a·db with
 * vol(Z_p^×) = vol(Z_p) = 1.
 *
 * n = 0 rows follow the case table; the n ≥ 1 value is
 * vol^×(1+p^nZ_p)·p^{−max(m,0)} = 1/((p−1)p^{n+m−1}), identical for both
 * variants, derived from the congruence description of K ∩ cKc^{-1} (the
 * condition is a ≡ 1 mod p^n with b determined mod p^{max(m,0)}).
 */
inline Rat volume_P_cap(const CanonicalCoset& x, PVariant variant, long p) {
  if (!x.valid()) throw std::domain_error("invalid coset");
  if (x.n == 0) {
    Rat base = x.m > 0 ? pow_p(p, -x.m) : Rat(1);
    if (variant == PVariant::P1) base /= (p - 1);
    return base;
  }
  return Rat(1, p - 1) * pow_p(p, -(x.n + x.m - 1));
}

/**
 * vol(P_p°·γ₀·GL2(Z_p)) for the slot-1 representative γ₀:
 * n ≥ 1 → #(Z/p^{m+n}Z)^× = (p−1)p^{m+n−1};  n = 0 → p^{max(m,0)}.
 */
inline Rat volume_orbit(const CanonicalCoset& x, long p) {
  if (!x.valid()) throw std::domain_error("invalid coset");
  if (x.n >= 1) return Rat(p - 1) * pow_p(p, x.m + x.n - 1);
  return pow_p(p, std::max(x.m, 0L));
}

/// Finitely supported map CanonicalCoset → Q(√p).
struct PGCosetFunction {
  std::map<CanonicalCoset, QSqrtP> support;

  static PGCosetFunction f0() {
    PGCosetFunction f;
    f.support[{0, 0, 0, 0}] = QSqrtP(1);
    return f;
  }
  static PGCosetFunction indicator(const CanonicalCoset& x,
                                   const QSqrtP& c = QSqrtP(1)) {
    PGCosetFunction f;
    if (!c.is_zero()) f.support[x] = c;
    return f;
  }

  bool is_zero() const { return support.empty(); }

  QSqrtP value(const CanonicalCoset& x) const {
    auto it = support.find(x);
    return it == support.end() ? QSqrtP(0) : it->second;
  }

  void add(const CanonicalCoset& x, const QSqrtP& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = support.emplace(x, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) support.erase(it);
    }
  }

  friend PGCosetFunction operator+(const PGCosetFunction& f,
                                   const PGCosetFunction& g) {
    PGCosetFunction r = f;
    for (const auto& [x, c] : g.support) r.add(x, c);
    return r;
  }
  friend PGCosetFunction operator-(const PGCosetFunction& f,
                                   const PGCosetFunction& g) {
    PGCosetFunction r = f;
    for (const auto& [x, c] : g.support) r.add(x, -c);
    return r;
  }
  friend PGCosetFunction operator*(const QSqrtP& s, const PGCosetFunction& f) {
    PGCosetFunction r;
    for (const auto& [x, c] : f.support) r.add(x, s * c);
    return r;
  }
  friend bool operator==(const PGCosetFunction& f, const PGCosetFunction& g) {
    return f.support == g.support;
  }
};

namespace detail {

/// Coset representatives (as group elements) of a single Hecke generator.
inline std::vector<GElement> generator_reps(int which, long p) {
  // which: 0=S1, 1=S1^{-1}, 2=S2, 3=S2^{-1}, 4=T1, 5=T2
  std::vector<GElement> reps;
  Mat2 id = Mat2::identity();
  switch (which) {
    case 0: reps.push_back({Mat2::scalar(Rat(p)), id}); break;
    case 1: reps.push_back({Mat2::scalar(Rat(1, p)), id}); break;
    case 2: reps.push_back({id, Mat2::scalar(Rat(p))}); break;
    case 3: reps.push_back({id, Mat2::scalar(Rat(1, p))}); break;
    case 4:
      for (long beta = 0; beta < p; ++beta)
        reps.push_back({Mat2(Rat(p), Rat(beta), 0, 1), id});
      reps.push_back({Mat2::diag(1, Rat(p)), id});
      break;
    case 5:
      for (long beta = 0; beta < p; ++beta)
        reps.push_back({id, Mat2(Rat(p), Rat(beta), 0, 1)});
      reps.push_back({id, Mat2::diag(1, Rat(p))});
      break;
    default: throw std::logic_error("bad generator");
  }
  return reps;
}

/**
 * Left-coset representatives of the inverse double coset G°ρ^{-1}G° of a
 * generator.  Central generators invert exactly; for the T generators the
 * inverse double coset is p^{-1}·(the original one) — diag(1,p) and
 * diag(p,1) are Weyl-conjugate, hence share their double coset — so its
 * left-coset representatives are p^{-1}·reps.
 */
inline std::vector<GElement> inverse_coset_reps(int which, long p) {
  auto reps = generator_reps(which, p);
  if (which <= 3) {
    for (auto& r : reps) r = r.inverse();
    return reps;
  }
  Rat s(1, p);
  for (auto& r : reps) {
    if (which == 4) r.slot1 = s * r.slot1;
    else r.slot2 = s * r.slot2;
  }
  return reps;
}

/// Action of one generator: (θ·f)(x) = Σ_reps f(x·rep).
inline PGCosetFunction act_generator(int which, const PGCosetFunction& f, long p) {
  auto reps = generator_reps(which, p);
  // Support candidates: y·ρ_i ∈ PxG° for some i means y ∈ ∪_i PxG°ρ_i^{-1}
  // = ∪_j Pxσ_jG° with σ_j the left-coset reps of the inverse double coset.
  std::map<CanonicalCoset, char> candidates;
  for (const auto& [x, c] : f.support) {
    GElement rep_x = canonical_rep(x, p);
    for (const auto& sigma : inverse_coset_reps(which, p))
      candidates[canonicalize(rep_x * sigma, p)] = 1;
  }
  PGCosetFunction out;
  for (const auto& [cand, unused] : candidates) {
    GElement y = canonical_rep(cand, p);
    QSqrtP total{Rat(0), Rat(0), p};
    for (const auto& rho : reps) total += f.value(canonicalize(y * rho, p));
    out.add(cand, total);
  }
  return out;
}

}  // namespace detail

/**
 * The H°_{G_p}-module action on C_c^∞(P_p\G_p/G_p°), extended linearly from
 * the generator actions (θ·f)(x) = Σ over coset representatives of f(x·rep).
 * In particular S₁S₂ maps ch at (r0,r1,m,n) to ch at (r0−1,r1,m,n).
 */
inline PGCosetFunction hecke_act(const HeckeElement& theta,
                                 const PGCosetFunction& f, long p) {
  PGCosetFunction out;
  for (const auto& [mono, coeff] : theta.terms) {
    PGCosetFunction cur = f;
    auto apply_power = [&](int pos_gen, int neg_gen, long e) {
      int gen = e >= 0 ? pos_gen : neg_gen;
      for (long i = 0; i < (e >= 0 ? e : -e); ++i)
        cur = detail::act_generator(gen, cur, p);
    };
    apply_power(0, 1, mono[0]);                       // S1^{e1}
    for (long i = 0; i < mono[1]; ++i) cur = detail::act_generator(4, cur, p);
    apply_power(2, 3, mono[2]);                       // S2^{e2}
    for (long i = 0; i < mono[3]; ++i) cur = detail::act_generator(5, cur, p);
    out = out + coeff * cur;
  }
  return out;
}

/// Φ: invariants → coinvariants, scaling each value by 1/vol_P(P ∩ gG°g^{-1}).
inline std::vector<std::pair<QSqrtP, CanonicalCoset>> phi_iso(
    const PGCosetFunction& f, long p) {
  std::vector<std::pair<QSqrtP, CanonicalCoset>> out;
  for (const auto& [x, c] : f.support) {
    Rat vol = volume_P_cap(x, PVariant::P, p);
    out.emplace_back(c * QSqrtP(Rat(denominator(vol), numerator(vol)), Rat(0), p), x);
  }
  return out;
}

/// Ψ: inverse of Φ (multiplies the volumes back).
inline PGCosetFunction psi_iso(
    const std::vector<std::pair<QSqrtP, CanonicalCoset>>& parts, long p) {
  PGCosetFunction f;
  for (const auto& [c, x] : parts)
    f.add(x, c * QSqrtP(volume_P_cap(x, PVariant::P, p), Rat(0), p));
  return f;
}

}  // namespace nrel
