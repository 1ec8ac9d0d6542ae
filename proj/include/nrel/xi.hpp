#pragma once

/**
 * @file xi.hpp
 * @brief The map Ξ from Schwartz ⊗ level data to C^∞(P_p\G_p/G_p°): pointwise
 *        evaluation, the compactly supported Ξ_c = (1 − S_p^{-1})·Ξ over a
 *        finite window, and the level trace G_p°[p] → G_p°.
 */

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coset.hpp"
#include "schwartz.hpp"

namespace nrel {

/// Ξ_c support window exceeded even at the maximum margin.
struct WindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * λ(x): elementary-divisor gap of the slot-1 core c = [[p^m, p^{-n}],[0,1]]
 * (divisors p^{-n}, p^{m+n} for n ≥ 1; p^0, p^{|m|} for n = 0).
 */
inline long xi_lambda(const CanonicalCoset& x) {
  if (x.n >= 1) return x.m + 2 * x.n;
  return x.m >= 0 ? x.m : -x.m;
}

/**
 * vol(V) for V = K ∩ cKc^{-1}: the index [K : V] equals the number of left
 * K-cosets in KcK, which is 1 for λ = 0 and (p+1)p^{λ-1} for λ ≥ 1.
 */
inline Rat volume_V(const CanonicalCoset& x, long p) {
  long lam = xi_lambda(x);
  if (lam == 0) return Rat(1);
  return Rat(1, p + 1) * pow_p(p, -(lam - 1));
}

namespace detail {

/**
 * Membership of the residue row (c, d) mod p^t in the bottom-row orbit
 * O = (0,1)·V ⊂ Z_p².  Closed forms (each decidable at resolution t):
 *   n ≥ 1        : p^n | c, d unit, d + c·p^{-n} unit          (t ≥ n+1)
 *   n = 0, m = 0 : (c, d) primitive                            (t ≥ 1)
 *   n = 0, m ≥ 1 : d unit                                      (t ≥ 1)
 *   n = 0, m ≤ -1: p^{-m} | c, d unit                          (t ≥ -m)
 */
inline bool in_row_orbit(const Int& c, const Int& d, const CanonicalCoset& x,
                         long p, long t) {
  bool d_unit = d % p != 0;
  if (x.n >= 1) {
    if (!d_unit) return false;
    if (c == 0) return true;  // v(c) ≥ t > n and d + 0 is a unit
    if (valuation_int(c, p) < x.n) return false;
    Int u = d + c / pow_int_l(p, x.n);
    return u % p != 0;
  }
  if (x.m == 0) return d_unit || c % p != 0;
  if (x.m >= 1) return d_unit;
  // m ≤ -1
  if (!d_unit) return false;
  return c == 0 || valuation_int(c, p) >= -x.m;
}

/// #(O mod p^t) in closed form, valid at the resolutions listed above.
inline Rat orbit_count(const CanonicalCoset& x, long p, long t) {
  Int units = pow_int_l(p, t - 1) * (p - 1);  // #(Z/p^t)^×
  if (x.n >= 1) {
    // c = p^n c', c' mod p^{t-n}; split on c' mod p.
    Int c_zero = pow_int_l(p, t - x.n - 1);
    Int c_unit = c_zero * (p - 1);
    Int d_two = pow_int_l(p, t - 1) * (p - 2);  // d ∉ {0, -c'} mod p
    return Rat(c_zero * units + c_unit * d_two);
  }
  Int P = pow_int_l(p, t);
  if (x.m == 0) return Rat(P * P - (P / p) * (P / p));  // primitive pairs
  if (x.m >= 1) return Rat(P * units);
  return Rat(pow_int_l(p, t + x.m) * units);
}

}  // namespace detail

/**
 * Pointwise evaluator of Ξ_{φ⊗ch(gG°)}(x) = ∫_{H_p} ch(gG°)(h^{-1}x)·
 * φ((0,1)h) dh, Haar measure with vol(GL2(Z_p)) = 1.
 *
 * For canonical x the solution set of h is V·γ₀ with V = K ∩ cKc^{-1} and
 * γ₀ = x₁·k·g₁^{-1}, k a witness of x₂^{-1}x₁·k·g₁^{-1}g₂ ∈ K (no witness →
 * value 0).  Pushing the integral to the bottom-row orbit O = (0,1)V (all
 * rows primitive, so the invariant measure is uniform at any congruence
 * resolution) gives Ξ = vol(V)/#(O mod p^t) · Σ_{r ∈ O mod p^t} φ(r·γ₀).
 */
class XiFunctional {
 public:
  XiFunctional(SchwartzFunction phi, GElement g, long ceiling = 2000000)
      : phi_(std::move(phi)), g_(std::move(g)), p_(phi_.p), ceiling_(ceiling) {}

  QSqrtP operator()(const GElement& x) const {
    return QSqrtP(value(canonicalize(x, p_)));
  }
  QSqrtP operator()(const CanonicalCoset& x) const { return QSqrtP(value(x)); }

  Rat value(const CanonicalCoset& x) const {
    if (phi_.is_zero()) return Rat(0);
    GElement xr = canonical_rep(x, p_);
    Mat2 A = xr.slot2.inverse() * xr.slot1;
    Mat2 B = g_.slot1.inverse() * g_.slot2;
    auto k = solve_double_coset(A, B, p_);
    if (!k) return Rat(0);
    Mat2 gamma0 = xr.slot1 * (*k) * g_.slot1.inverse();
    Smith s = smith_normal_form(gamma0, p_);
    Rat volV = volume_V(x, p_);
    // O ⊂ Z_p², so r·γ₀ ≡ 0 mod p^depth for all r when p^{s.a} ≥ p^depth.
    if (s.a >= phi_.depth) return volV * phi_.evaluate(Rat(0), Rat(0));
    // No primitive row r has r·γ₀ in p^{-E}Z_p² ⊇ supp φ when s.c < -E.
    if (s.c < -phi_.support_exponent()) return Rat(0);
    long t = std::max({1L, x.n >= 1 ? x.n + 1 : 1L,
                       (x.n == 0 && x.m < 0) ? -x.m : 1L,
                       phi_.depth - std::min(0L, s.a)});
    Int P = detail::pow_int_l(p_, t);
    if (P * P > ceiling_) throw ResourceError("xi: enumeration ceiling exceeded");
    Rat total(0);
    for (Int c = 0; c < P; ++c)
      for (Int d = 0; d < P; ++d) {
        if (!detail::in_row_orbit(c, d, x, p_, t)) continue;
        Rat rc(c), rd(d);
        total += phi_.evaluate(rc * gamma0.a + rd * gamma0.c,
                               rc * gamma0.b + rd * gamma0.d);
      }
    return volV * total / detail::orbit_count(x, p_, t);
  }

  long prime() const { return p_; }

 private:
  SchwartzFunction phi_;
  GElement g_;
  long p_;
  long ceiling_;
};

inline XiFunctional xi(const SchwartzFunction& phi, const GElement& g,
                       long ceiling = 2000000) {
  return XiFunctional(phi, g, ceiling);
}

/// Level trace: Tr(φ⊗ch(gG°[p])) = φ⊗ch(gG°) on each generator.
inline std::vector<LatticeElement> trace_level(
    const std::vector<LatticeElement>& delta) {
  std::vector<LatticeElement> out;
  out.reserve(delta.size());
  for (const auto& el : delta) {
    if (el.level != Level::DetP)
      throw std::domain_error("trace_level: expected level G_p°[p] data");
    out.push_back({el.coeff, el.phi, el.g, Level::Full});
  }
  return out;
}

/**
 * Materializes Ξ_c(δ) = (1 − S_p^{-1})·Ξ(δ), i.e. x ↦ Ξ(δ)(x) −
 * Ξ(δ)(x·(p^{-1}, p^{-1})-central), over a finite window with margin starting
 * at 2; a nonzero value on the boundary shell of width 2 enlarges the window
 * (margin cap 6, then WindowError).  Compact support is structural: for
 * r0 ≫ 0 the evaluator hits the φ(0,0) fast path (constant in r0), and for
 * r0 ≪ 0 the support fast path (zero).
 */
inline PGCosetFunction xi_c(const std::vector<LatticeElement>& delta,
                            long ceiling = 2000000) {
  PGCosetFunction out;
  if (delta.empty()) return out;
  long p = delta.front().phi.p;
  long base = 1;
  std::vector<XiFunctional> evals;
  evals.reserve(delta.size());
  for (const auto& el : delta) {
    if (el.level != Level::Full)
      throw std::domain_error("xi_c: expected level G_p° data");
    if (el.phi.p != p) throw std::domain_error("xi_c: mixed primes");
    long gv = 0;
    for (const Mat2* slot : {&el.g.slot1, &el.g.slot2}) {
      gv = std::max(gv, std::abs(min_entry_valuation(*slot, p)));
      gv = std::max(gv, std::abs(valuation(slot->det(), p)));
    }
    base = std::max(base, el.phi.depth + el.phi.support_exponent() + gv);
    evals.emplace_back(el.phi, el.g, ceiling);
  }
  for (long margin = 2; margin <= 6; ++margin) {
    long B = base + margin;
    std::map<CanonicalCoset, Rat> cache;
    auto Xi = [&](const CanonicalCoset& cc) -> const Rat& {
      auto it = cache.find(cc);
      if (it == cache.end()) {
        Rat v(0);
        for (std::size_t i = 0; i < evals.size(); ++i)
          v += delta[i].coeff * evals[i].value(cc);
        it = cache.emplace(cc, std::move(v)).first;
      }
      return it->second;
    };
    out = PGCosetFunction{};
    bool boundary_bad = false;
    for (long r0 = -B; r0 <= B && !boundary_bad; ++r0)
      for (long r1 = -B; r1 <= B && !boundary_bad; ++r1)
        for (long m = -B; m <= B && !boundary_bad; ++m)
          for (long n = 0; n <= B; ++n) {
            CanonicalCoset cc{r0, r1, m, n};
            if (!cc.valid()) continue;
            Rat v = Xi(cc) - Xi({r0 - 1, r1, m, n});
            if (v == 0) continue;
            bool shell = (B - std::abs(r0) <= 1) || (B - std::abs(r1) <= 1) ||
                         (B - std::abs(m) <= 1) || (B - n <= 1);
            if (shell) {
              boundary_bad = true;
              break;
            }
            out.add(cc, QSqrtP(v));
          }
    if (!boundary_bad) return out;
  }
  throw WindowError("xi_c: support exceeded the window at maximum margin");
}

}  // namespace nrel
