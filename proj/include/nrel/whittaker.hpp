#pragma once

/**
 * @file whittaker.hpp
 * @brief Independent analytic oracle: spherical Whittaker values, Gauss-type
 *        unit integrals, truncated series and rational closed forms for the
 *        local integral Λ(s; f), the slot-2 X-twisted evaluation, and the
 *        JPSS zeta integral with its normalized period.
 */

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "coset.hpp"
#include "hecke.hpp"
#include "schwartz.hpp"

namespace nrel {

// ---------------------------------------------------------------------------
// Polynomial helpers over Q(√p) (coefficient lists in increasing X-degree).

namespace detail {

using Poly = std::vector<QSqrtP>;

inline Poly poly_trim(Poly a) {
  while (a.size() > 1 && a.back().is_zero()) a.pop_back();
  return a;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), QSqrtP(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return poly_trim(r);
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {QSqrtP(0)};
  Poly r(a.size() + b.size() - 1, QSqrtP(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return poly_trim(r);
}

inline Poly poly_scale(const QSqrtP& s, const Poly& a) {
  Poly r = a;
  for (auto& c : r) c = s * c;
  return poly_trim(r);
}

inline Poly poly_shift(const Poly& a, long k) {
  Poly r(a.size() + k, QSqrtP(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i + k] = a[i];
  return r;
}

inline QSqrtP poly_at_one(const Poly& a) {
  QSqrtP s(0);
  for (const auto& c : a) s += c;
  return s;
}

inline bool poly_is_zero(const Poly& a) {
  for (const auto& c : a)
    if (!c.is_zero()) return false;
  return true;
}

}  // namespace detail

/// Truncated power series in X = p^{−s}: coefficients of X⁰..X^order.
struct FormalSeries {
  std::vector<QSqrtP> coeffs;
  long order{0};

  static FormalSeries zero(long N) {
    return {std::vector<QSqrtP>(N + 1, QSqrtP(0)), N};
  }

  friend FormalSeries operator+(const FormalSeries& a, const FormalSeries& b) {
    long N = std::min(a.order, b.order);
    FormalSeries r = zero(N);
    for (long i = 0; i <= N; ++i) r.coeffs[i] = a.coeffs[i] + b.coeffs[i];
    return r;
  }
  friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) {
    long N = std::min(a.order, b.order);
    FormalSeries r = zero(N);
    for (long i = 0; i <= N; ++i)
      for (long j = 0; i + j <= N; ++j)
        if (j <= b.order) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    return r;
  }
  friend FormalSeries operator*(const QSqrtP& s, const FormalSeries& a) {
    FormalSeries r = a;
    for (auto& c : r.coeffs) c = s * c;
    return r;
  }
  friend bool operator==(const FormalSeries& a, const FormalSeries& b) {
    return a.order == b.order && a.coeffs == b.coeffs;
  }
};

/// Rational function in X with Q(√p) coefficients; equality by cross-mult.
struct RationalFunctionX {
  std::vector<QSqrtP> numer{QSqrtP(0)};
  std::vector<QSqrtP> denom{QSqrtP(1)};

  RationalFunctionX() = default;
  RationalFunctionX(std::vector<QSqrtP> n, std::vector<QSqrtP> d)
      : numer(detail::poly_trim(std::move(n))),
        denom(detail::poly_trim(std::move(d))) {
    if (detail::poly_is_zero(denom))
      throw std::domain_error("RationalFunctionX: zero denominator");
  }

  static RationalFunctionX one() { return {{QSqrtP(1)}, {QSqrtP(1)}}; }

  friend RationalFunctionX operator*(const RationalFunctionX& a,
                                     const RationalFunctionX& b) {
    return {detail::poly_mul(a.numer, b.numer),
            detail::poly_mul(a.denom, b.denom)};
  }
  friend RationalFunctionX operator+(const RationalFunctionX& a,
                                     const RationalFunctionX& b) {
    return {detail::poly_add(detail::poly_mul(a.numer, b.denom),
                             detail::poly_mul(b.numer, a.denom)),
            detail::poly_mul(a.denom, b.denom)};
  }
  friend RationalFunctionX operator*(const QSqrtP& s, const RationalFunctionX& a) {
    return {detail::poly_scale(s, a.numer), a.denom};
  }
  friend bool operator==(const RationalFunctionX& a, const RationalFunctionX& b) {
    return detail::poly_mul(a.numer, b.denom) ==
           detail::poly_mul(b.numer, a.denom);
  }

  /// Power-series expansion to order N; requires denom(0) ≠ 0.
  FormalSeries expand(long N) const {
    if (denom[0].is_zero())
      throw std::domain_error("expand: denominator vanishes at X = 0");
    FormalSeries r = FormalSeries::zero(N);
    for (long j = 0; j <= N; ++j) {
      QSqrtP c = j < (long)numer.size() ? numer[j] : QSqrtP(0);
      for (long i = 1; i <= j && i < (long)denom.size(); ++i)
        c -= denom[i] * r.coeffs[j - i];
      r.coeffs[j] = c / denom[0];
    }
    return r;
  }

  /// Exact value at X = 1; requires denom(1) ≠ 0.
  QSqrtP at_one() const {
    QSqrtP d = detail::poly_at_one(denom);
    if (d.is_zero()) throw std::domain_error("at_one: denominator vanishes");
    return detail::poly_at_one(numer) / d;
  }
};

// ---------------------------------------------------------------------------
// Local building blocks.

/// 𝔰_n(a,b) = (a^{n+1} − b^{n+1})/(a − b); 𝔰_{−1} = 0, 𝔰_{−2} = −1/(ab).
inline QSqrtP schur_value(long n, const QSqrtP& a, const QSqrtP& b) {
  if (n < -2) throw std::domain_error("schur_value: n < -2");
  if (n == -1) return QSqrtP(0);
  if (n == -2) return -(a * b).inverse();
  if (a == b) {
    // Non-generic limit (n+1)aⁿ.
    return QSqrtP(Rat(n + 1)) * pow_q(a, n);
  }
  return (pow_q(a, n + 1) - pow_q(b, n + 1)) / (a - b);
}

/// W^sph(diag(a,1)) = 0 for v(a) < 0, else p^{−v/2}·𝔰_v(α,β) (Shintani).
inline QSqrtP whittaker_sph(int slot, const SatakeData& sat, long val_a) {
  if (val_a < 0) return QSqrtP(0);
  return half_power(sat.p, -val_a) *
         schur_value(val_a, sat.alpha(slot), sat.beta(slot));
}

/**
 * ∫_{p^kZ_p^×} ψ(ay) d^×a for the conductor-one character ψ:
 * 1 if k + v(y) ≥ 0, −1/(p−1) if k + v(y) = −1, 0 if ≤ −2; y = 0 gives 1.
 */
inline Rat gauss_unit_integral(long k, std::optional<long> vy, long p) {
  if (!vy) return Rat(1);
  long s = k + *vy;
  if (s >= 0) return Rat(1);
  if (s == -1) return Rat(-1, p - 1);
  return Rat(0);
}

namespace detail {

/// Π_{i,j}(1 − α_iα'_jX) = L(Π_p,s)^{-1}, as a degree-4 polynomial.
inline Poly rankin_inverse_poly(const SatakeData& sat) {
  Poly r{QSqrtP(1)};
  for (const QSqrtP& c : {sat.a1 * sat.a2, sat.a1 * sat.b2, sat.b1 * sat.a2,
                          sat.b1 * sat.b2})
    r = poly_mul(r, Poly{QSqrtP(1), -c});
  return r;
}

/// Θ of the generalized-L numerator coefficients: L_slot^{(r)}(ω,s)^{-1}.
inline Poly gen_l_inverse_poly(int slot, long r, const SatakeData& sat) {
  Poly g;
  for (const HeckeElement& d : gen_l_inverse(slot, r, sat.p))
    g.push_back(theta_eval(d, sat));
  return poly_trim(g);
}

/**
 * Degeneracy check for the polynomial-level operations (series, closed forms,
 * L-factors): only zero Satake parameters are rejected.  Full genericity
 * (sat.generic(): distinct α_i ≠ β_i, ω ≠ 1, cross products ≠ 1) is required
 * only where X = 1 is evaluated; the worked three-term example at
 * (α₁,β₁,α₂,β₂) = (2,1,3,1) has β₁β₂ = 1 and must be admissible here.
 */
inline void require_nondegenerate(const SatakeData& sat, const char* who) {
  if (sat.a1.is_zero() || sat.b1.is_zero() || sat.a2.is_zero() ||
      sat.b2.is_zero())
    throw std::domain_error(std::string(who) + ": degenerate Satake data");
}

}  // namespace detail

enum class LKind { Rankin, Omega2s };

/// L-factors as rational functions of X: 1/(rankin quartic) or 1/(1 − ωX²).
inline RationalFunctionX l_factor(LKind kind, const SatakeData& sat) {
  detail::require_nondegenerate(sat, "l_factor");
  if (kind == LKind::Rankin)
    return {{QSqrtP(1)}, detail::rankin_inverse_poly(sat)};
  return {{QSqrtP(1)}, {QSqrtP(1), QSqrtP(0), -sat.omega()}};
}

/// Generalized factor L_slot^{(r)}(ω,s): reciprocal of the three-term numerator.
inline RationalFunctionX l_factor_gen(int slot, long r, const SatakeData& sat) {
  detail::require_nondegenerate(sat, "l_factor");
  return {{QSqrtP(1)}, detail::gen_l_inverse_poly(slot, r, sat)};
}

// ---------------------------------------------------------------------------
// Λ(s; f).

namespace detail {

/// Central/volume prefactor common to the series and closed form (without the
/// X^{2r0} twist): ω^{r0}·(α₁β₁)^{r1}·vol_orbit·p^{−m/2}.
inline QSqrtP lambda_prefactor(const CanonicalCoset& x, const SatakeData& sat) {
  return pow_q(sat.omega(), x.r0) * pow_q(sat.a1 * sat.b1, x.r1) *
         QSqrtP(volume_orbit(x, sat.p)) * half_power(sat.p, -x.m);
}

/// Shell weight g_i: the unit integral at radius i against y = p^{−n} (n ≥ 1).
inline Rat shell_weight(long i, const CanonicalCoset& x, long p) {
  if (x.n == 0) return Rat(1);
  return gauss_unit_integral(i, -x.n, p);
}

}  // namespace detail

/**
 * Truncated series of Λ(s; ch at x) from the raw shell sum:
 * Λ = ω^{r0}X^{2r0}(α₁β₁)^{r1}·vol_orbit·Σ_{i ≥ max(0,−m)} g_i·p^{−m/2}·
 * 𝔰_{i+m}(α₁,β₁)𝔰_i(α₂,β₂)·X^i.  Requires r0 ≥ 0 (a Laurent tail appears
 * otherwise; use lambda_closed_form, which covers all r0).
 */
inline FormalSeries lambda_series(const CanonicalCoset& x, const SatakeData& sat,
                                  long N = 12) {
  detail::require_nondegenerate(sat, "lambda_series");
  if (N > 16) throw std::domain_error("lambda_series: N > 16");
  if (x.r0 < 0)
    throw std::domain_error("lambda_series: r0 < 0 is not a power series");
  long p = sat.p;
  FormalSeries out = FormalSeries::zero(N);
  QSqrtP pre = detail::lambda_prefactor(x, sat);
  for (long i = std::max(0L, -x.m); 2 * x.r0 + i <= N; ++i) {
    Rat g = detail::shell_weight(i, x, p);
    if (g == 0) continue;
    out.coeffs[2 * x.r0 + i] += pre * QSqrtP(g) *
                                schur_value(i + x.m, sat.a1, sat.b1) *
                                schur_value(i, sat.a2, sat.b2);
  }
  return out;
}

/**
 * Closed form of Λ(s; ch at x): prefactor times
 * ( X^{max(−m,0)}·L(Π,s)·L_slot^{(|m|+1)}(ω,s)^{-1} + error polynomial ),
 * slot 1 for m ≥ 0 and slot 2 for m < 0, with error coefficients
 * ε_i = g_i − 1 ∈ {−1 (i ≤ n−2), −p/(p−1) (i = n−1)} over the truncated
 * shell range.  Central r0 < 0 contributes an X-power denominator.
 */
inline RationalFunctionX lambda_closed_form(const CanonicalCoset& x,
                                            const SatakeData& sat) {
  detail::require_nondegenerate(sat, "lambda_closed_form");
  long p = sat.p;
  int slot = x.m >= 0 ? 1 : 2;
  long r = (x.m >= 0 ? x.m : -x.m) + 1;
  detail::Poly main = detail::poly_shift(
      detail::gen_l_inverse_poly(slot, r, sat), std::max(-x.m, 0L));
  detail::Poly err(std::max<std::size_t>(1, x.n), QSqrtP(0));
  for (long i = std::max(0L, -x.m); i <= x.n - 1; ++i) {
    Rat eps = detail::shell_weight(i, x, p) - 1;
    err[i] = QSqrtP(eps) * schur_value(i + x.m, sat.a1, sat.b1) *
             schur_value(i, sat.a2, sat.b2);
  }
  detail::Poly rinv = detail::rankin_inverse_poly(sat);
  detail::Poly numer = detail::poly_scale(
      detail::lambda_prefactor(x, sat),
      detail::poly_add(main, detail::poly_mul(err, rinv)));
  detail::Poly denom = rinv;
  if (x.r0 > 0) numer = detail::poly_shift(numer, 2 * x.r0);
  if (x.r0 < 0) denom = detail::poly_shift(denom, -2 * x.r0);
  return {numer, denom};
}

/**
 * Λ_{Π_p}(f) = lim_{s→0} Λ(s;f)/L(Π,s): linear extension of the closed form
 * divided by the Rankin factor, evaluated exactly at X = 1.
 */
inline QSqrtP lambda_value(const PGCosetFunction& f, const SatakeData& sat) {
  if (!sat.generic()) throw std::domain_error("lambda_value: degenerate sat");
  QSqrtP out(0);
  for (const auto& [x, c] : f.support) {
    int slot = x.m >= 0 ? 1 : 2;
    long r = (x.m >= 0 ? x.m : -x.m) + 1;
    QSqrtP gen1 = detail::poly_at_one(detail::gen_l_inverse_poly(slot, r, sat));
    QSqrtP err1(0);
    for (long i = std::max(0L, -x.m); i <= x.n - 1; ++i) {
      Rat eps = detail::shell_weight(i, x, sat.p) - 1;
      err1 += QSqrtP(eps) * schur_value(i + x.m, sat.a1, sat.b1) *
              schur_value(i, sat.a2, sat.b2);
    }
    QSqrtP rinv1 = detail::poly_at_one(detail::rankin_inverse_poly(sat));
    out += c * detail::lambda_prefactor(x, sat) * (gen1 + err1 * rinv1);
  }
  return out;
}

/**
 * Θ with the slot-2 X-twist |det γ₂|^s: S₂ ↦ α₂β₂X², T₂ ↦ √p(α₂+β₂)X, slot 1
 * untwisted.  Negative S₂-exponents produce an X-power denominator.
 */
inline RationalFunctionX theta_x_eval(const HeckeElement& h,
                                      const SatakeData& sat) {
  QSqrtP s1 = sat.a1 * sat.b1, s2 = sat.a2 * sat.b2;
  QSqrtP t1 = sqrt_p(sat.p) * (sat.a1 + sat.b1);
  QSqrtP t2 = sqrt_p(sat.p) * (sat.a2 + sat.b2);
  std::map<long, QSqrtP> laurent;
  for (const auto& [m, c] : h.terms) {
    QSqrtP v = c * pow_q(s1, m[0]) * pow_q(t1, m[1]) * pow_q(s2, m[2]) *
               pow_q(t2, m[3]);
    laurent[2 * m[2] + m[3]] += v;
  }
  long lo = 0;
  for (const auto& [e, v] : laurent) lo = std::min(lo, e);
  detail::Poly numer{QSqrtP(0)};
  for (const auto& [e, v] : laurent) {
    if ((long)numer.size() <= e - lo) numer.resize(e - lo + 1, QSqrtP(0));
    numer[e - lo] += v;
  }
  detail::Poly denom = detail::poly_shift({QSqrtP(1)}, -lo);
  return {numer, denom};
}

// ---------------------------------------------------------------------------
// JPSS zeta integral.

namespace detail {

/// Additive measure of (a + p^dZ_p) ∩ p^kZ_p for a canonical residue a.
inline Rat coset_cap_ball(const Rat& a, long d, long k, long p) {
  if (a == 0) return pow_p(p, -std::max(d, k));
  long va = valuation(a, p);  // va < d for canonical nonzero residues
  return k <= va ? pow_p(p, -d) : Rat(0);
}

/// K-average of φ on the shell {v = k}: additive measure ratio.
inline Rat shell_average(const SchwartzFunction& phi, long k) {
  long p = phi.p, d = phi.depth;
  Rat inter(0);
  for (const auto& [key, v] : phi.cells) {
    Rat mk = coset_cap_ball(key.first, d, k, p) *
             coset_cap_ball(key.second, d, k, p);
    Rat mk1 = coset_cap_ball(key.first, d, k + 1, p) *
              coset_cap_ball(key.second, d, k + 1, p);
    inter += v * (mk - mk1);
  }
  Rat shell = pow_p(p, -2 * k) * (Rat(1) - Rat(1, (long)p * p));
  return inter / shell;
}

}  // namespace detail

/**
 * Z(φ, W₁^sph, W₂^sph, s) by torus–shell unfolding: the central shell sum
 * Σ_k avg_k(φ)·ω^kX^{2k} (finite part + geometric tail at φ(0,0)) times the
 * diagonal torus sum Σ_{k₁≥0} 𝔰_{k₁}𝔰_{k₁}X^{k₁} = (1−ωX²)/L(Π,s)^{-1}
 * (Cauchy identity).  Exact rational function of X.
 */
inline RationalFunctionX jpss_zeta(const SchwartzFunction& phi,
                                   const SatakeData& sat) {
  detail::require_nondegenerate(sat, "jpss_zeta");
  if (phi.is_zero()) return {{QSqrtP(0)}, {QSqrtP(1)}};
  if (phi.p != sat.p) throw std::domain_error("jpss_zeta: prime mismatch");
  long p = phi.p, d = phi.depth, E = phi.support_exponent();
  QSqrtP om = sat.omega();
  // Finite Laurent part A(X) = Σ_{k=−E}^{d−1} avg_k·ω^k·X^{2k}, shifted by
  // X^{2E}; tail Σ_{k≥d} = φ(0,0)·ω^dX^{2d}/(1−ωX²).
  detail::Poly A{QSqrtP(0)};
  for (long k = -E; k <= d - 1; ++k) {
    Rat avg = detail::shell_average(phi, k);
    if (avg == 0) continue;
    long e = 2 * (k + E);
    if ((long)A.size() <= e) A.resize(e + 1, QSqrtP(0));
    A[e] += QSqrtP(avg) * pow_q(om, k);
  }
  detail::Poly one_m_om2{QSqrtP(1), QSqrtP(0), -om};
  detail::Poly numer = detail::poly_mul(A, one_m_om2);
  QSqrtP tail = QSqrtP(phi.evaluate(Rat(0), Rat(0))) * pow_q(om, d);
  if (!tail.is_zero()) {
    long e = 2 * (d + E);
    if ((long)numer.size() <= e) numer.resize(e + 1, QSqrtP(0));
    numer[e] += tail;
  }
  detail::Poly denom = detail::poly_shift(detail::rankin_inverse_poly(sat), 2 * E);
  return {numer, denom};
}

/// 𝒵(φ) = lim_{s→0} Z(φ,W₁,W₂,s)/L(Π,s), evaluated exactly at X = 1.
inline QSqrtP jpss_period(const SchwartzFunction& phi, const SatakeData& sat) {
  if (!sat.generic()) throw std::domain_error("jpss_period: degenerate sat");
  if (phi.is_zero()) return QSqrtP(0);
  long d = phi.depth, E = phi.support_exponent();
  QSqrtP om = sat.omega();
  QSqrtP A1(0);
  for (long k = -E; k <= d - 1; ++k) {
    Rat avg = detail::shell_average(phi, k);
    if (avg != 0) A1 += QSqrtP(avg) * pow_q(om, k);
  }
  return A1 * (QSqrtP(1) - om) +
         QSqrtP(phi.evaluate(Rat(0), Rat(0))) * pow_q(om, d);
}

}  // namespace nrel
