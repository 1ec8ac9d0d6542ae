#pragma once

/**
 * @file hecke.hpp
 * @brief The spherical Hecke algebra H°_{G_p} ≅ C[S₁^{±1},T₁,S₂^{±1},T₂]
 *        as exact Laurent polynomials over Q(√p), with evaluation at Satake
 *        parameters, the inversion automorphism, Schur operators, the Euler
 *        quartic, generalized-L numerators, localization at 1−S₁S₂, and
 *        mod-ℓ reduction.
 */

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "qsqrtp.hpp"
#include "rational.hpp"

namespace nrel {

/// Exponent tuple (e1,t1,e2,t2) of the monomial S₁^{e1}T₁^{t1}S₂^{e2}T₂^{t2}.
using Monomial = std::array<long, 4>;

/// Satake parameters (α₁,β₁,α₂,β₂) of Π_p = π₁ ⊠ π₂.
struct SatakeData {
  QSqrtP a1, b1, a2, b2;
  long p;

  QSqrtP alpha(int slot) const { return slot == 1 ? a1 : a2; }
  QSqrtP beta(int slot) const { return slot == 1 ? b1 : b2; }
  /// ω(p) = α₁β₁α₂β₂, the central character value.
  QSqrtP omega() const { return a1 * b1 * a2 * b2; }

  /// Genericity required for evaluation at X = 1: α_i ≠ β_i, ω ≠ 1 and
  /// α_iα'_j ≠ 1 for the four cross products.
  bool generic() const {
    if (a1.is_zero() || b1.is_zero() || a2.is_zero() || b2.is_zero()) return false;
    if (a1 == b1 || a2 == b2) return false;
    if (omega() == QSqrtP(1)) return false;
    for (const QSqrtP& x : {a1 * a2, a1 * b2, b1 * a2, b1 * b2})
      if (x == QSqrtP(1)) return false;
    return true;
  }
};

/// Element of H°_{G_p}: Laurent polynomial with Q(√p) coefficients.
class HeckeElement {
 public:
  std::map<Monomial, QSqrtP> terms;

  HeckeElement() = default;
  explicit HeckeElement(const QSqrtP& c) { add_term({0, 0, 0, 0}, c); }

  static HeckeElement one() { return HeckeElement(QSqrtP(1)); }
  static HeckeElement zero() { return {}; }
  static HeckeElement monomial(long e1, long t1, long e2, long t2,
                               const QSqrtP& c = QSqrtP(1)) {
    if (t1 < 0 || t2 < 0) throw std::domain_error("negative T exponent");
    HeckeElement h;
    h.add_term({e1, t1, e2, t2}, c);
    return h;
  }
  static HeckeElement S(int slot, long e = 1) {
    return slot == 1 ? monomial(e, 0, 0, 0) : monomial(0, 0, e, 0);
  }
  static HeckeElement T(int slot) {
    return slot == 1 ? monomial(0, 1, 0, 0) : monomial(0, 0, 0, 1);
  }
  /// The central operator S_p = S₁S₂.
  static HeckeElement Sp(long e = 1) { return monomial(e, 0, e, 0); }

  bool is_zero() const { return terms.empty(); }

  void add_term(const Monomial& m, const QSqrtP& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  friend HeckeElement operator+(const HeckeElement& x, const HeckeElement& y) {
    HeckeElement r = x;
    for (const auto& [m, c] : y.terms) r.add_term(m, c);
    return r;
  }
  friend HeckeElement operator-(const HeckeElement& x, const HeckeElement& y) {
    HeckeElement r = x;
    for (const auto& [m, c] : y.terms) r.add_term(m, -c);
    return r;
  }
  friend HeckeElement operator-(const HeckeElement& x) {
    return HeckeElement::zero() - x;
  }
  friend HeckeElement operator*(const HeckeElement& x, const HeckeElement& y) {
    HeckeElement r;
    for (const auto& [mx, cx] : x.terms)
      for (const auto& [my, cy] : y.terms)
        r.add_term({mx[0] + my[0], mx[1] + my[1], mx[2] + my[2], mx[3] + my[3]},
                   cx * cy);
    return r;
  }
  friend HeckeElement operator*(const QSqrtP& s, const HeckeElement& x) {
    HeckeElement r;
    for (const auto& [m, c] : x.terms) r.add_term(m, s * c);
    return r;
  }
  friend bool operator==(const HeckeElement& x, const HeckeElement& y) {
    return x.terms == y.terms;
  }

  friend std::ostream& operator<<(std::ostream& os, const HeckeElement& h) {
    if (h.terms.empty()) return os << "0";
    bool first = true;
    for (const auto& [m, c] : h.terms) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c << ")*S1^" << m[0] << " T1^" << m[1] << " S2^" << m[2]
         << " T2^" << m[3];
    }
    return os;
  }
};

/// Θ: the Satake evaluation homomorphism, S_i ↦ α_iβ_i, T_i ↦ √p(α_i+β_i).
inline QSqrtP theta_eval(const HeckeElement& h, const SatakeData& sat) {
  QSqrtP s1 = sat.a1 * sat.b1, s2 = sat.a2 * sat.b2;
  QSqrtP t1 = sqrt_p(sat.p) * (sat.a1 + sat.b1);
  QSqrtP t2 = sqrt_p(sat.p) * (sat.a2 + sat.b2);
  QSqrtP out{Rat(0), Rat(0), sat.p};
  for (const auto& [m, c] : h.terms)
    out += c * pow_q(s1, m[0]) * pow_q(t1, m[1]) * pow_q(s2, m[2]) * pow_q(t2, m[3]);
  return out;
}

/// The inversion automorphism (−)′: S_i ↦ S_i^{-1}, T_i ↦ S_i^{-1}T_i.
inline HeckeElement dual(const HeckeElement& h) {
  HeckeElement r;
  for (const auto& [m, c] : h.terms)
    r.add_term({-m[0] - m[1], m[1], -m[2] - m[3], m[3]}, c);
  return r;
}

/// Binomial coefficient as exact integer.
inline Int binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  Int r = 1;
  for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

/**
 * The Schur operator 𝔰°_n in the given slot:
 * Σ_{j=0..⌊n/2⌋} (−1)^j C(n−j,j) p^{−(n−2j)/2} T^{n−2j} S^j,
 * with 𝔰°_{−1} = 0 and 𝔰°_{−2} = −S^{-1}; Θ(𝔰°_n) = 𝔰_n(α,β).
 */
inline HeckeElement schur_operator(int slot, long n, long p) {
  if (n < -2) throw std::domain_error("schur_operator: n < -2");
  if (n == -1) return HeckeElement::zero();
  if (n == -2) return -HeckeElement::S(slot, -1);
  HeckeElement r;
  for (long j = 0; 2 * j <= n; ++j) {
    QSqrtP coeff = half_power(p, -(n - 2 * j));
    if ((j % 2) == 1) coeff = -coeff;
    coeff = QSqrtP(Rat(binomial(n - j, j)), Rat(0), p) * coeff;
    HeckeElement mono =
        slot == 1 ? HeckeElement::monomial(j, n - 2 * j, 0, 0)
                  : HeckeElement::monomial(0, 0, j, n - 2 * j);
    r = r + coeff * mono;
  }
  return r;
}

/**
 * Coefficients [c0..c4] of the Euler quartic 𝒫_p(x); Θ(Σ c_k X^k) is the
 * inverse Rankin–Selberg factor Π_{i,j}(1−α_iα'_jX).
 */
inline std::vector<HeckeElement> euler_polynomial(long p) {
  QSqrtP invp{Rat(1, p), Rat(0), p};
  HeckeElement S1 = HeckeElement::S(1), S2 = HeckeElement::S(2);
  HeckeElement T1 = HeckeElement::T(1), T2 = HeckeElement::T(2);
  std::vector<HeckeElement> c(5);
  c[0] = HeckeElement::one();
  c[1] = -(invp * (T1 * T2));
  c[2] = invp * (S1 * T2 * T2) + invp * (S2 * T1 * T1) -
         (QSqrtP(2) * (S1 * S2));
  c[3] = -(invp * (S1 * S2 * T1 * T2));
  c[4] = S1 * S1 * S2 * S2;
  return c;
}

/// 𝒫_p(1) = Σ_k c_k: the Euler quartic evaluated at x = 1.
inline HeckeElement euler_at_one(long p) {
  HeckeElement r;
  for (const auto& c : euler_polynomial(p)) r = r + c;
  return r;
}

/**
 * Coefficients [d0,d1,d2] with Θ(Σ d_kX^k) = L_slot^{(r)}(ω,s)^{-1}:
 * slot 1 is [𝔰°_{r−1}, −S₁p^{−1/2}T₂·𝔰°_{r−2}, S₂S₁²·𝔰°_{r−3}] in slot-1
 * Schur operators, and symmetrically for slot 2.
 */
inline std::vector<HeckeElement> gen_l_inverse(int slot, long r, long p) {
  if (r < 1) throw std::domain_error("gen_l_inverse: r < 1");
  int other = slot == 1 ? 2 : 1;
  QSqrtP pinvhalf = half_power(p, -1);
  std::vector<HeckeElement> d(3);
  d[0] = schur_operator(slot, r - 1, p);
  d[1] = -(pinvhalf * (HeckeElement::S(slot) * HeckeElement::T(other) *
                       schur_operator(slot, r - 2, p)));
  d[2] = HeckeElement::S(other) * HeckeElement::S(slot, 2) *
         schur_operator(slot, r - 3, p);
  return d;
}

/// True iff every coefficient is rational with denominator a power of p.
inline bool is_integral(const HeckeElement& h, long p) {
  for (const auto& [m, c] : h.terms) {
    if (c.irr != 0) return false;
    if (!in_z_one_over_p(c.rat, p)) return false;
  }
  return true;
}

/**
 * Exact division by 1−S₁S₂ via synthetic division in the S₂-degree;
 * divisibility decided by the vanishing remainder (equivalently the
 * substitution S₂ ↦ S₁^{-1} after clearing).
 */
inline std::optional<HeckeElement> divide_exact(const HeckeElement& h) {
  if (h.is_zero()) return HeckeElement::zero();
  // Split h by the exponent of S₂.
  std::map<long, HeckeElement> layers;
  long lo = 0, hi = 0;
  bool first = true;
  for (const auto& [m, c] : h.terms) {
    layers[m[2]].add_term({m[0], m[1], 0, m[3]}, c);
    if (first) { lo = hi = m[2]; first = false; }
    lo = std::min(lo, m[2]);
    hi = std::max(hi, m[2]);
  }
  auto layer = [&](long k) {
    auto it = layers.find(k);
    return it == layers.end() ? HeckeElement::zero() : it->second;
  };
  // h_k = q_k − S₁ q_{k−1}  =>  q_{k−1} = S₁^{-1}(q_k − h_k), q_hi = 0.
  HeckeElement s1inv = HeckeElement::S(1, -1);
  HeckeElement q_next = HeckeElement::zero();  // q_k for k = hi
  HeckeElement quotient;
  for (long k = hi; k >= lo; --k) {
    HeckeElement q_prev = s1inv * (q_next - layer(k));  // q_{k−1}
    if (k > lo) {
      quotient = quotient + q_prev * HeckeElement::monomial(0, 0, k - 1, 0);
      q_next = q_prev;
    } else {
      // Remainder: q_{lo−1} must vanish.
      if (!q_prev.is_zero()) return std::nullopt;
    }
  }
  return quotient;
}

/// Element of the localization at 1−S₁S₂ with explicit denominator power.
struct LocalizedHecke {
  HeckeElement numer;
  long denomPower{0};

  /// Cancel exact factors of 1−S₁S₂ from the numerator.
  void normalize() {
    while (denomPower > 0) {
      auto q = divide_exact(numer);
      if (!q) break;
      numer = *q;
      --denomPower;
    }
    if (numer.is_zero()) denomPower = 0;
  }

  friend bool operator==(const LocalizedHecke& x, const LocalizedHecke& y) {
    // Cross multiplication: x.numer (1−Sp)^{y.d} == y.numer (1−Sp)^{x.d}.
    HeckeElement omsp = HeckeElement::one() - HeckeElement::Sp();
    HeckeElement lhs = x.numer, rhs = y.numer;
    for (long i = 0; i < y.denomPower; ++i) lhs = lhs * omsp;
    for (long i = 0; i < x.denomPower; ++i) rhs = rhs * omsp;
    return lhs == rhs;
  }
};

/// Coefficientwise reduction mod ℓ (ℓ ≠ p prime); requires is_integral.
inline std::map<Monomial, long> reduce_mod_ell(const HeckeElement& h, long p,
                                               long ell) {
  if (!is_integral(h, p)) throw std::domain_error("reduce_mod_ell: non-integral");
  if (ell == p) throw std::domain_error("reduce_mod_ell: ell = p");
  std::map<Monomial, long> out;
  for (const auto& [m, c] : h.terms) {
    long r = reduce_mod(c.rat, p, ell);
    if (r != 0) out[m] = r;
  }
  return out;
}

}  // namespace nrel
