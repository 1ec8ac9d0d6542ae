#pragma once

/**
 * @file schwartz.hpp
 * @brief Schwartz functions on Q_p² with the right GL2-translation action,
 *        stabilizer-volume computation by finite-quotient enumeration, and
 *        membership tests for the integral lattices ℐ_{(0)}(G_p/U_p, Z[1/p]).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "padic.hpp"
#include "rational.hpp"

namespace nrel {

/// (a + p^k Z_p) × (b + p^l Z_p)
struct Box {
  Rat a;
  long k{0};
  Rat b;
  long l{0};
};

namespace detail {

inline Int pow_int_l(long p, long e) {
  return boost::multiprecision::pow(Int(p), (unsigned)e);
}

/// Modular inverse of u (coprime to p) mod p^k, via Euler's theorem.
inline Int inverse_mod_pk(const Int& u, long p, long k) {
  Int m = pow_int_l(p, k);
  Int phi = m - m / p;  // φ(p^k)
  Int uu = u % m;
  if (uu < 0) uu += m;
  return boost::multiprecision::powm(uu, phi - 1, m);
}

}  // namespace detail

/**
 * The unique representative of a + p^d Z_p of the form c/p^e with
 * 0 ≤ c < p^{d+e}, where p^e is the p-part of a's denominator.
 */
inline Rat canonical_residue(const Rat& a, long p, long d) {
  if (a == 0 || valuation(a, p) >= d) return Rat(0);
  Int num = numerator(a), den = denominator(a);
  long e = valuation_int(den, p);
  Int B = den / detail::pow_int_l(p, e);
  Int m = detail::pow_int_l(p, d + e);  // d + e ≥ 1 since v_p(a) < d
  Int c = (num % m) * detail::inverse_mod_pk(B, p, d + e) % m;
  if (c < 0) c += m;
  return Rat(c, detail::pow_int_l(p, e));
}

/**
 * Finite weighted union of boxes, stored in normalized grid form: a common
 * cell size p^depth and a map from canonical cell representatives to values.
 * The normalized form (after depth harmonization) is the equality witness.
 */
class SchwartzFunction {
 public:
  long p{0};
  long depth{0};
  std::map<std::pair<Rat, Rat>, Rat> cells;

  SchwartzFunction() = default;
  explicit SchwartzFunction(long p_) : p(p_) {}

  static SchwartzFunction from_boxes(const std::vector<std::pair<Box, Rat>>& parts,
                                     long p) {
    long d = 0;
    for (const auto& [box, v] : parts) d = std::max({d, box.k, box.l});
    SchwartzFunction f(p);
    f.depth = d;
    for (const auto& [box, v] : parts) {
      if (v == 0) continue;
      long nx = d - box.k, ny = d - box.l;
      for (Int i = 0; i < detail::pow_int_l(p, nx); ++i)
        for (Int j = 0; j < detail::pow_int_l(p, ny); ++j)
          f.add_cell(box.a + Rat(i) * pow_p(p, box.k),
                     box.b + Rat(j) * pow_p(p, box.l), v);
    }
    return f;
  }

  /// ch(Z_p²)
  static SchwartzFunction phi0(long p) {
    return from_boxes({{Box{Rat(0), 0, Rat(0), 0}, Rat(1)}}, p);
  }
  /// ch(p²Z_p × (1+p²Z_p))
  static SchwartzFunction phi_p2(long p) {
    return from_boxes({{Box{Rat(0), 2, Rat(1), 2}, Rat(1)}}, p);
  }

  bool is_zero() const { return cells.empty(); }

  void add_cell(const Rat& x, const Rat& y, const Rat& v) {
    if (v == 0) return;
    auto key = std::make_pair(canonical_residue(x, p, depth),
                              canonical_residue(y, p, depth));
    auto [it, inserted] = cells.emplace(key, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) cells.erase(it);
    }
  }

  Rat evaluate(const Rat& x, const Rat& y) const {
    if (cells.empty()) return Rat(0);
    auto it = cells.find(std::make_pair(canonical_residue(x, p, depth),
                                        canonical_residue(y, p, depth)));
    return it == cells.end() ? Rat(0) : it->second;
  }

  SchwartzFunction refined_to(long d) const {
    if (d < depth) throw std::logic_error("refined_to: coarser than depth");
    SchwartzFunction f(p);
    f.depth = d;
    Int n = detail::pow_int_l(p, d - depth);
    for (const auto& [key, v] : cells)
      for (Int i = 0; i < n; ++i)
        for (Int j = 0; j < n; ++j)
          f.add_cell(key.first + Rat(i) * pow_p(p, depth),
                     key.second + Rat(j) * pow_p(p, depth), v);
    return f;
  }

  friend bool operator==(const SchwartzFunction& f, const SchwartzFunction& g) {
    if (f.p != g.p) return false;
    long d = std::max(f.depth, g.depth);
    return f.refined_to(d).cells == g.refined_to(d).cells;
  }

  friend SchwartzFunction operator*(const Rat& s, const SchwartzFunction& f) {
    SchwartzFunction r(f.p);
    r.depth = f.depth;
    if (s == 0) return r;
    for (const auto& [key, v] : f.cells) r.cells[key] = s * v;
    return r;
  }

  friend SchwartzFunction operator+(const SchwartzFunction& f,
                                    const SchwartzFunction& g) {
    long d = std::max(f.depth, g.depth);
    SchwartzFunction a = f.refined_to(d), b = g.refined_to(d);
    for (const auto& [key, v] : b.cells) a.add_cell(key.first, key.second, v);
    return a;
  }
  friend SchwartzFunction operator-(const SchwartzFunction& f,
                                    const SchwartzFunction& g) {
    return f + Rat(-1) * g;
  }

  /// max(0, −min valuation of a support coordinate): support ⊂ p^{-E}Z_p².
  long support_exponent() const {
    long e = 0;
    for (const auto& [key, v] : cells) {
      if (key.first != 0) e = std::max(e, -valuation(key.first, p));
      if (key.second != 0) e = std::max(e, -valuation(key.second, p));
    }
    return e;
  }
};

/**
 * Right translation: (act(φ,h))(v) = φ(v·h) on row vectors.  The image grid
 * has cell size p^{d'}, d' = depth − min-entry-valuation(h); each source cell
 * pulls back to a coset of the lattice p^depth·Z_p²·h^{-1}, enumerated via a
 * triangular Z_p-basis so every target cell is visited exactly once.
 */
inline SchwartzFunction act(const SchwartzFunction& phi, const Mat2& h) {
  long p = phi.p;
  if (h.det() == 0) throw std::domain_error("act: singular matrix");
  SchwartzFunction out(p);
  if (phi.is_zero()) {
    out.depth = phi.depth;
    return out;
  }
  long minh = min_entry_valuation(h, p);
  long d = phi.depth, dp = d - minh;
  out.depth = dp;
  Mat2 hinv = h.inverse();
  // Triangular basis of L = p^d·Z_p²·h^{-1}: rows (p^{e1},0), (y,p^{e2}).
  Mat2 M = pow_p(p, d) * hinv;
  Iwasawa iw = iwasawa_decompose(Mat2(M.a, M.c, M.b, M.d), p);  // of Mᵀ
  long e1 = iw.t1, e2 = iw.t2;
  Rat y = iw.y;
  Int n1 = detail::pow_int_l(p, dp - e1), n2 = detail::pow_int_l(p, dp - e2);
  for (const auto& [key, v] : phi.cells) {
    Rat v0x = key.first * hinv.a + key.second * hinv.c;
    Rat v0y = key.first * hinv.b + key.second * hinv.d;
    for (Int i = 0; i < n1; ++i)
      for (Int j = 0; j < n2; ++j)
        out.add_cell(v0x + Rat(i) * pow_p(p, e1) + Rat(j) * y,
                     v0y + Rat(j) * pow_p(p, e2), v);
  }
  return out;
}

inline bool stabilizer_contains(const SchwartzFunction& phi, const Mat2& h) {
  return act(phi, h) == phi;
}

enum class Level { Full, DetP };

/// coeff·[φ ⊗ ch(g·U_p)]
struct LatticeElement {
  Rat coeff;
  SchwartzFunction phi;
  GElement g;
  Level level{Level::Full};
};

enum class SVariant { S, S0 };

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Exact Haar volume (vol(GL2(Z_p)) = 1) of
 *   Γ = Stab(φ) ∩ {h : (h,h) ∈ g·U_p·g^{-1}},
 * computed by enumerating residues mod p^{M+λ} at scale p^{-λ}:
 * M₀ is chosen so that 1+p^{M₀}M₂(Z_p) ⊂ Γ (from φ's grid depth/support and
 * the elementary-divisor gaps of g's slots), λ bounds Γ inside p^{-λ}M₂(Z_p),
 * and each surviving class h+p^M M₂(Z_p) lies entirely in Γ, so the additive
 * count is exact.  Returns N / |GL2(Z/p^M)|.
 */
inline Rat volume_stab_intersection(const SchwartzFunction& phi, const GElement& g,
                                    Level level, double ceiling = 2e6) {
  long p = phi.p;
  if (phi.is_zero()) throw std::domain_error("volume of empty stabilizer data");
  auto s1 = smith_normal_form(g.slot1, p), s2 = smith_normal_form(g.slot2, p);
  long gap1 = s1.c - s1.a, gap2 = s2.c - s2.a;
  long lambda = std::min(gap1, gap2);
  long M0 = std::max({phi.depth + phi.support_exponent(), gap1, gap2, 1L});
  long M = M0 + (lambda > 0 ? lambda + 1 : 0);
  double size = std::pow((double)p, 4.0 * (M + lambda));
  if (size > ceiling)
    throw ResourceError("volume_stab_intersection: enumeration ceiling exceeded "
                        "(requires M=" + std::to_string(M) +
                        ", lambda=" + std::to_string(lambda) + ")");

  Mat2 g1i = g.slot1.inverse(), g2i = g.slot2.inverse();
  long P = 1;
  for (long i = 0; i < M + lambda; ++i) P *= p;
  Rat scale = pow_p(p, -lambda);

  long long N = 0;
  Rat one(1);
  std::array<long, 4> A{0, 0, 0, 0};
  for (A[0] = 0; A[0] < P; ++A[0])
    for (A[1] = 0; A[1] < P; ++A[1])
      for (A[2] = 0; A[2] < P; ++A[2])
        for (A[3] = 0; A[3] < P; ++A[3]) {
          // det h must be a unit: v_p(det A) = 2λ exactly.
          long long detA = (long long)A[0] * A[3] - (long long)A[1] * A[2];
          if (detA == 0) continue;
          long vd = 0;
          for (long long t = detA < 0 ? -detA : detA; t % p == 0; t /= p) ++vd;
          if (vd != 2 * lambda) continue;
          Mat2 h(Rat(A[0]) * scale, Rat(A[1]) * scale, Rat(A[2]) * scale,
                 Rat(A[3]) * scale);
          if (!in_gl2_zp(g1i * h * g.slot1, p)) continue;
          if (!in_gl2_zp(g2i * h * g.slot2, p)) continue;
          if (level == Level::DetP) {
            Rat dres = h.det() - one;
            if (dres != 0 && valuation(dres, p) < 1) continue;
          }
          if (!stabilizer_contains(phi, h)) continue;
          ++N;
        }
  // vol = N / |GL2(Z/p^M)|, |GL2(Z/p^M)| = p^{4M}(1-1/p)(1-1/p²).
  Rat card = pow_p(p, 4 * M) * (Rat(1) - Rat(1, p)) * (Rat(1) - Rat(1, (long)p * p));
  return Rat(N) / card;
}

/**
 * Generator-by-generator certification of presented lattice data: each
 * (coeff, φ, g) must have all values of coeff·φ inside the fractional ideal
 * vol·Z[1/p] with vol = volume_stab_intersection(φ,g,level); variant S0
 * additionally requires φ(0,0) = 0.  A false result means "presentation not
 * certified", never definitive non-membership of the coinvariant class.
 */
inline bool lattice_membership(const std::vector<LatticeElement>& elements,
                               SVariant variant, double ceiling = 2e6) {
  if (elements.empty()) return true;
  Level level = elements.front().level;
  for (const auto& e : elements)
    if (e.level != level)
      throw std::domain_error("lattice_membership: mixed levels");
  for (const auto& e : elements) {
    if (e.coeff == 0) continue;
    if (variant == SVariant::S0 && e.phi.evaluate(Rat(0), Rat(0)) != 0)
      return false;
    Rat vol = volume_stab_intersection(e.phi, e.g, level, ceiling);
    for (const auto& [key, v] : e.phi.cells)
      if (!in_z_one_over_p(e.coeff * v / vol, e.phi.p)) return false;
  }
  return true;
}

}  // namespace nrel
