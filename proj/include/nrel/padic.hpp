#pragma once

/**
 * @file padic.hpp
 * @brief Exact 2×2 matrices over Q_p (rational entries) and the matrix
 *        decompositions consumed by the coset modules: Iwasawa, Smith
 *        normal form, and the double-coset compatibility solver.
 */

#include <optional>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "rational.hpp"

namespace nrel {

/// 2×2 invertible matrix with exact rational entries.
struct Mat2 {
  Rat a{1}, b{0}, c{0}, d{1};

  Mat2() = default;
  Mat2(Rat a_, Rat b_, Rat c_, Rat d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  static Mat2 identity() { return {}; }
  static Mat2 diag(Rat x, Rat y) { return {std::move(x), 0, 0, std::move(y)}; }
  static Mat2 scalar(Rat x) { return {x, 0, 0, x}; }

  Rat det() const { return a * d - b * c; }

  Mat2 inverse() const {
    Rat dt = det();
    if (dt == 0) throw std::domain_error("singular matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
  }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator*(const Rat& s, const Mat2& x) {
    return {s * x.a, s * x.b, s * x.c, s * x.d};
  }
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }

  friend std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << "[[" << m.a << "," << m.b << "],[" << m.c << "," << m.d << "]]";
  }
};

/// Element of G_p = GL2(Q_p) × GL2(Q_p).
struct GElement {
  Mat2 slot1, slot2;

  static GElement identity() { return {Mat2::identity(), Mat2::identity()}; }

  friend GElement operator*(const GElement& x, const GElement& y) {
    return {x.slot1 * y.slot1, x.slot2 * y.slot2};
  }
  GElement inverse() const { return {slot1.inverse(), slot2.inverse()}; }
  friend bool operator==(const GElement& x, const GElement& y) {
    return x.slot1 == y.slot1 && x.slot2 == y.slot2;
  }
};

/// Minimum valuation over the nonzero entries of m.
inline long min_entry_valuation(const Mat2& m, long p) {
  long v = 1000000000L;
  for (const Rat* q : {&m.a, &m.b, &m.c, &m.d})
    if (*q != 0) v = std::min(v, valuation(*q, p));
  if (v == 1000000000L) throw std::domain_error("zero matrix");
  return v;
}

/// True iff m lies in GL2(Z_p): p-integral entries and unit determinant.
inline bool in_gl2_zp(const Mat2& m, long p) {
  for (const Rat* q : {&m.a, &m.b, &m.c, &m.d})
    if (*q != 0 && valuation(*q, p) < 0) return false;
  Rat dt = m.det();
  return dt != 0 && valuation(dt, p) == 0;
}

/// Result of the Iwasawa decomposition g = [[p^{t1}, y],[0, p^{t2}]]·k.
struct Iwasawa {
  long t1, t2;
  Rat y;
  Mat2 k;
};

/**
 * Iwasawa decomposition by exact column reduction on the bottom row:
 * pivot on the minimum-valuation entry (ties prefer the left column),
 * clear the other entry, then normalize diagonal units into k.
 */
inline Iwasawa iwasawa_decompose(const Mat2& g, long p) {
  if (g.det() == 0) throw std::domain_error("singular matrix");
  Mat2 u = g;                 // upper-triangularized working copy
  Mat2 k = Mat2::identity();  // accumulated right factor, g = u_final * k
  // Column swap if the pivot should come from the left column.
  bool swap = false;
  if (u.c != 0 && (u.d == 0 || valuation(u.c, p) <= valuation(u.d, p))) swap = true;
  if (swap) {
    u = u * Mat2(0, 1, 1, 0);
    k = Mat2(0, 1, 1, 0) * k;
  }
  if (u.c != 0) {
    // col1 -= (c/d) col2; c/d is p-integral by the pivot choice.
    Rat t = u.c / u.d;
    Mat2 e(1, 0, -t, 1);  // right multiplication subtracts t*col2 from col1
    u = u * e;
    k = e.inverse() * k;
  }
  // u = [[a', b'],[0, d']]; split p-powers from units.
  long t1 = valuation(u.a, p), t2 = valuation(u.d, p);
  Rat u1 = unit_part(u.a, p), u2 = unit_part(u.d, p);
  Rat y = u.b / u2;
  Mat2 du = Mat2::diag(u1, u2);
  return {t1, t2, y, du * k};
}

/// Result of Smith normal form g = k1·diag(p^a, p^c)·k2 with a ≤ c.
struct Smith {
  Mat2 k1;
  long a, c;
  Mat2 k2;
};

/// Smith normal form over Z_p: elementary divisors (p^a, p^c), a ≤ c.
inline Smith smith_normal_form(const Mat2& g, long p) {
  if (g.det() == 0) throw std::domain_error("singular matrix");
  Mat2 m = g;
  Mat2 k1 = Mat2::identity(), k2 = Mat2::identity();
  // Move a minimum-valuation entry to position (1,1).
  long best = 1000000000L;
  int bi = 0, bj = 0;
  const Rat* entries[2][2] = {{&m.a, &m.b}, {&m.c, &m.d}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (*entries[i][j] != 0) {
        long v = valuation(*entries[i][j], p);
        if (v < best) { best = v; bi = i; bj = j; }
      }
  Mat2 sw(0, 1, 1, 0);
  if (bi == 1) { m = sw * m; k1 = k1 * sw; }
  if (bj == 1) { m = m * sw; k2 = sw * k2; }
  // Clear first column and first row with integral operations.
  {
    Rat t = m.c / m.a;  // integral by pivot minimality
    Mat2 e(1, 0, -t, 1);
    m = e * m;
    k1 = k1 * e.inverse();
  }
  {
    Rat t = m.b / m.a;
    Mat2 e(1, -t, 0, 1);
    m = m * e;
    k2 = e.inverse() * k2;
  }
  // m = diag(m.a, m.d); normalize units.
  long a = valuation(m.a, p), c = valuation(m.d, p);
  Rat u1 = unit_part(m.a, p), u2 = unit_part(m.d, p);
  k1 = k1 * Mat2::diag(u1, u2);
  if (a > c) {
    std::swap(a, c);
    k1 = k1 * sw;
    k2 = sw * k2;
  }
  return {k1, a, c, k2};
}

/**
 * Find k ∈ GL2(Z_p) with A·k·B ∈ GL2(Z_p), if one exists.  Existence is
 * equivalent to A and B^{-1} sharing elementary divisors; the witness is
 * assembled from the SNF transformation matrices.
 */
inline std::optional<Mat2> solve_double_coset(const Mat2& A, const Mat2& B, long p) {
  Smith sa = smith_normal_form(A, p);
  Smith sb = smith_normal_form(B.inverse(), p);
  if (sa.a != sb.a || sa.c != sb.c) return std::nullopt;
  // A = k1 D k2, B^{-1} = l1 D l2  =>  A·(k2^{-1} l2)·B = k1 l1^{-1} ∈ K.
  Mat2 k = sa.k2.inverse() * sb.k2;
  return k;
}

}  // namespace nrel
