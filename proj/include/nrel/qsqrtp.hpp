#pragma once

/**
 * @file qsqrtp.hpp
 * @brief The quadratic field Q(√p) with exact arithmetic.
 *
 * Values are rat + irr·√p with (√p)² = p.  This houses the half-integral
 * powers p^{1/2} occurring in Θ(T_i) = √p(α_i + β_i) and in spherical
 * Whittaker values; theorem-level outputs must end up with irr = 0.
 */

#include <ostream>
#include <stdexcept>

#include "rational.hpp"

namespace nrel {

struct QSqrtP {
  Rat rat{0};  ///< rational part
  Rat irr{0};  ///< coefficient of √p
  long p{0};   ///< the prime (0 = pure-rational sentinel, compatible with any p)

  QSqrtP() = default;
  QSqrtP(Rat r) : rat(std::move(r)) {}
  QSqrtP(long r) : rat(r) {}
  QSqrtP(int r) : rat(r) {}
  QSqrtP(Rat r, Rat i, long prime) : rat(std::move(r)), irr(std::move(i)), p(prime) {}

  bool is_zero() const { return rat == 0 && irr == 0; }
  bool is_rational() const { return irr == 0; }

  static long join(const QSqrtP& x, const QSqrtP& y) {
    if (x.p != 0 && y.p != 0 && x.p != y.p)
      throw std::domain_error("QSqrtP prime mismatch");
    return x.p != 0 ? x.p : y.p;
  }

  friend QSqrtP operator+(const QSqrtP& x, const QSqrtP& y) {
    return {x.rat + y.rat, x.irr + y.irr, join(x, y)};
  }
  friend QSqrtP operator-(const QSqrtP& x, const QSqrtP& y) {
    return {x.rat - y.rat, x.irr - y.irr, join(x, y)};
  }
  friend QSqrtP operator-(const QSqrtP& x) { return {-x.rat, -x.irr, x.p}; }
  friend QSqrtP operator*(const QSqrtP& x, const QSqrtP& y) {
    long p = join(x, y);
    return {x.rat * y.rat + Rat(p) * x.irr * y.irr, x.rat * y.irr + x.irr * y.rat, p};
  }
  friend bool operator==(const QSqrtP& x, const QSqrtP& y) {
    if (x.p != 0 && y.p != 0 && x.p != y.p) return x.is_zero() && y.is_zero();
    return x.rat == y.rat && x.irr == y.irr;
  }
  friend bool operator!=(const QSqrtP& x, const QSqrtP& y) { return !(x == y); }

  QSqrtP& operator+=(const QSqrtP& y) { return *this = *this + y; }
  QSqrtP& operator-=(const QSqrtP& y) { return *this = *this - y; }
  QSqrtP& operator*=(const QSqrtP& y) { return *this = *this * y; }

  /// Exact inverse; the norm rat² − p·irr² is nonzero for nonzero values
  /// since √p is irrational.
  QSqrtP inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero in Q(sqrt p)");
    Rat norm = rat * rat - Rat(p) * irr * irr;
    if (norm == 0) throw std::domain_error("degenerate Q(sqrt p) value");
    return {rat / norm, -irr / norm, p};
  }
  friend QSqrtP operator/(const QSqrtP& x, const QSqrtP& y) { return x * y.inverse(); }

  friend std::ostream& operator<<(std::ostream& os, const QSqrtP& x) {
    os << x.rat;
    if (x.irr != 0) os << "+(" << x.irr << ")sqrt(" << x.p << ")";
    return os;
  }
};

/// √p itself.
inline QSqrtP sqrt_p(long p) { return {Rat(0), Rat(1), p}; }

/// p^{k/2} for integer k (k may be negative or odd).
inline QSqrtP half_power(long p, long k) {
  // k = 2q + r with r in {0,1}
  long q = (k >= 0) ? k / 2 : -((-k + 1) / 2);
  long r = k - 2 * q;
  QSqrtP out{pow_p(p, q), Rat(0), p};
  if (r == 1) out = out * sqrt_p(p);
  return out;
}

/// Integer power in Q(√p).
inline QSqrtP pow_q(const QSqrtP& x, long e) {
  if (e < 0) return pow_q(x.inverse(), -e);
  QSqrtP r{Rat(1), Rat(0), x.p};
  for (long i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace nrel
