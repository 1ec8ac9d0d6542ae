#pragma once

/**
 * @file rational.hpp
 * @brief Exact rational scalars and p-adic valuation helpers.
 *
 * Every scalar in the library is an exact rational number; elements of Q_p
 * are represented by rationals (dense, and sufficient for all coset
 * representatives, Schwartz box endpoints and Hecke coefficients in scope).
 */

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nrel {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// p-adic valuation of a nonzero integer.
inline long valuation_int(Int n, long p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  long v = 0;
  while (n % p == 0) { n /= p; ++v; }
  return v;
}

/// p-adic valuation of a nonzero rational: v_p(num) - v_p(den).
inline long valuation(const Rat& q, long p) {
  if (q == 0) throw std::domain_error("valuation of zero");
  long v = valuation_int(numerator(q), p);
  if (denominator(q) != 1) v -= valuation_int(denominator(q), p);
  return v;
}

/// p^e as an exact rational (e may be negative).
inline Rat pow_p(long p, long e) {
  Int n = 1;
  for (long i = 0; i < (e >= 0 ? e : -e); ++i) n *= p;
  return e >= 0 ? Rat(n) : Rat(1, n);
}

/// Integer power of a rational.
inline Rat pow_rat(const Rat& q, long e) {
  if (e == 0) return Rat(1);
  if (e < 0) {
    if (q == 0) throw std::domain_error("inverse of zero");
    return pow_rat(Rat(denominator(q), numerator(q)), -e);
  }
  Rat r = 1;
  for (long i = 0; i < e; ++i) r *= q;
  return r;
}

/// True iff q is p-integral (denominator prime to p).
inline bool p_integral(const Rat& q, long p) {
  return q == 0 || denominator(q) % p != 0;
}

/// True iff q lies in Z[1/p] (denominator a power of p).
inline bool in_z_one_over_p(const Rat& q, long p) {
  Int d = denominator(q);
  while (d % p == 0) d /= p;
  return d == 1;
}

/// The p-unit part of q: q / p^{v_p(q)}.
inline Rat unit_part(const Rat& q, long p) {
  if (q == 0) throw std::domain_error("unit part of zero");
  return q / pow_p(p, valuation(q, p));
}

/// Reduce a rational with denominator a power of p modulo a prime ell != p.
inline long reduce_mod(const Rat& q, long p, long ell) {
  Int num = numerator(q), den = denominator(q);
  // den = p^k; invert mod ell via Fermat.
  auto mod = [&](Int x) {
    Int r = x % ell;
    if (r < 0) r += ell;
    return static_cast<long>(r);
  };
  auto powmod = [&](long base, long e) {
    long r = 1, b = ((base % ell) + ell) % ell;
    while (e > 0) {
      if (e & 1) r = (r * b) % ell;
      b = (b * b) % ell;
      e >>= 1;
    }
    return r;
  };
  long n = mod(num);
  long d = mod(den);
  if (d == 0) throw std::domain_error("denominator not invertible mod ell");
  return (n * powmod(d, ell - 2)) % ell;
}

/// Canonical "num/den" string for JSON serialization.
inline std::string rat_to_string(const Rat& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parse "num/den" or plain integer strings.
inline Rat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

}  // namespace nrel
