// Exact rational arithmetic for lattice membership predicates.
//
// Lattice points live at z/n and the discretization rules compare
// distances against 1/n with a mix of strict and non-strict
// inequalities.  Ties are meaningful (a point at distance exactly 1/n
// is excluded from the domain but kept by the patch-exclusion rule),
// so these comparisons cannot run on doubles: 1/12 rounds.  Every
// finite double is a dyadic rational, so JSON coordinates convert
// exactly and all box/polytope predicates stay exact.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fppcut {

struct Rat {
  long long num = 0;
  long long den = 1; // > 0, gcd(num,den) == 1

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::overflow_error("Rat: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  double to_double() const { return double(num) / double(den); }
};

namespace detail {
inline long long checked_ll(__int128 v, const char* what) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw std::overflow_error(std::string("Rat overflow in ") + what);
  return (long long)v;
}
inline Rat make_reduced(__int128 n, __int128 d, const char* what) {
  if (d == 0) throw std::overflow_error("Rat: zero denominator");
  if (d < 0) { n = -n; d = -d; }
  __int128 a = n < 0 ? -n : n, b = d;
  while (b) { __int128 t = a % b; a = b; b = t; }
  if (a > 1) { n /= a; d /= a; }
  Rat r;
  r.num = checked_ll(n, what);
  r.den = checked_ll(d, what);
  return r;
}
} // namespace detail

inline Rat operator+(const Rat& a, const Rat& b) {
  return detail::make_reduced((__int128)a.num * b.den + (__int128)b.num * a.den,
                              (__int128)a.den * b.den, "+");
}
inline Rat operator-(const Rat& a, const Rat& b) {
  return detail::make_reduced((__int128)a.num * b.den - (__int128)b.num * a.den,
                              (__int128)a.den * b.den, "-");
}
inline Rat operator*(const Rat& a, const Rat& b) {
  return detail::make_reduced((__int128)a.num * b.num,
                              (__int128)a.den * b.den, "*");
}
inline Rat operator/(const Rat& a, const Rat& b) {
  if (b.num == 0) throw std::overflow_error("Rat: division by zero");
  return detail::make_reduced((__int128)a.num * b.den,
                              (__int128)a.den * b.num, "/");
}
inline Rat operator-(const Rat& a) { Rat r = a; r.num = -r.num; return r; }

inline bool operator<(const Rat& a, const Rat& b) {
  return (__int128)a.num * b.den < (__int128)b.num * a.den;
}
inline bool operator>(const Rat& a, const Rat& b)  { return b < a; }
inline bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
inline bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }
inline bool operator==(const Rat& a, const Rat& b) {
  return a.num == b.num && a.den == b.den;
}
inline bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

inline Rat rat_abs(const Rat& a) { return a.num < 0 ? -a : a; }
inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

// Exact double -> rational.  Finite doubles are m * 2^e with m a 53-bit
// integer; denominators are clamped so products of a handful of inputs
// stay inside __int128.  Coordinates beyond the clamp are rejected up
// front rather than silently rounded.
inline Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("coordinate not finite");
  if (x == 0.0) return Rat(0);
  int e = 0;
  double m = std::frexp(x, &e); // x = m * 2^e, |m| in [0.5, 1)
  long long mant = (long long)std::ldexp(m, 53);
  e -= 53;
  while ((mant & 1) == 0 && mant != 0) { mant >>= 1; ++e; }
  if (e >= 0) {
    if (e > 62) throw std::invalid_argument("coordinate magnitude too large for exact arithmetic");
    __int128 n = (__int128)mant << e;
    return detail::make_reduced(n, 1, "from_double");
  }
  if (-e > 62) throw std::invalid_argument("coordinate denominator too deep for exact arithmetic");
  return detail::make_reduced(mant, (__int128)1 << (-e), "from_double");
}

inline long long rat_floor(const Rat& a) {
  long long q = a.num / a.den;
  if (a.num % a.den != 0 && a.num < 0) --q;
  return q;
}
inline long long rat_ceil(const Rat& a) { return -rat_floor(-a); }

} // namespace fppcut
