// Small fixed-capacity coordinate vectors (runtime dimension d <= 6).
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fppcut/rat.hpp"

namespace fppcut {

inline constexpr int kMaxDim = 6;

struct IVec {
  std::array<int32_t, kMaxDim> c{};
  int8_t d = 0;

  IVec() = default;
  IVec(std::initializer_list<int32_t> xs) {
    d = (int8_t)xs.size();
    int i = 0;
    for (int32_t x : xs) c[i++] = x;
  }
  int32_t& operator[](int i) { return c[i]; }
  int32_t operator[](int i) const { return c[i]; }

  friend bool operator==(const IVec& a, const IVec& b) {
    if (a.d != b.d) return false;
    for (int i = 0; i < a.d; ++i)
      if (a.c[i] != b.c[i]) return false;
    return true;
  }
  friend bool operator!=(const IVec& a, const IVec& b) { return !(a == b); }
  // lexicographic; this is the canonical deterministic ordering everywhere
  friend bool operator<(const IVec& a, const IVec& b) {
    for (int i = 0; i < a.d; ++i)
      if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    return false;
  }
};

inline IVec ivec_shift(const IVec& z, int axis, int32_t delta) {
  IVec r = z;
  r.c[axis] += delta;
  return r;
}

struct Vec {
  std::array<double, kMaxDim> c{};
  int8_t d = 0;

  Vec() = default;
  Vec(std::initializer_list<double> xs) {
    d = (int8_t)xs.size();
    int i = 0;
    for (double x : xs) c[i++] = x;
  }
  static Vec zeros(int dim) { Vec v; v.d = (int8_t)dim; return v; }
  static Vec axis(int dim, int k, double s = 1.0) {
    Vec v = zeros(dim);
    v.c[k] = s;
    return v;
  }
  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  friend Vec operator+(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.d; ++i) r.c[i] += b.c[i];
    return r;
  }
  friend Vec operator-(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.d; ++i) r.c[i] -= b.c[i];
    return r;
  }
  friend Vec operator*(double s, const Vec& a) {
    Vec r = a;
    for (int i = 0; i < a.d; ++i) r.c[i] *= s;
    return r;
  }
  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.d != b.d) return false;
    for (int i = 0; i < a.d; ++i)
      if (a.c[i] != b.c[i]) return false;
    return true;
  }
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (int i = 0; i < a.d; ++i) s += a.c[i] * b.c[i];
  return s;
}
inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }
inline double norm1(const Vec& a) {
  double s = 0;
  for (int i = 0; i < a.d; ++i) s += std::fabs(a.c[i]);
  return s;
}
inline double norminf(const Vec& a) {
  double s = 0;
  for (int i = 0; i < a.d; ++i) s = std::max(s, std::fabs(a.c[i]));
  return s;
}

inline Vec vec_of(const IVec& z, double scale = 1.0) {
  Vec v = Vec::zeros(z.d);
  for (int i = 0; i < z.d; ++i) v.c[i] = z.c[i] * scale;
  return v;
}

// exact rational coordinates of a lattice point z/n
struct RVec {
  std::array<Rat, kMaxDim> c{};
  int8_t d = 0;
};
inline RVec rvec_lattice(const IVec& z, int n) {
  RVec v;
  v.d = z.d;
  for (int i = 0; i < z.d; ++i) v.c[i] = Rat(z.c[i], n);
  return v;
}

} // namespace fppcut
