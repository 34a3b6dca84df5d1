#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mlsb/mp_real.hpp"

namespace mlsb {

template <class T>
struct Vec2 {
  T x{}, y{};

  Vec2() : x(0.0), y(0.0) {}
  Vec2(T a, T b) : x(std::move(a)), y(std::move(b)) {}

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(const T& s, const Vec2& a) { return {s * a.x, s * a.y}; }
  friend Vec2 operator*(const Vec2& a, const T& s) { return {s * a.x, s * a.y}; }
  Vec2 operator-() const { return {-x, -y}; }
};

template <class T>
T dot(const Vec2<T>& a, const Vec2<T>& b) {
  return a.x * b.x + a.y * b.y;
}

template <class T>
T cross(const Vec2<T>& a, const Vec2<T>& b) {
  return a.x * b.y - a.y * b.x;
}

template <class T>
T norm(const Vec2<T>& a) {
  return sqrt(a.x * a.x + a.y * a.y);
}

// Counterclockwise quarter turn.
template <class T>
Vec2<T> perp(const Vec2<T>& a) {
  return {-a.y, a.x};
}

template <class T>
struct Mat2 {
  T a{}, b{}, c{}, d{};  // [[a, b], [c, d]]

  Mat2() : a(0.0), b(0.0), c(0.0), d(0.0) {}
  Mat2(T a_, T b_, T c_, T d_) : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  static Mat2 identity() { return Mat2(T(1.0), T(0.0), T(0.0), T(1.0)); }

  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return Mat2(m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d);
  }
  friend Mat2 operator*(const T& s, const Mat2& m) { return Mat2(s * m.a, s * m.b, s * m.c, s * m.d); }
  friend Vec2<T> operator*(const Mat2& m, const Vec2<T>& v) { return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y}; }

  T trace() const { return a + d; }
  T det() const { return a * d - b * c; }
};

// Symmetric cyclic tridiagonal matrix: diag[k] on the diagonal and off[k] coupling k and k+1 (mod p).
// For p = 2 both couplings act on the same entry and add up.
template <class T>
struct CyclicTridiag {
  std::vector<T> diag;
  std::vector<T> off;

  std::size_t size() const { return diag.size(); }

  std::vector<T> apply(const std::vector<T>& x) const {
    std::size_t p = size();
    std::vector<T> y(p);
    for (std::size_t k = 0; k < p; ++k) {
      std::size_t kp = (k + 1) % p, km = (k + p - 1) % p;
      y[k] = diag[k] * x[k] + off[k] * x[kp] + off[km] * x[km];
    }
    return y;
  }
};

template <class T>
struct CyclicSolveResult {
  std::vector<T> x;
  int negative_pivots = 0;
  bool singular = false;
};

// Bordered LDL^T elimination: rows 0..p-2 have a tridiagonal part plus a fill column p-1.
// O(p) work; the pivot signs give the inertia.
template <class T>
CyclicSolveResult<T> solve_cyclic(const CyclicTridiag<T>& m, std::vector<T> rhs) {
  std::size_t p = m.size();
  CyclicSolveResult<T> out;
  if (p == 0) return out;
  if (p == 1) {
    out.x = {rhs[0] / m.diag[0]};
    out.negative_pivots = m.diag[0] < 0 ? 1 : 0;
    return out;
  }
  std::vector<T> D(m.diag), u(p, T(0.0)), w(p, T(0.0));
  std::size_t last = p - 1;
  if (p == 2) {
    w[0] = m.off[0] + m.off[1];
  } else {
    for (std::size_t k = 0; k + 2 < p; ++k) u[k] = m.off[k];
    w[p - 2] = m.off[p - 2];
    w[0] = m.off[p - 1];
  }
  for (std::size_t k = 0; k + 1 < p; ++k) {
    const T& piv = D[k];
    if (piv == 0) {
      out.singular = true;
      return out;
    }
    if (piv < 0) ++out.negative_pivots;
    if (k + 2 < p) {
      T l = u[k] / piv;
      D[k + 1] -= l * u[k];
      w[k + 1] -= l * w[k];
      rhs[k + 1] -= l * rhs[k];
    }
    T mlt = w[k] / piv;
    D[last] -= mlt * w[k];
    rhs[last] -= mlt * rhs[k];
  }
  if (D[last] == 0) {
    out.singular = true;
    return out;
  }
  if (D[last] < 0) ++out.negative_pivots;
  out.x.assign(p, T(0.0));
  out.x[last] = rhs[last] / D[last];
  for (std::size_t kk = last; kk-- > 0;) {
    T acc = rhs[kk] - w[kk] * out.x[last];
    if (kk + 2 < p) acc -= u[kk] * out.x[kk + 1];
    out.x[kk] = acc / D[kk];
  }
  return out;
}

}  // namespace mlsb
