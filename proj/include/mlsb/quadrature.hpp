#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "mlsb/mp_real.hpp"

namespace mlsb {

template <class T>
struct GaussRule {
  std::vector<T> nodes;    // on [-1, 1]
  std::vector<T> weights;
};

namespace detail {

template <class T>
GaussRule<T> build_gauss_rule(int n) {
  GaussRule<T> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const T piv = real_traits<T>::pi();
  const long bits = real_traits<T>::working_bits();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n from the Chebyshev-like initial guess, refined to working precision.
    T x = cos(piv * (T(i) + 0.75) / (T(n) + 0.5));
    T dp(0.0);
    for (int it = 0; it < 200; ++it) {
      T p0(1.0), p1 = x;
      for (int k = 2; k <= n; ++k) {
        T p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = T(double(n)) * (x * p1 - p0) / (x * x - 1.0);
      T dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= ldexp(T(1.0), -(bits + 4)) * (T(1.0) + abs(x))) break;
    }
    {
      T p0(1.0), p1 = x;
      for (int k = 2; k <= n; ++k) {
        T p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / double(k);
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      dp = T(double(n)) * (x * p1 - p0) / (x * x - 1.0);
    }
    T w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace detail

// Cached per (order, precision); safe to call from several threads.
template <class T>
const GaussRule<T>& gauss_rule(int n) {
  static std::mutex mu;
  static std::map<std::pair<int, long>, std::unique_ptr<GaussRule<T>>> cache;
  const long bits = real_traits<T>::working_bits();
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, bits}];
  if (!slot) slot = std::make_unique<GaussRule<T>>(detail::build_gauss_rule<T>(n));
  return *slot;
}

// Order giving roughly full working precision on panels far from singularities.
inline int gauss_order_for_bits(long bits) {
  int n = static_cast<int>(bits / 8) + 8;
  return n < 12 ? 12 : n;
}

template <class T, class F>
T gauss_integrate(const GaussRule<T>& rule, const F& f, const T& a, const T& b) {
  T half = (b - a) / 2.0;
  T mid = (a + b) / 2.0;
  T acc(0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

}  // namespace mlsb
