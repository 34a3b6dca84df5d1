#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "mlsb/dynamics.hpp"
#include "mlsb/errors.hpp"
#include "mlsb/geometry.hpp"
#include "mlsb/linalg.hpp"
#include "mlsb/symbolic.hpp"

namespace mlsb {

struct SolverOptions {
  long precision_bits = 64;
  int max_iter = 0;            // 0: chosen from precision
  int sweeps = 5;              // coordinate-descent sweeps before Newton
  bool check_itinerary = true;
  bool warm_start_double = true;  // solve in double first, then polish at precision
  double perturb = 0;          // random perturbation of the initial chart parameters (radians)
  std::uint64_t seed = 0;
  std::vector<double> init_t;  // explicit initial chart parameters, overrides the heuristic
};

template <class T>
struct PeriodicOrbit {
  Word word;
  long precision_bits = 53;
  std::vector<T> t;                    // native chart parameters
  std::vector<PhasePoint<T>> points;   // reporting coordinates
  T length;
  T gradient_norm;                     // max |dL/ds_k|
  T reflection_residual;               // max |outgoing - reflected incoming| direction mismatch
  int iterations = 0;
  int negative_pivots = 0;             // Hessian inertia
  std::vector<double> residual_trace;  // gradient norm per Newton iteration
  std::vector<JetAtBounce<T>> jets;    // per segment k -> k+1
  MonodromyData<T> mono;

  int period() const { return static_cast<int>(word.size()); }
};

namespace detail {

template <class T>
struct SegmentDerivs {
  T r;
  T gP, gQ;          // d r / d t_P, d r / d t_Q
  T hPP, hQQ, hPQ;   // second derivatives
};

template <class T>
SegmentDerivs<T> segment_derivs(const CurveJet<T>& P, const CurveJet<T>& Q) {
  Vec2<T> d = P.p - Q.p;
  T r = norm(d);
  Vec2<T> u(d.x / r, d.y / r);
  T uP = dot(u, P.d1), uQ = dot(u, Q.d1);
  SegmentDerivs<T> s{r, uP, -uQ, T(0.0), T(0.0), T(0.0)};
  s.hPP = (dot(P.d1, P.d1) - uP * uP) / r + dot(u, P.d2);
  s.hQQ = (dot(Q.d1, Q.d1) - uQ * uQ) / r - dot(u, Q.d2);
  s.hPQ = (uP * uQ - dot(P.d1, Q.d1)) / r;
  return s;
}

template <class T>
std::vector<CurveJet<T>> jets_at(const BilliardTable& table, const Word& w, const std::vector<T>& t) {
  std::vector<CurveJet<T>> out;
  out.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) out.push_back(table[w[k] - 1].jet(t[k]));
  return out;
}

template <class T>
T total_length(const std::vector<CurveJet<T>>& J) {
  std::size_t p = J.size();
  T L(0.0);
  for (std::size_t k = 0; k < p; ++k) L += norm(J[k].p - J[(k + 1) % p].p);
  return L;
}

template <class T>
struct Derivs {
  T L;
  std::vector<T> grad;  // in t
  CyclicTridiag<T> hess;
};

template <class T>
Derivs<T> derivs(const std::vector<CurveJet<T>>& J) {
  std::size_t p = J.size();
  Derivs<T> d;
  d.L = T(0.0);
  d.grad.assign(p, T(0.0));
  d.hess.diag.assign(p, T(0.0));
  d.hess.off.assign(p, T(0.0));
  for (std::size_t k = 0; k < p; ++k) {
    std::size_t k1 = (k + 1) % p;
    SegmentDerivs<T> s = segment_derivs(J[k], J[k1]);
    d.L += s.r;
    d.grad[k] += s.gP;
    d.grad[k1] += s.gQ;
    d.hess.diag[k] += s.hPP;
    d.hess.diag[k1] += s.hQQ;
    d.hess.off[k] = s.hPQ;
  }
  return d;
}

// Boundary parameter of obstacle o closest to a target point, in double.
inline double closest_param(const ConvexObstacle& o, double x, double y) {
  if (o.kind() == ShapeKind::circle) return std::atan2(y - o.cy(), x - o.cx());
  const int n = 256;
  double best = 1e300, bt = 0;
  for (int i = 0; i < n; ++i) {
    double t = 2 * M_PI * i / n;
    Vec2<double> p = o.point_t(t);
    double dd = (p.x - x) * (p.x - x) + (p.y - y) * (p.y - y);
    if (dd < best) {
      best = dd;
      bt = t;
    }
  }
  for (int it = 0; it < 30; ++it) {
    CurveJet<double> j = o.jet(bt);
    double gx = j.p.x - x, gy = j.p.y - y;
    double g = gx * j.d1.x + gy * j.d1.y;
    double h = j.d1.x * j.d1.x + j.d1.y * j.d1.y + gx * j.d2.x + gy * j.d2.y;
    if (!(h > 0)) break;
    double st = g / h;
    st = std::clamp(st, -0.1, 0.1);
    bt -= st;
    if (std::fabs(st) < 1e-15) break;
  }
  return bt;
}

inline std::vector<double> initial_params(const BilliardTable& table, const Word& w) {
  std::size_t p = w.size();
  std::vector<double> t(p);
  for (std::size_t k = 0; k < p; ++k) {
    const ConvexObstacle& a = table[w[(k + p - 1) % p] - 1];
    const ConvexObstacle& b = table[w[(k + 1) % p] - 1];
    t[k] = closest_param(table[w[k] - 1], 0.5 * (a.cx() + b.cx()), 0.5 * (a.cy() + b.cy()));
  }
  return t;
}

template <class T>
T max_abs_scaled(const std::vector<T>& g, const std::vector<CurveJet<T>>& J) {
  T m(0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    T v = abs(g[k]) / norm(J[k].d1);
    if (v > m) m = v;
  }
  return m;
}

template <class T>
T grad_tolerance(const T& L) {
  long bits = real_traits<T>::working_bits();
  return ldexp(T(1.0), -(bits - 10)) * L;
}

template <class T>
void coordinate_sweeps(const BilliardTable& table, const Word& w, std::vector<T>& t, int sweeps, double cap) {
  std::size_t p = w.size();
  for (int sw = 0; sw < sweeps; ++sw) {
    for (std::size_t k = 0; k < p; ++k) {
      const ConvexObstacle& o = table[w[k] - 1];
      CurveJet<T> Jm = table[w[(k + p - 1) % p] - 1].jet(t[(k + p - 1) % p]);
      CurveJet<T> Jp = table[w[(k + 1) % p] - 1].jet(t[(k + 1) % p]);
      auto local = [&](const T& tk, T* g, T* h) {
        CurveJet<T> J = o.jet(tk);
        SegmentDerivs<T> a = segment_derivs(Jm, J), b = segment_derivs(J, Jp);
        if (g) *g = a.gQ + b.gP;
        if (h) *h = a.hQQ + b.hPP;
        return a.r + b.r;
      };
      T g, h;
      T f0 = local(t[k], &g, &h);
      T sp = o.speed_t(t[k]);
      T step = h > 0 ? T(-g / h) : T(g > 0 ? -1.0 : 1.0) * T(cap) / sp;
      T lim = T(cap) / sp;
      if (abs(step) > lim) step = step > 0 ? lim : T(-lim);
      for (int ls = 0; ls < 30; ++ls) {
        T f1 = local(t[k] + step, nullptr, nullptr);
        if (f1 <= f0) {
          t[k] += step;
          break;
        }
        step = step / 2.0;
      }
    }
  }
}

template <class T>
bool newton(const BilliardTable& table, const Word& w, std::vector<T>& t, int max_iter, double cap,
            PeriodicOrbit<T>& out) {
  std::size_t p = w.size();
  const long bits = real_traits<T>::working_bits();
  for (int it = 0; it <= max_iter; ++it) {
    std::vector<CurveJet<T>> J = jets_at(table, w, t);
    Derivs<T> d = derivs(J);
    T gn = max_abs_scaled(d.grad, J);
    out.residual_trace.push_back(to_double(gn));
    out.iterations = it;
    if (gn < grad_tolerance(d.L)) return true;
    if (it == max_iter) break;
    std::vector<T> rhs(p);
    for (std::size_t k = 0; k < p; ++k) rhs[k] = -d.grad[k];
    CyclicSolveResult<T> sol = solve_cyclic(d.hess, rhs);
    std::vector<T> dt;
    bool newton_dir = !sol.singular && sol.negative_pivots == 0;
    if (newton_dir) {
      dt = sol.x;
      T gd(0.0);
      for (std::size_t k = 0; k < p; ++k) gd += d.grad[k] * dt[k];
      if (!(gd < 0)) newton_dir = false;
    }
    if (!newton_dir) {
      dt.assign(p, T(0.0));
      for (std::size_t k = 0; k < p; ++k) {
        T dk = abs(d.hess.diag[k]);
        T sp = norm(J[k].d1);
        if (dk < sp * sp * 1e-3) dk = sp * sp * 1e-3;
        dt[k] = -d.grad[k] / dk;
      }
    }
    T worst(0.0);
    for (std::size_t k = 0; k < p; ++k) {
      T m = abs(dt[k]) * norm(J[k].d1);
      if (m > worst) worst = m;
    }
    if (worst > T(cap)) {
      T sc = T(cap) / worst;
      for (auto& v : dt) v *= sc;
    }
    T slack = ldexp(T(1.0), -(bits - 8)) * d.L;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      std::vector<T> tn(p);
      for (std::size_t k = 0; k < p; ++k) tn[k] = t[k] + dt[k];
      T Ln = total_length(jets_at(table, w, tn));
      if (Ln <= d.L + slack) {
        t = std::move(tn);
        accepted = true;
        break;
      }
      for (auto& v : dt) v /= 2.0;
    }
    if (!accepted) break;
  }
  return false;
}

template <class T>
void finish_orbit(const BilliardTable& table, const SolverOptions& opt, PeriodicOrbit<T>& out) {
  const Word& w = out.word;
  std::size_t p = w.size();
  std::vector<CurveJet<T>> J = jets_at(table, w, out.t);
  Derivs<T> d = derivs(J);
  out.length = d.L;
  out.gradient_norm = max_abs_scaled(d.grad, J);
  std::vector<T> zero(p, T(0.0));
  out.negative_pivots = solve_cyclic(d.hess, zero).negative_pivots;
  out.points.clear();
  out.jets.clear();
  out.reflection_residual = T(0.0);
  for (std::size_t k = 0; k < p; ++k) {
    std::size_t kp = (k + 1) % p, km = (k + p - 1) % p;
    int ok = w[k] - 1;
    BoundaryFrame<T> f = frame_at(table[ok], out.t[k]);
    Vec2<T> vo = J[kp].p - J[k].p;
    T lo = norm(vo);
    vo = Vec2<T>(vo.x / lo, vo.y / lo);
    Vec2<T> vi = J[k].p - J[km].p;
    T li = norm(vi);
    vi = Vec2<T>(vi.x / li, vi.y / li);
    Vec2<T> refl = vi - (2.0 * dot(vi, f.n)) * f.n;
    T res = norm(vo - refl);
    if (res > out.reflection_residual) out.reflection_residual = res;
    T phi = angle_in_frame(f, vo);
    T len = table[ok].template total_length<T>();
    T s = table[ok].s_of_t(out.t[k]);
    s -= floor(s / len) * len;
    out.points.push_back({ok, s, phi});
    out.jets.push_back(segment_jet_chart(table, ok, out.t[k], w[kp] - 1, out.t[kp]));
  }
  out.mono = monodromy_from_jets(out.jets);
  if (opt.check_itinerary) {
    // Every chord must leave its obstacle outward, arrive from outside, and miss all others.
    for (std::size_t k = 0; k < p; ++k) {
      std::size_t kp = (k + 1) % p;
      int a = w[k] - 1, b = w[kp] - 1;
      Vec2<double> P(to_double(J[k].p.x), to_double(J[k].p.y)), Q(to_double(J[kp].p.x), to_double(J[kp].p.y));
      Vec2<double> v = Q - P;
      double len = norm(v);
      v = Vec2<double>(v.x / len, v.y / len);
      BoundaryFrame<double> fa = frame_at(table[a], to_double(out.t[k]));
      BoundaryFrame<double> fb = frame_at(table[b], to_double(out.t[kp]));
      if (!(dot(v, fa.n) > 0) || !(dot(v, fb.n) < 0))
        throw Error(ErrorKind::itinerary_mismatch,
                    "chord " + std::to_string(k) + " of " + format_word(w) + " passes through its own obstacle");
      for (int o = 0; o < table.size(); ++o) {
        if (o == a || o == b) continue;
        std::optional<double> lam = table[o].ray_entry(P, v);
        if (lam && *lam < len)
          throw Error(ErrorKind::itinerary_mismatch, "chord " + std::to_string(k) + " of " + format_word(w) +
                                                          " is occluded by obstacle " + std::to_string(o + 1));
      }
    }
  }
}

template <class T>
int default_max_iter(long bits) {
  return 60 + static_cast<int>(bits / 16);
}

template <class T>
PeriodicOrbit<T> solve_at_working_precision(const BilliardTable& table, const Word& w, std::vector<T> t,
                                            int sweeps, const SolverOptions& opt) {
  PeriodicOrbit<T> out;
  out.word = w;
  out.precision_bits = real_traits<T>::working_bits();
  double cap = table.min_gap() / 4.0;
  if (sweeps > 0) coordinate_sweeps(table, w, t, sweeps, cap);
  int max_iter = opt.max_iter > 0 ? opt.max_iter : default_max_iter<T>(out.precision_bits);
  bool ok = newton(table, w, t, max_iter, cap, out);
  out.t = std::move(t);
  if (!ok) {
    std::string trace;
    for (std::size_t i = 0; i < out.residual_trace.size(); ++i) {
      if (i) trace += " ";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", out.residual_trace[i]);
      trace += buf;
    }
    throw Error(ErrorKind::no_convergence, "word " + format_word(w) + " after " + std::to_string(out.iterations) +
                                               " iterations; gradient trace: " + trace);
  }
  finish_orbit(table, opt, out);
  return out;
}

}  // namespace detail

// Stationary point of the length functional for the word, at opt.precision_bits (T = Real) or in double.
template <class T>
PeriodicOrbit<T> solve_periodic(const BilliardTable& table, const Word& w, const SolverOptions& opt = {}) {
  if (!is_admissible(w, table.size())) throw Error(ErrorKind::inadmissible_word, format_word(w));
  std::vector<double> t0 = opt.init_t.empty() ? detail::initial_params(table, w) : opt.init_t;
  if (t0.size() != w.size()) throw Error(ErrorKind::inadmissible_word, "initial guess has wrong size");
  if (opt.perturb > 0) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(-opt.perturb, opt.perturb);
    for (auto& v : t0) v += U(rng);
  }
  if constexpr (std::is_same_v<T, double>) {
    std::vector<double> t(t0);
    return detail::solve_at_working_precision<double>(table, w, t, opt.sweeps, opt);
  } else {
    mp::PrecisionScope scope(opt.precision_bits);
    std::vector<Real> t;
    int sweeps = opt.sweeps;
    bool warmed = false;
    if (opt.warm_start_double) {
      try {
        SolverOptions o2 = opt;
        o2.check_itinerary = false;
        o2.max_iter = 0;
        std::vector<double> td(t0);
        PeriodicOrbit<double> d = detail::solve_at_working_precision<double>(table, w, td, opt.sweeps, o2);
        for (double v : d.t) t.emplace_back(v);
        sweeps = 0;
        warmed = true;
      } catch (const Error&) {
        warmed = false;
      }
    }
    if (!warmed) {
      t.clear();
      for (double v : t0) t.emplace_back(v);
    }
    return detail::solve_at_working_precision<Real>(table, w, t, sweeps, opt);
  }
}

// Newton polish of a converged orbit at a higher precision.
template <class T>
PeriodicOrbit<Real> refine(const BilliardTable& table, const PeriodicOrbit<T>& orbit, long bits,
                           const SolverOptions& base = {}) {
  mp::PrecisionScope scope(bits);
  SolverOptions opt = base;
  opt.precision_bits = bits;
  std::vector<Real> t;
  for (const auto& v : orbit.t) {
    if constexpr (std::is_same_v<T, double>) {
      t.emplace_back(v);
    } else {
      t.emplace_back(v, bits);
    }
  }
  return detail::solve_at_working_precision<Real>(table, orbit.word, t, 0, opt);
}

// Gradient of the length functional in arclength coordinates.
template <class T>
std::vector<T> length_gradient(const BilliardTable& table, const Word& w, const std::vector<T>& s) {
  std::vector<T> t;
  for (std::size_t k = 0; k < w.size(); ++k) t.push_back(table[w[k] - 1].t_of_s(s[k]));
  std::vector<CurveJet<T>> J = detail::jets_at(table, w, t);
  detail::Derivs<T> d = detail::derivs(J);
  for (std::size_t k = 0; k < w.size(); ++k) d.grad[k] /= norm(J[k].d1);
  return d.grad;
}

// Hessian of the length functional in arclength coordinates (cyclic tridiagonal).
template <class T>
CyclicTridiag<T> length_hessian(const BilliardTable& table, const Word& w, const std::vector<T>& s) {
  std::size_t p = w.size();
  std::vector<T> t;
  for (std::size_t k = 0; k < p; ++k) t.push_back(table[w[k] - 1].t_of_s(s[k]));
  std::vector<CurveJet<T>> J = detail::jets_at(table, w, t);
  detail::Derivs<T> d = detail::derivs(J);
  std::vector<T> sp(p), dsp(p);
  for (std::size_t k = 0; k < p; ++k) {
    sp[k] = norm(J[k].d1);
    dsp[k] = dot(J[k].d1, J[k].d2) / sp[k];
  }
  CyclicTridiag<T> h;
  h.diag.resize(p);
  h.off.resize(p);
  for (std::size_t k = 0; k < p; ++k) {
    h.diag[k] = d.hess.diag[k] / (sp[k] * sp[k]) - dsp[k] * d.grad[k] / (sp[k] * sp[k] * sp[k]);
    h.off[k] = d.hess.off[k] / (sp[k] * sp[(k + 1) % p]);
  }
  return h;
}

template <class T>
T length_functional(const BilliardTable& table, const Word& w, const std::vector<T>& s) {
  std::vector<T> t;
  for (std::size_t k = 0; k < w.size(); ++k) t.push_back(table[w[k] - 1].t_of_s(s[k]));
  return detail::total_length(detail::jets_at(table, w, t));
}

}  // namespace mlsb
