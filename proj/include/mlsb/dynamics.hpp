#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlsb/errors.hpp"
#include "mlsb/geometry.hpp"
#include "mlsb/linalg.hpp"

namespace mlsb {

// phi is the counterclockwise angle from the outward normal (into the domain) to the outgoing velocity.
template <class T>
struct PhasePoint {
  int obstacle = 0;  // 0-based
  T s;
  T phi;
};

// Same point in the native parameter chart.
template <class T>
struct ChartPoint {
  int obstacle = 0;
  T t;
  T phi;
};

template <class T>
struct BoundaryFrame {
  Vec2<T> p;    // position
  Vec2<T> n;    // outward unit normal
  Vec2<T> tan;  // counterclockwise unit tangent
};

template <class T>
BoundaryFrame<T> frame_at(const ConvexObstacle& o, const T& t) {
  CurveJet<T> j = o.jet(t);
  T sp = norm(j.d1);
  Vec2<T> tan(j.d1.x / sp, j.d1.y / sp);
  return {j.p, Vec2<T>(tan.y, -tan.x), tan};
}

template <class T>
Vec2<T> outgoing_direction(const BoundaryFrame<T>& f, const T& phi) {
  T c = cos(phi), s = sin(phi);
  return c * f.n + s * f.tan;
}

template <class T>
T angle_in_frame(const BoundaryFrame<T>& f, const Vec2<T>& v) {
  return atan2(dot(v, f.tan), dot(v, f.n));
}

template <class T>
T grazing_tolerance() {
  // 1e-8 at 64 bits, tightened proportionally in bits beyond that.
  long bits = real_traits<T>::working_bits();
  long extra = bits > 64 ? (bits - 64) / 4 : 0;
  return T(1e-8) * ldexp(T(1.0), -extra);
}

template <class T>
struct StepResult {
  ChartPoint<T> next;
  T length;
};

// Ray from a chart point to obstacle j with reflection. Throws no-intersection or occlusion.
template <class T>
StepResult<T> step_chart(const BilliardTable& table, const ChartPoint<T>& x, int j) {
  const ConvexObstacle& oi = table[x.obstacle];
  BoundaryFrame<T> f = frame_at(oi, x.t);
  Vec2<T> v = outgoing_direction(f, x.phi);
  if (dot(v, f.n) <= 0) throw Error(ErrorKind::no_intersection, "ray does not leave the obstacle");
  std::optional<T> lam_j = table[j].ray_entry(f.p, v);
  if (!lam_j) throw Error(ErrorKind::no_intersection, "ray misses obstacle " + std::to_string(j + 1));
  for (int k = 0; k < table.size(); ++k) {
    if (k == x.obstacle || k == j) continue;
    std::optional<T> lk = table[k].ray_entry(f.p, v);
    if (lk && *lk < *lam_j)
      throw OcclusionError(k, "obstacle " + std::to_string(k + 1) + " is hit before " + std::to_string(j + 1));
  }
  Vec2<T> q = f.p + *lam_j * v;
  T tq = table[j].param_of(q);
  BoundaryFrame<T> g = frame_at(table[j], tq);
  T vn = dot(v, g.n);
  Vec2<T> vr = v - (2.0 * vn) * g.n;
  T phi = angle_in_frame(g, vr);
  if (cos(phi) < grazing_tolerance<T>())
    throw Error(ErrorKind::grazing_degenerate, "grazing arrival at obstacle " + std::to_string(j + 1));
  return {{j, tq, phi}, *lam_j};
}

template <class T>
PhasePoint<T> to_phase(const BilliardTable& table, const ChartPoint<T>& c) {
  T len = table[c.obstacle].template total_length<T>();
  T s = table[c.obstacle].s_of_t(c.t);
  s -= floor(s / len) * len;
  return {c.obstacle, s, c.phi};
}

template <class T>
ChartPoint<T> to_chart(const BilliardTable& table, const PhasePoint<T>& p) {
  return {p.obstacle, table[p.obstacle].t_of_s(p.s), p.phi};
}

template <class T>
PhasePoint<T> billiard_step(const BilliardTable& table, const PhasePoint<T>& x, int j) {
  if (j == x.obstacle) throw Error(ErrorKind::no_intersection, "target equals the launch obstacle");
  return to_phase(table, step_chart(table, to_chart(table, x), j).next);
}

template <class T>
struct FlightResult {
  bool escaped = true;
  PhasePoint<T> next;
  T length;
};

// First obstacle hit by the outgoing ray, or escape.
template <class T>
FlightResult<T> free_flight(const BilliardTable& table, const PhasePoint<T>& x) {
  FlightResult<T> out;
  ChartPoint<T> c = to_chart(table, x);
  BoundaryFrame<T> f = frame_at(table[x.obstacle], c.t);
  Vec2<T> v = outgoing_direction(f, x.phi);
  if (dot(v, f.n) <= 0) return out;
  int best = -1;
  T best_lam(0.0);
  for (int k = 0; k < table.size(); ++k) {
    if (k == x.obstacle) continue;
    std::optional<T> lk = table[k].ray_entry(f.p, v);
    if (lk && (best < 0 || *lk < best_lam)) {
      best = k;
      best_lam = *lk;
    }
  }
  if (best < 0) return out;
  out.escaped = false;
  out.next = to_phase(table, step_chart(table, c, best).next);
  out.length = best_lam;
  return out;
}

template <class T>
T chord(const BilliardTable& table, int i, const T& s, int j, const T& s2) {
  return norm(table[i].point(s) - table[j].point(s2));
}

// Per-segment quantities of the differential.
template <class T>
struct JetAtBounce {
  T ell;
  T K0, K1;      // curvature at departure and arrival
  T cos0, cos1;  // cos phi at departure (outgoing) and arrival (reflected)
  T alpha, gamma, delta;
};

template <class T>
JetAtBounce<T> segment_jet(const T& ell, const T& K0, const T& K1, const T& cos0, const T& cos1) {
  JetAtBounce<T> j{ell, K0, K1, cos0, cos1, T(0.0), T(0.0), T(0.0)};
  j.alpha = ell * K0 + cos0;
  j.gamma = ell * K1 + cos1;
  j.delta = ell * K0 * K1 + K0 * cos1 + K1 * cos0;
  return j;
}

// Segment between two boundary points in the native chart (no reflection law assumed).
template <class T>
JetAtBounce<T> segment_jet_chart(const BilliardTable& table, int i, const T& ti, int j, const T& tj) {
  BoundaryFrame<T> a = frame_at(table[i], ti), b = frame_at(table[j], tj);
  Vec2<T> d = b.p - a.p;
  T ell = norm(d);
  Vec2<T> v(d.x / ell, d.y / ell);
  return segment_jet(ell, table[i].curvature_t(ti), table[j].curvature_t(tj), dot(v, a.n), -dot(v, b.n));
}

template <class T>
Mat2<T> differential(const JetAtBounce<T>& j) {
  if (j.cos1 < grazing_tolerance<T>()) throw Error(ErrorKind::grazing_degenerate, "cos phi at arrival below tolerance");
  T f = -1.0 / j.cos1;
  return Mat2<T>(f * j.alpha, f * j.ell, f * j.delta, f * j.gamma);
}

template <class T>
struct MonodromyData {
  Mat2<T> M;
  T trace;
  T lambda;  // |smaller eigenvalue|, in (0, 1)
  T mu;      // 1 / lambda
  T le;      // log(mu) / p
  int eigen_sign = 1;  // sign of both eigenvalues
};

template <class T>
MonodromyData<T> monodromy_from_jets(const std::vector<JetAtBounce<T>>& jets) {
  MonodromyData<T> out;
  out.M = Mat2<T>::identity();
  for (const auto& j : jets) out.M = differential(j) * out.M;
  out.trace = out.M.trace();
  T at = abs(out.trace);
  if (!(at > 2.0)) throw Error(ErrorKind::non_hyperbolic, "monodromy trace " + to_decimal(out.trace));
  out.eigen_sign = out.trace < 0 ? -1 : 1;
  out.lambda = 2.0 / (at + sqrt(at * at - 4.0));
  out.mu = 1.0 / out.lambda;
  out.le = log(out.mu) / T(double(jets.size()));
  return out;
}

// Second-order expansion of h around a chord; see jet2_chord.
template <class T>
struct ChordJet2 {
  T h;
  T zeta_minus, zeta_plus;
  T first_coef_minus, first_coef_plus;  // R sin phi and R' sin phi'
  T dpsi, dpsi2;                         // osculating angular displacements (s - sbar)/R, (s' - sbar')/R'
  T first_order;
  T quadratic;
  T predicted() const { return h + first_order + quadratic; }
};

// Expansion of h(sbar, sbar') about h(s, s'). phi is the outgoing angle at s, phi' the incidence
// angle at s' (measured from the normal at s' toward the departure point). The angle differences
// of the expansion are the osculating-circle displacements (s - sbar)/R(s) and (s' - sbar')/R(s').
template <class T>
ChordJet2<T> jet2_chord(const BilliardTable& table, int i, const T& s, int j, const T& s2, const T& sbar,
                        const T& sbar2) {
  const ConvexObstacle& oi = table[i];
  const ConvexObstacle& oj = table[j];
  T ti = oi.t_of_s(s), tj = oj.t_of_s(s2);
  BoundaryFrame<T> a = frame_at(oi, ti), b = frame_at(oj, tj);
  Vec2<T> d = b.p - a.p;
  ChordJet2<T> out;
  out.h = norm(d);
  Vec2<T> v(d.x / out.h, d.y / out.h);
  T cos0 = dot(v, a.n), sin0 = dot(v, a.tan);
  T cos1 = -dot(v, b.n), sin1 = -dot(v, b.tan);
  T R0 = 1.0 / oi.curvature_t(ti), R1 = 1.0 / oj.curvature_t(tj);
  out.zeta_minus = R0 * cos0 / out.h;
  out.zeta_plus = R1 * cos1 / out.h;
  out.first_coef_minus = R0 * sin0;
  out.first_coef_plus = R1 * sin1;
  out.dpsi = (s - sbar) / R0;
  out.dpsi2 = (s2 - sbar2) / R1;
  out.first_order = out.first_coef_minus * out.dpsi + out.first_coef_plus * out.dpsi2;
  const T& zm = out.zeta_minus;
  const T& zp = out.zeta_plus;
  out.quadratic = out.h / 2.0 *
                  (zm * (1.0 + zm) * out.dpsi * out.dpsi + 2.0 * zm * zp * out.dpsi * out.dpsi2 +
                   zp * (1.0 + zp) * out.dpsi2 * out.dpsi2);
  return out;
}

}  // namespace mlsb
