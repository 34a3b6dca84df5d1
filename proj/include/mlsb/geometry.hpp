#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mlsb/errors.hpp"
#include "mlsb/linalg.hpp"
#include "mlsb/mp_real.hpp"
#include "mlsb/quadrature.hpp"

namespace mlsb {

enum class ShapeKind { circle, ellipse, fourier };

// Raw shape parameters as read from a table file. Doubles are exact binary values, so the
// geometry is the same at every working precision.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::circle;
  double cx = 0, cy = 0;
  double radius = 1;            // circle
  double a = 1, b = 1, rot = 0; // ellipse
  double r0 = 1;                // fourier base radius
  std::vector<double> cos_coef; // fourier a_k, k = 1..K
  std::vector<double> sin_coef; // fourier b_k

  static ShapeSpec circle(double x, double y, double r) {
    ShapeSpec s;
    s.kind = ShapeKind::circle;
    s.cx = x;
    s.cy = y;
    s.radius = r;
    return s;
  }
  static ShapeSpec ellipse(double x, double y, double a, double b, double rot) {
    ShapeSpec s;
    s.kind = ShapeKind::ellipse;
    s.cx = x;
    s.cy = y;
    s.a = a;
    s.b = b;
    s.rot = rot;
    return s;
  }
  static ShapeSpec fourier(double x, double y, double r0, std::vector<double> c, std::vector<double> sn) {
    ShapeSpec s;
    s.kind = ShapeKind::fourier;
    s.cx = x;
    s.cy = y;
    s.r0 = r0;
    s.cos_coef = std::move(c);
    s.sin_coef = std::move(sn);
    return s;
  }

  ShapeSpec scaled(double c) const {
    ShapeSpec s = *this;
    s.cx *= c;
    s.cy *= c;
    s.radius *= c;
    s.a *= c;
    s.b *= c;
    s.r0 *= c;
    for (auto& v : s.cos_coef) v *= c;
    for (auto& v : s.sin_coef) v *= c;
    return s;
  }

  ShapeSpec moved(double cos_t, double sin_t, double dx, double dy, double angle) const {
    ShapeSpec s = *this;
    s.cx = cos_t * cx - sin_t * cy + dx;
    s.cy = sin_t * cx + cos_t * cy + dy;
    if (kind == ShapeKind::ellipse) s.rot = rot + angle;
    if (kind == ShapeKind::fourier) {
      // r(t - angle): rotate the coefficient pairs.
      for (std::size_t k = 0; k < std::max(cos_coef.size(), sin_coef.size()); ++k) {
        double ak = k < cos_coef.size() ? cos_coef[k] : 0.0;
        double bk = k < sin_coef.size() ? sin_coef[k] : 0.0;
        double c = std::cos((k + 1) * angle), sn = std::sin((k + 1) * angle);
        s.cos_coef.resize(std::max(cos_coef.size(), sin_coef.size()));
        s.sin_coef.resize(std::max(cos_coef.size(), sin_coef.size()));
        s.cos_coef[k] = ak * c - bk * sn;
        s.sin_coef[k] = ak * sn + bk * c;
      }
    }
    return s;
  }
};

template <class T>
struct CurveJet {
  Vec2<T> p, d1, d2;  // gamma(t), gamma'(t), gamma''(t)
};

// A strictly convex analytic closed curve, counterclockwise in its native parameter t in [0, 2 pi).
// Arclength s is anchored at t = 0 and grows counterclockwise.
class ConvexObstacle {
 public:
  ConvexObstacle(ShapeSpec spec, long max_bits = 64) : spec_(std::move(spec)), max_bits_(std::max(max_bits, 53L)) {
    validate();
    build_arclength();
  }

  const ShapeSpec& spec() const { return spec_; }
  ShapeKind kind() const { return spec_.kind; }
  long max_bits() const { return max_bits_; }
  double cx() const { return spec_.cx; }
  double cy() const { return spec_.cy; }

  // Radius of a disc around the center containing the obstacle.
  double bounding_radius() const {
    switch (spec_.kind) {
      case ShapeKind::circle: return spec_.radius;
      case ShapeKind::ellipse: return std::max(spec_.a, spec_.b);
      case ShapeKind::fourier: {
        double r = spec_.r0;
        for (double v : spec_.cos_coef) r += std::fabs(v);
        for (double v : spec_.sin_coef) r += std::fabs(v);
        return r;
      }
    }
    return 0;
  }

  template <class T>
  CurveJet<T> jet(const T& t) const {
    CurveJet<T> j;
    T ct = cos(t), st = sin(t);
    T cx(spec_.cx), cy(spec_.cy);
    switch (spec_.kind) {
      case ShapeKind::circle: {
        T r(spec_.radius);
        j.p = {cx + r * ct, cy + r * st};
        j.d1 = {-r * st, r * ct};
        j.d2 = {-r * ct, -r * st};
        break;
      }
      case ShapeKind::ellipse: {
        T th(spec_.rot);
        T cr = cos(th), sr = sin(th);
        T a(spec_.a), b(spec_.b);
        auto rotv = [&](const T& x, const T& y) { return Vec2<T>(cr * x - sr * y, sr * x + cr * y); };
        Vec2<T> q = rotv(a * ct, b * st);
        j.p = {cx + q.x, cy + q.y};
        j.d1 = rotv(-a * st, b * ct);
        j.d2 = rotv(-a * ct, -b * st);
        break;
      }
      case ShapeKind::fourier: {
        T r, r1, r2;
        radial(t, ct, st, r, r1, r2);
        j.p = {cx + r * ct, cy + r * st};
        j.d1 = {r1 * ct - r * st, r1 * st + r * ct};
        j.d2 = {(r2 - r) * ct - 2.0 * r1 * st, (r2 - r) * st + 2.0 * r1 * ct};
        break;
      }
    }
    return j;
  }

  template <class T>
  Vec2<T> point_t(const T& t) const {
    return jet(t).p;
  }

  template <class T>
  T speed_t(const T& t) const {
    return norm(jet(t).d1);
  }

  template <class T>
  T curvature_t(const T& t) const {
    CurveJet<T> j = jet(t);
    T sp = norm(j.d1);
    return cross(j.d1, j.d2) / (sp * sp * sp);
  }

  // Outward unit normal (pointing away from the obstacle, into the billiard domain).
  template <class T>
  Vec2<T> outward_normal_t(const T& t) const {
    CurveJet<T> j = jet(t);
    T sp = norm(j.d1);
    return {j.d1.y / sp, -j.d1.x / sp};
  }

  template <class T>
  T total_length() const {
    check_precision<T>();
    if (spec_.kind == ShapeKind::circle) return 2.0 * real_traits<T>::pi() * T(spec_.radius);
    return as<T>(total_mp_, total_d_);
  }

  // t -> s, valid for any real t (periodic extension).
  template <class T>
  T s_of_t(const T& t) const {
    check_precision<T>();
    if (spec_.kind == ShapeKind::circle) return T(spec_.radius) * t;
    const T two_pi = 2.0 * real_traits<T>::pi();
    T k = floor(t / two_pi);
    T t0 = t - k * two_pi;
    double td = to_double(t0);
    std::size_t j = std::upper_bound(brk_d_.begin(), brk_d_.end(), td) - brk_d_.begin();
    j = j == 0 ? 0 : j - 1;
    if (j + 1 >= brk_d_.size()) j = brk_d_.size() - 2;
    T tj = as<T>(brk_mp_[j], brk_d_[j]);
    const auto& rule = gauss_rule<T>(gauss_order<T>());
    T part = gauss_integrate(rule, [&](const T& x) { return speed_t(x); }, tj, t0);
    return k * total_length<T>() + as<T>(cum_mp_[j], cum_d_[j]) + part;
  }

  // s -> t in [0, 2 pi) for s reduced mod the perimeter.
  template <class T>
  T t_of_s(const T& s) const {
    check_precision<T>();
    T len = total_length<T>();
    T s0 = s - floor(s / len) * len;
    if (spec_.kind == ShapeKind::circle) return s0 / T(spec_.radius);
    double sd = to_double(s0);
    std::size_t j = std::upper_bound(cum_d_.begin(), cum_d_.end(), sd) - cum_d_.begin();
    j = j == 0 ? 0 : j - 1;
    if (j + 1 >= cum_d_.size()) j = cum_d_.size() - 2;
    T ta = as<T>(brk_mp_[j], brk_d_[j]), tb = as<T>(brk_mp_[j + 1], brk_d_[j + 1]);
    T sa = as<T>(cum_mp_[j], cum_d_[j]), sb = as<T>(cum_mp_[j + 1], cum_d_[j + 1]);
    T t = ta + (tb - ta) * (s0 - sa) / (sb - sa);
    const long bits = real_traits<T>::working_bits();
    T tol = ldexp(T(1.0), -(bits - 4));
    T prev(0.0);
    for (int it = 0; it < 100; ++it) {
      T dt = (s_of_t(t) - s0) / speed_t(t);
      t -= dt;
      if (abs(dt) <= tol) break;
      // Rounding noise: the step stopped contracting near the last few bits.
      if (it > 0 && abs(dt) > prev / 2.0 && abs(dt) <= 256.0 * tol) break;
      prev = abs(dt);
    }
    return t;
  }

  template <class T>
  Vec2<T> point(const T& s) const {
    return point_t(t_of_s(s));
  }

  template <class T>
  T curvature(const T& s) const {
    return curvature_t(t_of_s(s));
  }

  // Native parameter of a boundary point.
  template <class T>
  T param_of(const Vec2<T>& q) const {
    T dx = q.x - T(spec_.cx), dy = q.y - T(spec_.cy);
    if (spec_.kind == ShapeKind::ellipse) {
      T th(spec_.rot);
      T cr = cos(th), sr = sin(th);
      T lx = cr * dx + sr * dy, ly = -sr * dx + cr * dy;
      dx = lx / T(spec_.a);
      dy = ly / T(spec_.b);
    }
    T t = atan2(dy, dx);
    if (t < 0) t += 2.0 * real_traits<T>::pi();
    return t;
  }

  // Smallest positive ray parameter where o + lam d (d unit) enters the obstacle.
  template <class T>
  std::optional<T> ray_entry(const Vec2<T>& o, const Vec2<T>& d) const {
    switch (spec_.kind) {
      case ShapeKind::circle: {
        Vec2<T> rel = o - Vec2<T>(T(spec_.cx), T(spec_.cy));
        T r(spec_.radius);
        return quadratic_entry(dot(d, d), dot(rel, d), dot(rel, rel) - r * r);
      }
      case ShapeKind::ellipse: {
        T th(spec_.rot);
        T cr = cos(th), sr = sin(th);
        T ox = o.x - T(spec_.cx), oy = o.y - T(spec_.cy);
        T a(spec_.a), b(spec_.b);
        Vec2<T> O((cr * ox + sr * oy) / a, (-sr * ox + cr * oy) / b);
        Vec2<T> D((cr * d.x + sr * d.y) / a, (-sr * d.x + cr * d.y) / b);
        return quadratic_entry(dot(D, D), dot(O, D), dot(O, O) - 1.0);
      }
      case ShapeKind::fourier: return fourier_entry(o, d);
    }
    return std::nullopt;
  }

  // Support function h(u) = max over the curve of u . gamma, in double.
  double support(double ux, double uy) const {
    switch (spec_.kind) {
      case ShapeKind::circle: return ux * spec_.cx + uy * spec_.cy + spec_.radius * std::hypot(ux, uy);
      case ShapeKind::ellipse: {
        double cr = std::cos(spec_.rot), sr = std::sin(spec_.rot);
        double lx = cr * ux + sr * uy, ly = -sr * ux + cr * uy;
        return ux * spec_.cx + uy * spec_.cy + std::hypot(spec_.a * lx, spec_.b * ly);
      }
      case ShapeKind::fourier: {
        auto f = [&](double t) {
          Vec2<double> p = point_t(t);
          return ux * p.x + uy * p.y;
        };
        const int n = 256;
        double best = -1e300, bt = 0;
        for (int i = 0; i < n; ++i) {
          double t = 2 * M_PI * i / n;
          double v = f(t);
          if (v > best) {
            best = v;
            bt = t;
          }
        }
        double lo = bt - 2 * M_PI / n, hi = bt + 2 * M_PI / n;
        const double g = 0.5 * (std::sqrt(5.0) - 1);
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 80; ++it) {
          if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
          } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
          }
        }
        return std::max({best, f1, f2});
      }
    }
    return 0;
  }

  // Minimum curvature over a dense grid with golden refinement near the smallest samples.
  double min_curvature() const {
    if (spec_.kind == ShapeKind::circle) return 1.0 / spec_.radius;
    const int n = 4096;
    std::vector<double> k(n);
    for (int i = 0; i < n; ++i) k[i] = curvature_t(2 * M_PI * i / n);
    double best = *std::min_element(k.begin(), k.end());
    for (int i = 0; i < n; ++i) {
      double km = k[(i + n - 1) % n], kp = k[(i + 1) % n];
      if (k[i] > km || k[i] > kp) continue;
      double lo = 2 * M_PI * (i - 1) / n, hi = 2 * M_PI * (i + 1) / n;
      const double g = 0.5 * (std::sqrt(5.0) - 1);
      for (int it = 0; it < 60; ++it) {
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        if (curvature_t(x1) < curvature_t(x2)) {
          hi = x2;
        } else {
          lo = x1;
        }
      }
      best = std::min(best, curvature_t(0.5 * (lo + hi)));
    }
    return best;
  }

 private:
  template <class T>
  static T as(const Real& mpv, double dv) {
    if constexpr (std::is_same_v<T, double>) {
      (void)mpv;
      return dv;
    } else {
      (void)dv;
      return Real(mpv, mp::default_bits());
    }
  }

  template <class T>
  void check_precision() const {
    if constexpr (!std::is_same_v<T, double>) {
      if (mp::default_bits() > max_bits_) {
        throw Error(ErrorKind::precision_unavailable, "requested " + std::to_string(mp::default_bits()) +
                                                          " bits, obstacle built for " + std::to_string(max_bits_));
      }
    }
  }

  template <class T>
  static int gauss_order() {
    return gauss_order_for_bits(real_traits<T>::working_bits());
  }

  template <class T>
  static std::optional<T> quadratic_entry(const T& A, const T& B, const T& C) {
    // A lam^2 + 2 B lam + C = 0, first root; C > 0 when the origin is outside.
    T disc = B * B - A * C;
    if (disc <= 0) return std::nullopt;
    T sq = sqrt(disc);
    if (B >= 0) return std::nullopt;  // moving away
    T lam = C / (-B + sq);
    if (lam <= 0) return std::nullopt;
    return lam;
  }

  template <class T>
  void radial(const T& t, const T& ct, const T& st, T& r, T& r1, T& r2) const {
    r = T(spec_.r0);
    r1 = T(0.0);
    r2 = T(0.0);
    std::size_t K = std::max(spec_.cos_coef.size(), spec_.sin_coef.size());
    T ck = ct, sk = st;
    (void)t;
    for (std::size_t k = 1; k <= K; ++k) {
      double ak = k <= spec_.cos_coef.size() ? spec_.cos_coef[k - 1] : 0.0;
      double bk = k <= spec_.sin_coef.size() ? spec_.sin_coef[k - 1] : 0.0;
      double kk = double(k);
      r += ak * ck + bk * sk;
      r1 += kk * (bk * ck - ak * sk);
      r2 -= kk * kk * (ak * ck + bk * sk);
      T cn = ck * ct - sk * st;
      T sn = sk * ct + ck * st;
      ck = std::move(cn);
      sk = std::move(sn);
    }
  }

  // Signed radial excess |q - c| - r(theta); negative inside.
  template <class T>
  T fourier_level(const Vec2<T>& q, T* dfdlam = nullptr, const Vec2<T>* d = nullptr) const {
    T dx = q.x - T(spec_.cx), dy = q.y - T(spec_.cy);
    T rho = sqrt(dx * dx + dy * dy);
    T ct = dx / rho, st = dy / rho;
    T th = atan2(dy, dx);
    T r, r1, r2;
    radial(th, ct, st, r, r1, r2);
    if (dfdlam) {
      // grad = e_rho - r'(theta) e_theta / rho
      T gx = ct + r1 * st / rho, gy = st - r1 * ct / rho;
      *dfdlam = gx * d->x + gy * d->y;
    }
    return rho - r;
  }

  template <class T>
  std::optional<T> fourier_entry(const Vec2<T>& o, const Vec2<T>& d) const {
    // Bracket in double inside the bounding disc, then Newton at working precision.
    Vec2<double> od(to_double(o.x), to_double(o.y)), dd(to_double(d.x), to_double(d.y));
    double R = bounding_radius() * (1 + 1e-9);
    double rx = od.x - spec_.cx, ry = od.y - spec_.cy;
    double B = rx * dd.x + ry * dd.y, C = rx * rx + ry * ry - R * R;
    double disc = B * B - C;
    if (disc <= 0) return std::nullopt;
    double l0 = std::max(0.0, -B - std::sqrt(disc)), l1 = -B + std::sqrt(disc);
    if (l1 <= 0) return std::nullopt;
    auto fd = [&](double lam) { return fourier_level(Vec2<double>(od.x + lam * dd.x, od.y + lam * dd.y)); };
    const int n = 512;
    double prev = l0, fprev = fd(l0);
    if (fprev <= 0) return std::nullopt;  // origin inside: not a valid launch
    double lo = -1, hi = -1;
    double fmin = fprev, lmin = l0;
    for (int i = 1; i <= n; ++i) {
      double lam = l0 + (l1 - l0) * i / n;
      double f = fd(lam);
      if (f < 0) {
        lo = prev;
        hi = lam;
        break;
      }
      if (f < fmin) {
        fmin = f;
        lmin = lam;
      }
      prev = lam;
      fprev = f;
    }
    if (lo < 0) {
      // Possible thin chord between samples: golden search for a negative value near the minimum.
      double a = std::max(l0, lmin - (l1 - l0) / n), b = std::min(l1, lmin + (l1 - l0) / n);
      const double g = 0.5 * (std::sqrt(5.0) - 1);
      for (int it = 0; it < 80; ++it) {
        double x1 = b - g * (b - a), x2 = a + g * (b - a);
        if (fd(x1) < fd(x2)) {
          b = x2;
        } else {
          a = x1;
        }
      }
      double lm = 0.5 * (a + b);
      if (fd(lm) >= 0) return std::nullopt;
      lo = std::max(l0, lmin - (l1 - l0) / n);
      hi = lm;
    }
    for (int it = 0; it < 60 && hi - lo > 1e-15 * (1 + hi); ++it) {
      double mid = 0.5 * (lo + hi);
      if (fd(mid) > 0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if constexpr (std::is_same_v<T, double>) {
      return 0.5 * (lo + hi);
    } else {
      T lam(0.5 * (lo + hi));
      T tlo(lo), thi(hi);
      T width = thi - tlo;
      const long bits = real_traits<T>::working_bits();
      T tol = ldexp(T(1.0), -(bits - 2)) * (1.0 + abs(lam));
      for (int it = 0; it < 200; ++it) {
        T df;
        Vec2<T> q = o + lam * d;
        T f = fourier_level(q, &df, &d);
        T step = f / df;
        lam -= step;
        if (lam < tlo - width || lam > thi + width) lam = T(0.5 * (lo + hi));
        if (abs(step) <= tol) break;
      }
      return lam;
    }
  }

  void validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorKind::table_invalid, m); };
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(spec_.cx) || !finite(spec_.cy)) bad("center must be finite");
    switch (spec_.kind) {
      case ShapeKind::circle:
        if (!(spec_.radius > 0) || !finite(spec_.radius)) bad("circle radius must be positive");
        break;
      case ShapeKind::ellipse:
        if (!(spec_.b > 0) || !(spec_.a >= spec_.b) || !finite(spec_.a) || !finite(spec_.rot))
          bad("ellipse semi-axes must satisfy a >= b > 0");
        break;
      case ShapeKind::fourier: {
        if (!(spec_.r0 > 0) || !finite(spec_.r0)) bad("fourier base radius must be positive");
        double amp = 0;
        for (double v : spec_.cos_coef) amp += std::fabs(v);
        for (double v : spec_.sin_coef) amp += std::fabs(v);
        if (!(amp < spec_.r0)) bad("fourier radial function must stay positive");
        double kmin = min_curvature();
        if (!(kmin > 0)) {
          std::ostringstream os;
          os << "fourier curve is not strictly convex (min curvature " << kmin << ")";
          bad(os.str());
        }
        break;
      }
    }
  }

  void build_arclength() {
    if (spec_.kind == ShapeKind::circle) return;
    mp::PrecisionScope scope(max_bits_ + 16);
    const long bits = max_bits_ + 16;
    const auto& rule = gauss_rule<Real>(gauss_order_for_bits(bits));
    auto speed = [&](const Real& x) { return speed_t(x); };
    const Real two_pi = 2.0 * mp::pi();
    const Real scale = Real(bounding_radius()) * two_pi;
    const Real tol = ldexp(Real(1.0), -(bits + 2)) * scale;
    struct Panel {
      Real a, b, v;
    };
    std::vector<Panel> done;
    std::vector<Panel> todo;
    const int initial = 16;
    for (int i = initial - 1; i >= 0; --i) {
      Real a = two_pi * Real(i) / Real(initial), b = two_pi * Real(i + 1) / Real(initial);
      todo.push_back({a, b, gauss_integrate(rule, speed, a, b)});
    }
    while (!todo.empty()) {
      Panel p = todo.back();
      todo.pop_back();
      Real m = (p.a + p.b) / 2.0;
      Real v1 = gauss_integrate(rule, speed, p.a, m), v2 = gauss_integrate(rule, speed, m, p.b);
      if (abs(v1 + v2 - p.v) <= tol || done.size() + todo.size() > 20000) {
        done.push_back(p);
      } else {
        todo.push_back({m, p.b, v2});
        todo.push_back({p.a, m, v1});
      }
    }
    Real acc(0.0);
    for (const auto& p : done) {
      brk_mp_.push_back(Real(p.a, max_bits_));
      cum_mp_.push_back(Real(acc, max_bits_));
      acc += p.v;
    }
    brk_mp_.push_back(Real(two_pi, max_bits_));
    cum_mp_.push_back(Real(acc, max_bits_));
    total_mp_ = Real(acc, max_bits_);
    for (const auto& v : brk_mp_) brk_d_.push_back(v.to_double());
    for (const auto& v : cum_mp_) cum_d_.push_back(v.to_double());
    total_d_ = total_mp_.to_double();
  }

  ShapeSpec spec_;
  long max_bits_;
  std::vector<Real> brk_mp_, cum_mp_;
  std::vector<double> brk_d_, cum_d_;
  Real total_mp_;
  double total_d_ = 0;
};

struct EclipseViolation {
  int i, j, k;       // 0-based; k meets hull(i, j)
  double depth;      // penetration depth
};

struct NonEclipseReport {
  bool ok = true;
  double min_clearance = 0;    // over all (pair, third) combinations
  int arg_i = -1, arg_j = -1, arg_k = -1;
  double min_pair_gap = 0;     // smallest distance between two obstacles
  std::vector<EclipseViolation> violations;
  std::vector<std::pair<int, int>> overlapping;
};

namespace detail {

template <class F>
double maximize_over_directions(const F& f) {
  const int n = 720;
  double best = -1e300, bp = 0;
  for (int i = 0; i < n; ++i) {
    double p = 2 * M_PI * i / n;
    double v = f(p);
    if (v > best) {
      best = v;
      bp = p;
    }
  }
  double lo = bp - 2 * M_PI / n, hi = bp + 2 * M_PI / n;
  const double g = 0.5 * (std::sqrt(5.0) - 1);
  for (int it = 0; it < 80; ++it) {
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    if (f(x1) < f(x2)) {
      lo = x1;
    } else {
      hi = x2;
    }
  }
  return std::max(best, f(0.5 * (lo + hi)));
}

}  // namespace detail

// Signed separation between convex sets A and B along the best direction: distance when
// disjoint, minus the penetration depth when they meet.
inline double separation(const std::vector<const ConvexObstacle*>& A, const ConvexObstacle& B) {
  return detail::maximize_over_directions([&](double psi) {
    double ux = std::cos(psi), uy = std::sin(psi);
    double ha = -1e300;
    for (const auto* o : A) ha = std::max(ha, o->support(ux, uy));
    return -B.support(-ux, -uy) - ha;
  });
}

inline NonEclipseReport check_non_eclipse(const std::vector<ConvexObstacle>& obs) {
  NonEclipseReport rep;
  int m = static_cast<int>(obs.size());
  if (m < 3) throw Error(ErrorKind::table_invalid, "table requires m >= 3 obstacles, got " + std::to_string(m));
  rep.min_pair_gap = 1e300;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      double g = separation({&obs[i]}, obs[j]);
      rep.min_pair_gap = std::min(rep.min_pair_gap, g);
      if (!(g > 0)) {
        rep.ok = false;
        rep.overlapping.push_back({i, j});
      }
    }
  }
  rep.min_clearance = 1e300;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        if (k == i || k == j) continue;
        double c = separation({&obs[i], &obs[j]}, obs[k]);
        if (c < rep.min_clearance) {
          rep.min_clearance = c;
          rep.arg_i = i;
          rep.arg_j = j;
          rep.arg_k = k;
        }
        if (!(c > 0)) {
          rep.ok = false;
          rep.violations.push_back({i, j, k, -c});
        }
      }
    }
  }
  return rep;
}

// Ordered obstacles with a validated non-eclipse certificate. Symbols are 1..m, indices 0..m-1.
class BilliardTable {
 public:
  BilliardTable(const std::vector<ShapeSpec>& specs, long max_bits = 64) {
    if (specs.size() < 3)
      throw Error(ErrorKind::table_invalid, "table requires m >= 3 obstacles, got " + std::to_string(specs.size()));
    obstacles_.reserve(specs.size());
    for (const auto& s : specs) obstacles_.emplace_back(s, max_bits);
    report_ = check_non_eclipse(obstacles_);
    if (!report_.overlapping.empty()) {
      auto [i, j] = report_.overlapping.front();
      throw Error(ErrorKind::table_invalid,
                  "obstacles " + std::to_string(i + 1) + " and " + std::to_string(j + 1) + " are not disjoint");
    }
    if (!report_.violations.empty()) {
      const auto& v = report_.violations.front();
      std::ostringstream os;
      os << "obstacle " << v.k + 1 << " meets the hull of " << v.i + 1 << " and " << v.j + 1 << " (depth "
         << v.depth << ")";
      throw EclipseError(v.i, v.j, v.k, v.depth, os.str());
    }
    specs_ = specs;
    max_bits_ = max_bits;
  }

  int size() const { return static_cast<int>(obstacles_.size()); }
  const ConvexObstacle& operator[](int i) const { return obstacles_[static_cast<std::size_t>(i)]; }
  const std::vector<ConvexObstacle>& obstacles() const { return obstacles_; }
  const std::vector<ShapeSpec>& specs() const { return specs_; }
  const NonEclipseReport& certificate() const { return report_; }
  double min_gap() const { return report_.min_pair_gap; }
  long max_bits() const { return max_bits_; }

  BilliardTable scaled(double c) const {
    std::vector<ShapeSpec> s;
    for (const auto& sp : specs_) s.push_back(sp.scaled(c));
    return BilliardTable(s, max_bits_);
  }

 private:
  std::vector<ConvexObstacle> obstacles_;
  std::vector<ShapeSpec> specs_;
  NonEclipseReport report_;
  long max_bits_ = 64;
};

// Free-function forms of the obstacle queries.
template <class T>
Vec2<T> eval_point(const ConvexObstacle& o, const T& s) {
  return o.point(s);
}

template <class T>
T curvature(const ConvexObstacle& o, const T& s) {
  return o.curvature(s);
}

template <class T>
T arclength_param(const ConvexObstacle& o, const T& t) {
  return o.s_of_t(t);
}

template <class T>
T arclength_inverse(const ConvexObstacle& o, const T& s) {
  return o.t_of_s(s);
}

}  // namespace mlsb
