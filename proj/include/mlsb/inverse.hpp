#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mlsb/errors.hpp"
#include "mlsb/geometry.hpp"
#include "mlsb/mp_real.hpp"
#include "mlsb/spectrum.hpp"
#include "mlsb/symbolic.hpp"

namespace mlsb {

// a_n = L(word_n) - multiplier(n) L(sigma), kept at the precision of each length.
struct DeficitSeries {
  FamilySpec family;
  Real sigma_length;
  std::vector<int> n;
  std::vector<Real> a;
  std::vector<Real> lengths;
  std::vector<long> bits;

  long max_bits() const {
    long b = sigma_length.bits();
    for (long v : bits) b = std::max(b, v);
    return b;
  }
};

inline DeficitSeries make_series(const FamilySpec& f, const Real& sigma_length, const std::vector<int>& ns,
                                 const std::vector<Real>& lengths) {
  DeficitSeries s;
  s.family = f;
  s.sigma_length = sigma_length;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    long b = std::min<long>(lengths[i].bits(), sigma_length.bits());
    mp::PrecisionScope scope(b);
    s.n.push_back(ns[i]);
    s.lengths.push_back(lengths[i]);
    s.bits.push_back(b);
    s.a.push_back(Real(lengths[i], b) - Real(double(family_multiplier(f, ns[i])), b) * Real(sigma_length, b));
  }
  return s;
}

// Blind read: only word -> length records of the store are used.
inline DeficitSeries series_from_store(const SpectrumStore& store, const FamilySpec& f) {
  auto sig = store.lookup(f.sigma);
  if (!sig) throw Error(ErrorKind::insufficient_data, "store has no entry for sigma " + format_word(f.sigma));
  Real ls(std::string_view(sig->length), sig->precision_bits);
  std::vector<int> ns;
  std::vector<Real> lens;
  for (int n = f.n_min; n <= f.n_max; ++n) {
    auto e = store.lookup(family_word(f, n));
    if (!e) continue;
    ns.push_back(n);
    lens.emplace_back(std::string_view(e->length), e->precision_bits);
  }
  if (ns.empty()) throw Error(ErrorKind::insufficient_data, "store has no family entries");
  return make_series(f, ls, ns, lens);
}

inline DeficitSeries series_from_batch(const FamilySpec& f, const FamilyBatch& b) {
  std::vector<int> ns;
  std::vector<Real> lens;
  for (const auto& r : b.rows) {
    if (!r.error.empty()) continue;
    ns.push_back(r.n);
    lens.push_back(r.length);
  }
  return make_series(f, b.sigma_length, ns, lens);
}

struct ParityEstimate {
  int parity = 0;
  int windows = 0;    // usable triples
  int n_last = -1;    // last index of the last usable triple
  Real linf, lambda, C;
  Real linf_spread, lambda_spread, C_spread;
  bool has_spread = false;
};

struct LinftyEstimate {
  Real linf, lambda;
  Real linf_err, lambda_err;
  ParityEstimate even, odd;
};

namespace detail {

inline Real rounding_floor(const Real& scale, long bits) { return ldexp(abs(scale), -(bits - 20)); }

inline ParityEstimate parity_windows(const DeficitSeries& s, int parity) {
  ParityEstimate pe;
  pe.parity = parity;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.n.size(); ++i)
    if (s.n[i] % 2 == parity) idx.push_back(i);
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return s.n[x] < s.n[y]; });
  if (idx.size() < 3)
    throw Error(ErrorKind::insufficient_data, std::string("need >= 3 ") + (parity ? "odd" : "even") + " terms");
  struct W {
    Real L, lam, C;
    int n;
  };
  std::vector<W> ws;
  int considered = 0;
  for (std::size_t k = 0; k + 2 < idx.size(); ++k) {
    std::size_t i0 = idx[k], i1 = idx[k + 1], i2 = idx[k + 2];
    if (s.n[i1] != s.n[i0] + 2 || s.n[i2] != s.n[i1] + 2) continue;
    ++considered;
    long b = std::min({s.bits[i0], s.bits[i1], s.bits[i2]});
    Real d1 = s.a[i1] - s.a[i0], d2 = s.a[i2] - s.a[i1];
    Real fl = rounding_floor(s.lengths[i2], b);
    if (abs(d2) <= fl || abs(d1) <= fl) continue;
    Real q = d2 / d1;
    if (!(q > 0) || !(q < 1)) continue;
    Real L = s.a[i2] + d2 * q / (1.0 - q);
    Real lam = sqrt(q);
    Real C = (L - s.a[i2]) / pow(lam, s.n[i2]);
    ws.push_back({L, lam, C, s.n[i2]});
  }
  if (considered == 0)
    throw Error(ErrorKind::insufficient_data, std::string("no consecutive ") + (parity ? "odd" : "even") + " triple");
  if (ws.empty())
    throw Error(ErrorKind::insufficient_precision,
                std::string("all ") + (parity ? "odd" : "even") + " triples are dominated by rounding");
  const W& last = ws.back();
  pe.windows = static_cast<int>(ws.size());
  pe.n_last = last.n;
  pe.linf = last.L;
  pe.lambda = last.lam;
  pe.C = last.C;
  if (ws.size() >= 2) {
    const W& prev = ws[ws.size() - 2];
    pe.linf_spread = abs(last.L - prev.L);
    pe.lambda_spread = abs(last.lam - prev.lam);
    pe.C_spread = abs(last.C - prev.C);
    pe.has_spread = true;
  } else {
    pe.linf_spread = Real(0.0);
    pe.lambda_spread = Real(0.0);
    pe.C_spread = Real(0.0);
  }
  return pe;
}

}  // namespace detail

// Geometric-tail elimination on sliding same-parity triples (n, n+2, n+4).
inline LinftyEstimate estimate_linfty_lambda(const DeficitSeries& s) {
  mp::PrecisionScope scope(s.max_bits());
  LinftyEstimate e;
  e.even = detail::parity_windows(s, 0);
  e.odd = detail::parity_windows(s, 1);
  const ParityEstimate& best = e.even.n_last >= e.odd.n_last ? e.even : e.odd;
  const ParityEstimate& other = e.even.n_last >= e.odd.n_last ? e.odd : e.even;
  Real dL = abs(e.even.linf - e.odd.linf);
  Real dl = abs(e.even.lambda - e.odd.lambda);
  Real fl = detail::rounding_floor(s.lengths.back(), s.bits.back());
  e.linf = best.linf;
  e.lambda = best.lambda;
  e.linf_err = (best.has_spread ? best.linf_spread : dL) + fl;
  e.lambda_err = (best.has_spread ? best.lambda_spread : dl) + fl;
  if (!(e.lambda_err < 0.05 * e.lambda))
    throw Error(ErrorKind::non_geometric, "lambda estimate does not stabilize (" + e.lambda.to_decimal() + " +- " +
                                              e.lambda_err.to_decimal() + ")");
  Real tolL = 3.0 * (e.even.linf_spread + e.odd.linf_spread) + 4.0 * fl;
  Real toll = 3.0 * (e.even.lambda_spread + e.odd.lambda_spread) + 4.0 * fl;
  if (best.has_spread && other.has_spread && (dL > tolL || dl > toll))
    throw Error(ErrorKind::non_geometric, "parity classes disagree: L_inf " + e.even.linf.to_decimal() + " vs " +
                                              e.odd.linf.to_decimal());
  return e;
}

struct RhoEstimate {
  Real rho;       // lambda D_n / D_{n+1}, n even
  Real rho_err;
  Real rho_rev;   // same with n odd; reciprocal of rho in theory
  Real rho_rev_err;
  int n_used = -1, n_rev_used = -1;
};

namespace detail {

inline std::pair<Real, Real> best_ratio(const DeficitSeries& s, const LinftyEstimate& e, int parity, int* n_used) {
  struct C {
    int n;
    Real r, err;
  };
  std::vector<C> cs;
  for (std::size_t i = 0; i < s.n.size(); ++i) {
    if (s.n[i] % 2 != parity) continue;
    auto j = std::find(s.n.begin(), s.n.end(), s.n[i] + 1);
    if (j == s.n.end()) continue;
    std::size_t k = static_cast<std::size_t>(j - s.n.begin());
    Real D0 = s.a[i] - e.linf, D1 = s.a[k] - e.linf;
    Real fl = rounding_floor(s.lengths[k], std::min(s.bits[i], s.bits[k]));
    if (abs(D1) <= fl * 100.0 || abs(D0) <= fl * 100.0) continue;
    Real r = e.lambda * D0 / D1;
    Real err = abs(r) * ((e.linf_err + fl) * (1.0 / abs(D0) + 1.0 / abs(D1)) + e.lambda_err / e.lambda);
    cs.push_back({s.n[i], r, err});
  }
  if (cs.empty()) throw Error(ErrorKind::insufficient_precision, "no deficit pair above the rounding floor");
  for (std::size_t i = 1; i < cs.size(); ++i) cs[i].err += abs(cs[i].r - cs[i - 1].r);
  if (cs.size() >= 1) cs[0].err += abs(cs[0].r);  // a lone first pair carries no convergence evidence
  std::size_t best = 0;
  for (std::size_t i = 1; i < cs.size(); ++i)
    if (cs[i].err < cs[best].err) best = i;
  *n_used = cs[best].n;
  return {cs[best].r, cs[best].err};
}

}  // namespace detail

inline RhoEstimate estimate_rho(const DeficitSeries& s, const LinftyEstimate& e) {
  mp::PrecisionScope scope(s.max_bits());
  RhoEstimate r;
  auto [a, ae] = detail::best_ratio(s, e, 0, &r.n_used);
  r.rho = a;
  r.rho_err = ae;
  auto [b, be] = detail::best_ratio(s, e, 1, &r.n_rev_used);
  r.rho_rev = b;
  r.rho_rev_err = be;
  return r;
}

template <class T>
T quadratic_form_Q(const T& X, const T& Y, const T& lam) {
  T one(1.0);
  return (one + lam * lam) * (one + X) * (one + X) - (one + lam) * (one + lam) * X * Y +
         2.0 * lam * (one + Y) * (one + Y);
}

// Root in (0, 1) of lam^2 - (4 a0 a1 - 2) lam + 1 = 0 with a_i = L / (2 R_i) + 1.
template <class T>
T lambda_from_radii(const T& L, const T& R0, const T& R1) {
  T a0 = L / (2.0 * R0) + 1.0, a1 = L / (2.0 * R1) + 1.0;
  T tr = 4.0 * a0 * a1 - 2.0;
  return 2.0 / (tr + sqrt(tr * tr - 4.0));
}

struct RadiiCandidate {
  Real X0, X1;  // R / ell, ell = L(sigma) / 2
  Real R0, R1;
  Real residual_rho;     // relative residual of Q(X0,X1) - rho Q(X1,X0) = 0
  Real residual_lambda;  // relative residual of 4 lam (1+X0)(1+X1) = (1+lam)^2 X0 X1
};

struct RadiiResult {
  bool symmetric_branch = false;
  std::vector<RadiiCandidate> candidates;
  bool unique() const { return candidates.size() == 1; }
};

namespace detail {

using Poly = std::vector<Real>;  // coefficients, lowest degree first

inline Poly padd(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), Real(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline Poly pmul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, Real(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline Poly pscale(const Poly& a, const Real& c) {
  Poly r(a);
  for (auto& v : r) v *= c;
  return r;
}

inline Real peval(const Poly& p, const Real& x) {
  Real acc(0.0);
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

inline Real pderiv_eval(const Poly& p, const Real& x) {
  Real acc(0.0);
  for (std::size_t i = p.size(); i-- > 1;) acc = acc * x + Real(double(i)) * p[i];
  return acc;
}

inline RadiiCandidate make_candidate(const Real& X0, const Real& X1, const Real& rho, const Real& lam, const Real& ell) {
  RadiiCandidate c{X0, X1, X0 * ell, X1 * ell, Real(0.0), Real(0.0)};
  Real q01 = quadratic_form_Q(X0, X1, lam), q10 = quadratic_form_Q(X1, X0, lam);
  c.residual_rho = abs(q01 - rho * q10) / (abs(q01) + abs(rho * q10));
  Real lhs = 4.0 * lam * (1.0 + X0) * (1.0 + X1), rhs = (1.0 + lam) * (1.0 + lam) * X0 * X1;
  c.residual_lambda = abs(lhs - rhs) / (abs(lhs) + abs(rhs));
  return c;
}

}  // namespace detail

// Radii at the two period-two bounces from rho, lambda and L(sigma).
inline RadiiResult recover_radii(const Real& rho, const Real& rho_err, const Real& lam, const Real& L) {
  if (!(rho > 0) || !(lam > 0) || !(lam < 1) || !(L > 0))
    throw Error(ErrorKind::no_positive_root, "need rho > 0, 0 < lambda < 1, L > 0");
  RadiiResult out;
  Real ell = L / 2.0;
  if (abs(rho - 1.0) < 10.0 * rho_err) {
    out.symmetric_branch = true;
    Real alpha = (1.0 + lam) / (2.0 * sqrt(lam));
    Real X = 1.0 / (alpha - 1.0);
    out.candidates.push_back(detail::make_candidate(X, X, Real(1.0), lam, ell));
    return out;
  }
  using detail::Poly;
  // X1 = N / D with N = 4 lam (1 + X0), D = (1 - lam)^2 X0 - 4 lam.
  Real one(1.0);
  Poly N{4.0 * lam, 4.0 * lam};
  Poly D{-4.0 * lam, (one - lam) * (one - lam)};
  Poly onepX{one, one};
  Poly X{Real(0.0), one};
  Real c1 = one + lam * lam, c2 = (one + lam) * (one + lam), c3 = 2.0 * lam;
  Poly DN = detail::padd(D, N);
  // Q(X0, X1) D^2 and Q(X1, X0) D^2 as polynomials in X0.
  Poly qa = detail::padd(detail::padd(detail::pscale(detail::pmul(detail::pmul(onepX, onepX), detail::pmul(D, D)), c1),
                                      detail::pscale(detail::pmul(detail::pmul(X, N), D), -c2)),
                         detail::pscale(detail::pmul(DN, DN), c3));
  Poly qb = detail::padd(detail::padd(detail::pscale(detail::pmul(DN, DN), c1),
                                      detail::pscale(detail::pmul(detail::pmul(N, X), D), -c2)),
                         detail::pscale(detail::pmul(detail::pmul(onepX, onepX), detail::pmul(D, D)), c3));
  Poly P = detail::padd(qa, detail::pscale(qb, -rho));
  Real xmin = 4.0 * lam / ((one - lam) * (one - lam));
  // Scan log-spaced X0 in (xmin, xmin * 1e8] for sign changes and near-zero minima.
  const int M = 20000;
  std::vector<Real> xs, ps;
  for (int i = 0; i <= M; ++i) {
    double u = -12.0 + 20.0 * i / M;  // X0 = xmin (1 + 10^u)
    Real x = xmin * (1.0 + pow(Real(10.0), Real(u)));
    xs.push_back(x);
    ps.push_back(detail::peval(P, x));
  }
  std::vector<Real> roots;
  auto polish = [&](Real lo, Real hi) {
    Real flo = detail::peval(P, lo);
    for (int it = 0; it < 400; ++it) {
      Real mid = (lo + hi) / 2.0;
      Real fm = detail::peval(P, mid);
      if ((fm > 0) == (flo > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
      if (abs(hi - lo) <= ldexp(abs(mid), -(mp::default_bits() - 4))) break;
    }
    roots.push_back((lo + hi) / 2.0);
  };
  for (int i = 0; i < M; ++i) {
    if (ps[i] == 0) {
      roots.push_back(xs[i]);
    } else if ((ps[i] > 0) != (ps[i + 1] > 0)) {
      polish(xs[i], xs[i + 1]);
    }
  }
  for (const Real& x0 : roots) {
    Real d = detail::peval(D, x0);
    if (!(d > 0)) continue;
    Real x1 = detail::peval(N, x0) / d;
    if (!(x1 > 0)) continue;
    RadiiCandidate c = detail::make_candidate(x0, x1, rho, lam, ell);
    Real lam_fwd = lambda_from_radii(L, c.R0, c.R1);
    if (c.residual_rho < 1e-10 && c.residual_lambda < 1e-10 && abs(lam_fwd - lam) < 1e-8 * lam)
      out.candidates.push_back(c);
  }
  if (out.candidates.empty()) throw Error(ErrorKind::no_positive_root, "no positive root pair for rho " + rho.to_decimal());
  return out;
}

struct Invariants {
  Real alpha0, alpha1;        // at sigma0 and sigma1
  Real C1s, C1phi;            // unit stable eigenvector of DF^2 at the sigma1 bounce
  Real C2s, C2phi;            // its image under DF (sigma1 -> sigma0)
  Real C_phi_s;               // 2 C1phi^2 / ((1 - lam^2) alpha1)
  Real xi2;                   // xi_inf^2
  Real C;                     // l xi^2 C_phi_s lam, the constant multiplying Q lam^n
  Real slope_check;           // C1s/C1phi + 4 alpha0 l lam / (1 - lam^2)
  Real ratio_sq_check;        // (C2phi/C1phi)^2 - lam alpha0 / alpha1
  Real ratio_check;           // C2phi/C1phi + (1 + lam) / (2 alpha1)
};

// amplitude K with D_n = -K lam^n on even n, so K = l xi^2 C_phi_s Q(X0, X1) lam.
inline Invariants recover_invariants(const Real& lam, const Real& L, const Real& R0, const Real& R1,
                                     const Real& amplitude) {
  Invariants v;
  Real ell = L / 2.0;
  v.alpha0 = ell / R0 + 1.0;
  v.alpha1 = ell / R1 + 1.0;
  const Real& a1 = v.alpha1;
  const Real& a2 = v.alpha0;
  Real g = (a1 * a2 - 1.0) / ell;
  // DF^2 at the sigma1 bounce: [[2 a1 a2 - 1, 2 a2 l], [2 a1 g, 2 a1 a2 - 1]].
  Real m11 = 2.0 * a1 * a2 - 1.0, m12 = 2.0 * a2 * ell;
  Real slope = -m12 / (m11 - lam);  // C_s / C_phi
  v.C1phi = 1.0 / sqrt(1.0 + slope * slope);
  v.C1s = slope * v.C1phi;
  // DF (sigma1 -> sigma0) = -[[a1, l], [g, a2]].
  v.C2s = -(a1 * v.C1s + ell * v.C1phi);
  v.C2phi = -(g * v.C1s + a2 * v.C1phi);
  v.C_phi_s = 2.0 * v.C1phi * v.C1phi / ((1.0 - lam * lam) * a1);
  Real X0 = R0 / ell, X1 = R1 / ell;
  Real Q = quadratic_form_Q(X0, X1, lam);
  v.xi2 = amplitude / (ell * v.C_phi_s * Q * lam);
  v.C = ell * v.xi2 * v.C_phi_s * lam;
  v.slope_check = slope + 4.0 * a2 * ell * lam / (1.0 - lam * lam);
  Real r = v.C2phi / v.C1phi;
  v.ratio_sq_check = r * r - lam * a2 / a1;
  v.ratio_check = r + (1.0 + lam) / (2.0 * a1);
  return v;
}

struct PeriodTwoReport {
  LinftyEstimate est;
  Real le, le_err;
  RhoEstimate rho;
  RadiiResult radii;
  Real L_sigma;
  int obstacle_R0 = 0, obstacle_R1 = 0;  // 1-based symbols carrying R0 (sigma0) and R1 (sigma1)
  std::optional<Invariants> inv;
  Real amplitude, amplitude_err;
};

// Full blind period-two inversion of a tau sigma^n series.
inline PeriodTwoReport invert_period_two(const DeficitSeries& s) {
  mp::PrecisionScope scope(s.max_bits());
  if (s.family.kind != FamilyKind::tau_sigma_n || s.family.sigma.size() != 2)
    throw Error(ErrorKind::inadmissible_word, "period-two inversion needs a tau-sigma-n series");
  PeriodTwoReport r;
  r.est = estimate_linfty_lambda(s);
  r.le = -log(r.est.lambda) / 2.0;
  r.le_err = r.est.lambda_err / r.est.lambda / 2.0;
  r.rho = estimate_rho(s, r.est);
  r.L_sigma = s.sigma_length;
  r.radii = recover_radii(r.rho.rho, r.rho.rho_err, r.est.lambda, s.sigma_length);
  r.obstacle_R0 = s.family.sigma[1];
  r.obstacle_R1 = s.family.sigma[0];
  r.amplitude = r.est.even.C;
  r.amplitude_err = r.est.even.C_spread;
  if (r.radii.unique()) {
    const auto& c = r.radii.candidates.front();
    r.inv = recover_invariants(r.est.lambda, s.sigma_length, c.R0, c.R1, r.amplitude);
  }
  return r;
}

struct LyapunovReport {
  LinftyEstimate est;
  Real le, le_err;
  Real C_even, C_odd, C_even_err, C_odd_err;
  int period = 0;
};

inline LyapunovReport lyapunov_from_mls(const DeficitSeries& s) {
  mp::PrecisionScope scope(s.max_bits());
  LyapunovReport r;
  r.period = static_cast<int>(s.family.sigma.size());
  r.est = estimate_linfty_lambda(s);
  r.le = -log(r.est.lambda) / double(r.period);
  r.le_err = r.est.lambda_err / r.est.lambda / double(r.period);
  r.C_even = r.est.even.C;
  r.C_odd = r.est.odd.C;
  r.C_even_err = r.est.even.C_spread;
  r.C_odd_err = r.est.odd.C_spread;
  return r;
}

struct PairData {
  int i = 0, j = 0;  // 1-based symbols, i < j
  Real L;            // L(ij)
  Real lambda;
  Real lambda_err;
};

struct DiscReconstruction {
  std::vector<Real> radii;
  std::vector<Vec2<Real>> centers;
  Real residual;           // max relative residual of the pair equations
  bool non_eclipse = false;
  double min_clearance = 0;
  bool reflection_class = false;  // m = 3: centers determined up to reflection
};

// The pair (i, j) family used for disc reconstruction: (k, j, (i j)^n) with k the smallest other symbol.
inline FamilySpec pair_family(int i, int j, int m, int n_min, int n_max, long base_bits) {
  FamilySpec f;
  f.kind = FamilyKind::tau_sigma_n;
  f.sigma = {i, j};
  for (int k = 1; k <= m; ++k)
    if (k != i && k != j) {
      f.tau1 = k;
      break;
    }
  f.n_min = n_min;
  f.n_max = n_max;
  f.base_bits = base_bits;
  return f;
}

inline DiscReconstruction reconstruct_disc_table(const std::vector<PairData>& pairs, int m) {
  if (m < 3) throw Error(ErrorKind::insufficient_data, "need m >= 3");
  long bits = 64;
  for (const auto& p : pairs) bits = std::max(bits, p.L.bits());
  mp::PrecisionScope scope(bits);
  std::vector<const PairData*> P(static_cast<std::size_t>(m * m), nullptr);
  for (const auto& p : pairs) {
    P[static_cast<std::size_t>((p.i - 1) * m + (p.j - 1))] = &p;
    P[static_cast<std::size_t>((p.j - 1) * m + (p.i - 1))] = &p;
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (!P[static_cast<std::size_t>(i * m + j)])
        throw Error(ErrorKind::insufficient_data, "missing pair " + std::to_string(i + 1) + std::to_string(j + 1));
  auto pair = [&](int i, int j) -> const PairData& { return *P[static_cast<std::size_t>(i * m + j)]; };
  // Equations F_ij(R) = 4 (L/(2Ri) + 1)(L/(2Rj) + 1) - (lam + 2 + 1/lam).
  std::vector<Real> R(static_cast<std::size_t>(m), Real(0.0));
  for (int i = 0; i < m; ++i) {
    Real acc(0.0);
    int cnt = 0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const PairData& pd = pair(i, j);
      Real alpha = (1.0 + pd.lambda) / (2.0 * sqrt(pd.lambda));
      acc += pd.L / 2.0 / (alpha - 1.0);
      ++cnt;
    }
    R[static_cast<std::size_t>(i)] = acc / double(cnt);
  }
  auto residuals = [&](const std::vector<Real>& r, std::vector<Real>* F, std::vector<std::vector<Real>>* Jm) {
    Real worst(0.0);
    if (F) F->clear();
    if (Jm) Jm->clear();
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const PairData& pd = pair(i, j);
        Real ai = pd.L / (2.0 * r[static_cast<std::size_t>(i)]) + 1.0;
        Real aj = pd.L / (2.0 * r[static_cast<std::size_t>(j)]) + 1.0;
        Real rhs = pd.lambda + 2.0 + 1.0 / pd.lambda;
        Real f = 4.0 * ai * aj - rhs;
        worst = std::max(worst, abs(f) / rhs);
        if (F) F->push_back(f);
        if (Jm) {
          std::vector<Real> row(static_cast<std::size_t>(m), Real(0.0));
          Real ri = r[static_cast<std::size_t>(i)], rj = r[static_cast<std::size_t>(j)];
          row[static_cast<std::size_t>(i)] = -4.0 * aj * pd.L / (2.0 * ri * ri);
          row[static_cast<std::size_t>(j)] = -4.0 * ai * pd.L / (2.0 * rj * rj);
          Jm->push_back(row);
        }
      }
    return worst;
  };
  // Damped Gauss-Newton on the normal equations (square when m = 3).
  for (int it = 0; it < 200; ++it) {
    std::vector<Real> F;
    std::vector<std::vector<Real>> Jm;
    Real res = residuals(R, &F, &Jm);
    if (res < ldexp(Real(1.0), -(bits - 16))) break;
    std::size_t ne = F.size(), nm = static_cast<std::size_t>(m);
    std::vector<std::vector<Real>> A(nm, std::vector<Real>(nm + 1, Real(0.0)));
    for (std::size_t a = 0; a < nm; ++a) {
      for (std::size_t b = 0; b < nm; ++b)
        for (std::size_t e = 0; e < ne; ++e) A[a][b] += Jm[e][a] * Jm[e][b];
      for (std::size_t e = 0; e < ne; ++e) A[a][nm] -= Jm[e][a] * F[e];
    }
    for (std::size_t c = 0; c < nm; ++c) {
      std::size_t piv = c;
      for (std::size_t r2 = c + 1; r2 < nm; ++r2)
        if (abs(A[r2][c]) > abs(A[piv][c])) piv = r2;
      std::swap(A[c], A[piv]);
      if (A[c][c] == 0) throw Error(ErrorKind::inconsistent_system, "singular radius system");
      for (std::size_t r2 = 0; r2 < nm; ++r2) {
        if (r2 == c) continue;
        Real fct = A[r2][c] / A[c][c];
        for (std::size_t k = c; k <= nm; ++k) A[r2][k] -= fct * A[c][k];
      }
    }
    std::vector<Real> step(nm);
    for (std::size_t c = 0; c < nm; ++c) step[c] = A[c][nm] / A[c][c];
    Real damp(1.0);
    for (int ls = 0; ls < 40; ++ls) {
      std::vector<Real> Rn(R);
      bool pos = true;
      for (std::size_t c = 0; c < nm; ++c) {
        Rn[c] += damp * step[c];
        if (!(Rn[c] > 0)) pos = false;
      }
      if (pos && residuals(Rn, nullptr, nullptr) <= res) {
        R = Rn;
        break;
      }
      damp /= 2.0;
    }
  }
  DiscReconstruction out;
  out.radii = R;
  out.residual = residuals(R, nullptr, nullptr);
  // Scale-free tolerance: estimation errors of lambda propagate into the residual.
  Real tol(1e-6);
  for (const auto& p : pairs) tol = std::max(tol, 100.0 * p.lambda_err / p.lambda);
  if (out.residual > tol)
    throw Error(ErrorKind::inconsistent_system, "pair equations residual " + out.residual.to_decimal());
  auto dist = [&](int i, int j) { return pair(i, j).L / 2.0 + R[static_cast<std::size_t>(i)] + R[static_cast<std::size_t>(j)]; };
  out.centers.assign(static_cast<std::size_t>(m), Vec2<Real>());
  Real d01 = dist(0, 1);
  out.centers[1] = Vec2<Real>(d01, Real(0.0));
  auto place = [&](int k) {
    Real d0 = dist(0, k), d1 = dist(1, k);
    Real x = (d01 * d01 + d0 * d0 - d1 * d1) / (2.0 * d01);
    Real y2 = d0 * d0 - x * x;
    if (y2 < 0) throw Error(ErrorKind::inconsistent_system, "triangle inequality fails for obstacle " + std::to_string(k + 1));
    return std::pair<Real, Real>(x, sqrt(y2));
  };
  auto [x2, y2] = place(2);
  out.centers[2] = Vec2<Real>(x2, y2);
  out.reflection_class = m == 3;
  for (int k = 3; k < m; ++k) {
    auto [x, y] = place(k);
    Real d2 = dist(2, k);
    Vec2<Real> up(x, y), dn(x, -y);
    Real eu = abs(norm(up - out.centers[2]) - d2), ed = abs(norm(dn - out.centers[2]) - d2);
    out.centers[static_cast<std::size_t>(k)] = eu <= ed ? up : dn;
  }
  std::vector<ShapeSpec> specs;
  for (int k = 0; k < m; ++k)
    specs.push_back(ShapeSpec::circle(out.centers[static_cast<std::size_t>(k)].x.to_double(),
                                      out.centers[static_cast<std::size_t>(k)].y.to_double(),
                                      R[static_cast<std::size_t>(k)].to_double()));
  std::vector<ConvexObstacle> obs;
  for (const auto& s : specs) obs.emplace_back(s);
  NonEclipseReport ne = check_non_eclipse(obs);
  out.non_eclipse = ne.ok;
  out.min_clearance = ne.min_clearance;
  return out;
}

// Pair data for all pairs read blindly from the store.
inline std::vector<PairData> pair_data_from_store(const SpectrumStore& store, int m, int n_min, int n_max) {
  std::vector<PairData> out;
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) {
      FamilySpec f = pair_family(i, j, m, n_min, n_max, 64);
      DeficitSeries s = series_from_store(store, f);
      LinftyEstimate e = estimate_linfty_lambda(s);
      out.push_back({i, j, s.sigma_length, e.lambda, e.lambda_err});
    }
  return out;
}

// Rigid alignment error (rotation, reflection, translation allowed) between two point sets.
inline double procrustes_error(const std::vector<Vec2<double>>& A, const std::vector<Vec2<double>>& B) {
  std::size_t n = A.size();
  Vec2<double> ca, cb;
  for (std::size_t i = 0; i < n; ++i) {
    ca = ca + A[i];
    cb = cb + B[i];
  }
  ca = (1.0 / n) * ca;
  cb = (1.0 / n) * cb;
  double best = 1e300;
  for (int refl = 0; refl < 2; ++refl) {
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Vec2<double> a = A[i] - ca, b = B[i] - cb;
      if (refl) a.y = -a.y;
      sxx += a.x * b.x + a.y * b.y;
      sxy += a.x * b.y - a.y * b.x;
    }
    double th = std::atan2(sxy, sxx), c = std::cos(th), s = std::sin(th);
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Vec2<double> a = A[i] - ca, b = B[i] - cb;
      if (refl) a.y = -a.y;
      Vec2<double> ra(c * a.x - s * a.y, s * a.x + c * a.y);
      worst = std::max(worst, norm(ra - b));
    }
    best = std::min(best, worst);
  }
  return best;
}


struct LeadingTermReport {
  Word sigma;
  int tau1 = 0;
  long bits = 0;
  Real lambda, L_sigma, linf;
  Real R0, R1;      // forward radii at the sigma0 and sigma1 bounces
  Real Q_even, Q_odd;
  Real C;           // calibrated from the deepest even deficit
  int n_cal = 0;
  Real C_abs;       // l xi^2 C_phi_s lam with xi from the homoclinic approximant (diagnostic)
  Real parity_ratio_observed;   // (D_odd / lam^n) / (D_even / lam^n) at the deepest pair
  Real parity_ratio_predicted;  // Q_odd / Q_even
  std::vector<int> n;
  std::vector<Real> D, predicted, ratio;
  double remainder_slope = 0;   // fit of log|D_n - predicted| against n over [fit_lo, fit_hi]
  double remainder_bound = 0;   // -1.45 log(1/lam)
  int fit_lo = 8, fit_hi = 16;
};

namespace detail {

inline double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// Forward oracle: solves the family from the table itself (not blind).
inline LeadingTermReport verify_leading_term(const BilliardTable& table, const Word& sigma, int tau1, int n_max,
                                       long bits = 512, int n_deep = 40, int n_cal = 30) {
  mp::PrecisionScope scope(bits);
  LeadingTermReport rep;
  rep.sigma = sigma;
  rep.tau1 = tau1;
  rep.bits = bits;
  FamilySpec f;
  f.kind = FamilyKind::tau_sigma_n;
  f.sigma = sigma;
  f.tau1 = tau1;
  f.n_min = 0;
  f.n_max = std::max(n_max, n_deep);
  f.base_bits = bits;
  f.ladder = false;
  validate_family(f, table.size());
  SolverOptions opt;
  opt.precision_bits = bits;
  PeriodicOrbit<Real> so = solve_periodic<Real>(table, sigma, opt);
  rep.lambda = so.mono.lambda;
  rep.L_sigma = so.length;
  rep.R1 = 1.0 / so.jets[0].K0;
  rep.R0 = 1.0 / so.jets[1].K0;
  Real ell = so.length / 2.0;
  rep.Q_even = quadratic_form_Q(rep.R0 / ell, rep.R1 / ell, rep.lambda);
  rep.Q_odd = quadratic_form_Q(rep.R1 / ell, rep.R0 / ell, rep.lambda);
  std::vector<Real> a(static_cast<std::size_t>(f.n_max + 1));
  PeriodicOrbit<Real> approximant;
  int n_xi = std::min(f.n_max, 24);
  for (int n = 0; n <= f.n_max; ++n) {
    PeriodicOrbit<Real> o = solve_periodic<Real>(table, family_word(f, n), opt);
    a[static_cast<std::size_t>(n)] = o.length - Real(double(n + 1)) * so.length;
    if (n == n_xi) approximant = std::move(o);
  }
  // L_inf by exact elimination on the deepest even triple.
  int n4 = f.n_max - (f.n_max % 2);
  const Real& a0 = a[static_cast<std::size_t>(n4 - 4)];
  const Real& a2 = a[static_cast<std::size_t>(n4 - 2)];
  const Real& a4 = a[static_cast<std::size_t>(n4)];
  Real q = (a4 - a2) / (a2 - a0);
  rep.linf = a4 + (a4 - a2) * q / (1.0 - q);
  rep.n_cal = std::min(n_cal - (n_cal % 2), n4 - 6);
  rep.C = -(a[static_cast<std::size_t>(rep.n_cal)] - rep.linf) / (rep.Q_even * pow(rep.lambda, rep.n_cal));
  {
    int ne = rep.n_cal, no = rep.n_cal + 1;
    Real ce = (a[static_cast<std::size_t>(ne)] - rep.linf) / pow(rep.lambda, ne);
    Real co = (a[static_cast<std::size_t>(no)] - rep.linf) / pow(rep.lambda, no);
    rep.parity_ratio_observed = co / ce;
    rep.parity_ratio_predicted = rep.Q_odd / rep.Q_even;
  }
  // Absolute constant: positions 2k of the approximant are sigma1 bounces with phi ~ xi C1phi lam^k.
  {
    Invariants inv = recover_invariants(rep.lambda, rep.L_sigma, rep.R0, rep.R1, Real(1.0));
    int k = std::max(1, n_xi / 4);
    Real xiC = approximant.points[static_cast<std::size_t>(2 * k)].phi / pow(rep.lambda, k);
    Real xi = xiC / inv.C1phi;
    rep.C_abs = ell * xi * xi * inv.C_phi_s * rep.lambda;
  }
  std::vector<double> xs, ys;
  for (int n = 0; n <= n_max; ++n) {
    Real D = a[static_cast<std::size_t>(n)] - rep.linf;
    const Real& Q = n % 2 == 0 ? rep.Q_even : rep.Q_odd;
    Real pred = -rep.C * Q * pow(rep.lambda, n);
    rep.n.push_back(n);
    rep.D.push_back(D);
    rep.predicted.push_back(pred);
    rep.ratio.push_back(D / pred);
    if (n >= rep.fit_lo && n <= rep.fit_hi) {
      Real rem = abs(D - pred);
      if (rem > 0) {
        xs.push_back(n);
        ys.push_back(log(rem).to_double());
      }
    }
  }
  rep.remainder_slope = xs.size() >= 2 ? detail::slope_fit(xs, ys) : 0.0;
  rep.remainder_bound = -1.45 * std::log(1.0 / rep.lambda.to_double());
  return rep;
}

}  // namespace mlsb
