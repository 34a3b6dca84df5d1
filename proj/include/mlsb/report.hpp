#pragma once

#include <string>

#include "json.hpp"
#include "mlsb/inverse.hpp"
#include "mlsb/solver.hpp"

namespace mlsb {

using ojson = nlohmann::ordered_json;

// Reals are written as decimal strings; digits > 0 rounds to that many significant digits.
inline std::string real_str(const Real& x, int digits = 0) {
  if (digits <= 0) return x.to_decimal();
  char buf[64];
  mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, x.get());
  return buf;
}

template <class T>
ojson orbit_json(const BilliardTable& table, const PeriodicOrbit<T>& o, int digits = 0) {
  auto str = [&](const T& v) {
    if constexpr (std::is_same_v<T, Real>) {
      return real_str(v, digits);
    } else {
      return to_decimal(v);
    }
  };
  ojson j;
  j["word"] = format_word(o.word);
  j["period"] = o.period();
  j["precision_bits"] = o.precision_bits;
  j["length"] = str(o.length);
  j["trace"] = str(o.mono.trace);
  j["lambda"] = str(o.mono.lambda);
  j["le"] = str(o.mono.le);
  j["gradient_norm"] = str(o.gradient_norm);
  j["reflection_residual"] = str(o.reflection_residual);
  j["iterations"] = o.iterations;
  j["negative_pivots"] = o.negative_pivots;
  j["points"] = ojson::array();
  for (std::size_t k = 0; k < o.points.size(); ++k) {
    const auto& p = o.points[k];
    Vec2<T> xy = table[p.obstacle].point_t(o.t[k]);
    ojson q;
    q["obstacle"] = p.obstacle + 1;
    q["s"] = str(p.s);
    q["phi"] = str(p.phi);
    q["x"] = str(xy.x);
    q["y"] = str(xy.y);
    j["points"].push_back(q);
  }
  return j;
}

inline ojson estimate_json(const LinftyEstimate& e, int d) {
  ojson j;
  j["linf"] = real_str(e.linf, d);
  j["linf_err"] = real_str(e.linf_err, d);
  j["lambda"] = real_str(e.lambda, d);
  j["lambda_err"] = real_str(e.lambda_err, d);
  for (const ParityEstimate* pe : {&e.even, &e.odd}) {
    ojson p;
    p["windows"] = pe->windows;
    p["n_last"] = pe->n_last;
    p["linf"] = real_str(pe->linf, d);
    p["lambda"] = real_str(pe->lambda, d);
    p["C"] = real_str(pe->C, d);
    p["linf_spread"] = real_str(pe->linf_spread, d);
    p["lambda_spread"] = real_str(pe->lambda_spread, d);
    p["C_spread"] = real_str(pe->C_spread, d);
    j[pe->parity ? "odd" : "even"] = p;
  }
  return j;
}

inline ojson period_two_json(const PeriodTwoReport& r, int d = 0) {
  ojson j;
  j["mode"] = "period2";
  j["lambda"] = real_str(r.est.lambda, d);
  j["lambda_err"] = real_str(r.est.lambda_err, d);
  j["le"] = real_str(r.le, d);
  j["le_err"] = real_str(r.le_err, d);
  j["linf"] = real_str(r.est.linf, d);
  j["linf_err"] = real_str(r.est.linf_err, d);
  j["L_sigma"] = real_str(r.L_sigma, d);
  j["rho"] = real_str(r.rho.rho, d);
  j["rho_err"] = real_str(r.rho.rho_err, d);
  j["rho_reverse"] = real_str(r.rho.rho_rev, d);
  j["rho_reverse_err"] = real_str(r.rho.rho_rev_err, d);
  j["branch"] = r.radii.symmetric_branch ? "symmetric" : "asymmetric";
  j["obstacle_R0"] = r.obstacle_R0;
  j["obstacle_R1"] = r.obstacle_R1;
  j["candidates"] = ojson::array();
  for (const auto& c : r.radii.candidates) {
    ojson q;
    q["R0"] = real_str(c.R0, d);
    q["R1"] = real_str(c.R1, d);
    q["residual_rho"] = real_str(c.residual_rho, 6);
    q["residual_lambda"] = real_str(c.residual_lambda, 6);
    Real lhs = 4.0 * r.est.lambda * (r.L_sigma / (2.0 * c.R0) + 1.0) * (r.L_sigma / (2.0 * c.R1) + 1.0);
    Real rhs = (1.0 + r.est.lambda) * (1.0 + r.est.lambda);
    q["forward_check"] = real_str(abs(lhs - rhs) / rhs, 6);
    j["candidates"].push_back(q);
  }
  j["ambiguous"] = r.radii.candidates.size() > 1;
  j["amplitude"] = real_str(r.amplitude, d);
  j["amplitude_err"] = real_str(r.amplitude_err, d);
  if (r.inv) {
    j["xi_inf_sq"] = real_str(r.inv->xi2, d);
    j["C_phi_s"] = real_str(r.inv->C_phi_s, d);
    j["C1_phi"] = real_str(r.inv->C1phi, d);
    j["C2_phi"] = real_str(r.inv->C2phi, d);
    j["C"] = real_str(r.inv->C, d);
  }
  j["estimate"] = estimate_json(r.est, d);
  return j;
}

inline ojson lyapunov_json(const LyapunovReport& r, int d = 0) {
  ojson j;
  j["mode"] = "lyapunov";
  j["period"] = r.period;
  j["le"] = real_str(r.le, d);
  j["le_err"] = real_str(r.le_err, d);
  j["lambda"] = real_str(r.est.lambda, d);
  j["lambda_err"] = real_str(r.est.lambda_err, d);
  j["linf"] = real_str(r.est.linf, d);
  j["linf_err"] = real_str(r.est.linf_err, d);
  j["C_even"] = real_str(r.C_even, d);
  j["C_even_err"] = real_str(r.C_even_err, d);
  j["C_odd"] = real_str(r.C_odd, d);
  j["C_odd_err"] = real_str(r.C_odd_err, d);
  j["estimate"] = estimate_json(r.est, d);
  return j;
}

inline ojson discs_json(const DiscReconstruction& r, const std::vector<PairData>& pairs, int d = 0) {
  ojson j;
  j["mode"] = "discs";
  j["radii"] = ojson::array();
  for (const auto& v : r.radii) j["radii"].push_back(real_str(v, d));
  j["centers"] = ojson::array();
  for (const auto& c : r.centers) j["centers"].push_back({real_str(c.x, d), real_str(c.y, d)});
  j["residual"] = real_str(r.residual, 6);
  j["non_eclipse"] = r.non_eclipse;
  j["min_clearance"] = r.min_clearance;
  j["isometry_class"] = r.reflection_class ? "up to rotation, translation and reflection" : "up to rigid motion";
  j["pairs"] = ojson::array();
  for (const auto& p : pairs) {
    ojson q;
    q["i"] = p.i;
    q["j"] = p.j;
    q["L"] = real_str(p.L, d);
    q["lambda"] = real_str(p.lambda, d);
    q["lambda_err"] = real_str(p.lambda_err, d);
    j["pairs"].push_back(q);
  }
  return j;
}

}  // namespace mlsb
