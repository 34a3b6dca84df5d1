// Acceptance run: one PASS/FAIL line per criterion. Optional arguments select criteria by number.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "mlsb/mlsb.hpp"

using namespace mlsb;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

std::string table_path(const std::string& name) { return std::string(MLSB_TABLES) + "/" + name + ".json"; }

const std::vector<std::string> kRegression{"equilateral", "two_disc",     "asymmetric", "disc_ellipse",
                                           "two_ellipses", "fourier_pair", "scalene",    "four_disc"};

double rel(const Real& a, const Real& b) { return (abs(a - b) / abs(b)).to_double(); }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Table at the precision needed by a family, filled blindly into an in-memory store.
struct Filled {
  TableFile tf;
  SpectrumStore store;
  long bits = 64;
};

Filled fill(const std::string& name, const std::vector<FamilySpec>& fams) {
  Filled f;
  f.tf = load_table_file(table_path(name));
  BilliardTable coarse(f.tf.specs, 64);
  for (const auto& fam : fams) f.bits = std::max(f.bits, family_max_bits(coarse, fam));
  BilliardTable t(f.tf.specs, f.bits);
  f.store = SpectrumStore::in_memory(f.tf.sha256);
  for (const auto& fam : fams) batch_family(f.store, t, fam, 1);
  return f;
}

// ---------------------------------------------------------------- 1

Outcome criterion1() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0;
  int done = 0;
  while (done < 20) {
    auto shape = [&](double cx, double cy) {
      if (U(rng) < 0.5) return ShapeSpec::circle(cx, cy, 0.5 + U(rng));
      double a = 0.8 + 0.8 * U(rng), b = a * (0.5 + 0.45 * U(rng));
      return ShapeSpec::ellipse(cx, cy, a, b, 2 * M_PI * U(rng));
    };
    double th = 2 * M_PI * U(rng), d = 4.5 + 3.5 * U(rng);
    double ux = std::cos(th), uy = std::sin(th);
    std::vector<ShapeSpec> specs{shape(0, 0), shape(d * ux, d * uy),
                                 ShapeSpec::circle(d / 2 * ux - 12 * uy, d / 2 * uy + 12 * ux, 1.0)};
    std::optional<BilliardTable> t;
    try {
      t.emplace(specs, 128);
    } catch (const Error&) {
      continue;
    }
    SolverOptions opt;
    opt.precision_bits = 128;
    PeriodicOrbit<Real> o = solve_periodic<Real>(*t, {1, 2}, opt);
    mp::PrecisionScope scope(128);
    Real ell, a1, a2;
    if (specs[0].kind == ShapeKind::circle && specs[1].kind == ShapeKind::circle) {
      Real dx = Real(specs[1].cx) - specs[0].cx, dy = Real(specs[1].cy) - specs[0].cy;
      ell = sqrt(dx * dx + dy * dy) - specs[0].radius - specs[1].radius;
      a1 = ell / specs[0].radius + 1.0;
      a2 = ell / specs[1].radius + 1.0;
    } else {
      Vec2<Real> p = (*t)[0].point_t(o.t[0]), q = (*t)[1].point_t(o.t[1]);
      ell = norm(q - p);
      a1 = ell * (*t)[0].curvature_t(o.t[0]) + 1.0;
      a2 = ell * (*t)[1].curvature_t(o.t[1]) + 1.0;
    }
    Real expect = 4.0 * a1 * a2 - 2.0;
    worst = std::max(worst, rel(o.mono.trace, expect));
    ++done;
  }
  return {worst < 1e-10, "max rel err " + fmt(worst) + " over 20 pairs at 128 bits"};
}

// ---------------------------------------------------------------- 2, 3

std::optional<LeadingTermReport> g_equilateral_run;

Outcome criterion2() {
  TableFile eq = load_table_file(table_path("equilateral"));
  BilliardTable t(eq.specs, 512);
  g_equilateral_run = verify_leading_term(t, {1, 2}, 3, 16);
  const LeadingTermReport& r = *g_equilateral_run;
  mp::PrecisionScope scope(512);
  Real lam = Real(49.0) - 20.0 * sqrt(Real(6.0));
  double lam_err = rel(r.lambda, lam);
  double dev = 0;
  for (std::size_t i = 0; i < r.n.size(); ++i)
    if (r.n[i] >= 10) dev = std::max(dev, abs(r.ratio[i] - 1.0).to_double());
  bool sym_ok = dev < 1e-3 && lam_err < 1e-12;

  TableFile as = load_table_file(table_path("asymmetric"));
  BilliardTable ta(as.specs, 512);
  LeadingTermReport ra = verify_leading_term(ta, {1, 2}, 3, 16);
  double dev_even = 0, dev_odd = 0;
  for (std::size_t i = 0; i < ra.n.size(); ++i) {
    if (ra.n[i] < 10) continue;
    double d = abs(ra.ratio[i] - 1.0).to_double();
    (ra.n[i] % 2 ? dev_odd : dev_even) = std::max(ra.n[i] % 2 ? dev_odd : dev_even, d);
  }
  bool asym_ok = dev_even < 1e-3 && dev_odd < 1e-3;
  std::string d = "equilateral: lambda rel err " + fmt(lam_err) + ", max |ratio-1| (n>=10) " + fmt(dev) +
                  "; asymmetric R0=" + fmt(ra.R0.to_double(), 6) + " R1=" + fmt(ra.R1.to_double(), 6) +
                  ": even " + fmt(dev_even) + ", odd " + fmt(dev_odd) + " (observed odd/even constant " +
                  fmt(ra.parity_ratio_observed.to_double(), 10) + ", predicted " +
                  fmt(ra.parity_ratio_predicted.to_double(), 10) + ")";
  return {sym_ok && asym_ok, d};
}

Outcome criterion3() {
  if (!g_equilateral_run) {
    TableFile eq = load_table_file(table_path("equilateral"));
    BilliardTable t(eq.specs, 512);
    g_equilateral_run = verify_leading_term(t, {1, 2}, 3, 16);
  }
  const LeadingTermReport& r = *g_equilateral_run;
  return {r.remainder_slope <= r.remainder_bound,
          "slope " + fmt(r.remainder_slope, 4) + " vs bound " + fmt(r.remainder_bound, 4) + " over n in [8,16]"};
}

// ---------------------------------------------------------------- 4

Outcome criterion4() {
  bool all = true;
  std::ostringstream os;
  for (const char* name : {"equilateral", "asymmetric", "disc_ellipse", "two_ellipses", "fourier_pair"}) {
    FamilySpec f;
    f.sigma = {1, 2};
    f.tau1 = 3;
    f.n_min = 0;
    f.n_max = 16;
    Filled fl = fill(name, {f});
    // Forward truth, independent of the store.
    BilliardTable t(fl.tf.specs, fl.bits);
    SolverOptions opt;
    opt.precision_bits = fl.bits;
    PeriodicOrbit<Real> so = solve_periodic<Real>(t, f.sigma, opt);
    mp::PrecisionScope scope(fl.bits);
    Real R1 = 1.0 / so.jets[0].K0, R0 = 1.0 / so.jets[1].K0;
    bool ok = false;
    std::string why;
    try {
      PeriodTwoReport r = invert_period_two(series_from_store(fl.store, f));
      double el = rel(r.est.lambda, so.mono.lambda);
      double e0 = HUGE_VAL, e1 = HUGE_VAL;
      for (const auto& c : r.radii.candidates) {
        double a = rel(c.R0, R0), b = rel(c.R1, R1);
        if (std::max(a, b) < std::max(e0, e1)) {
          e0 = a;
          e1 = b;
        }
      }
      bool assign = r.obstacle_R0 == f.sigma[1] && r.obstacle_R1 == f.sigma[0];
      ok = el < 1e-8 && e0 < 1e-5 && e1 < 1e-5 && r.radii.unique() && assign;
      why = "lambda " + fmt(el) + ", R0 " + fmt(e0) + ", R1 " + fmt(e1) + (r.radii.symmetric_branch ? " (sym)" : "") +
            " rho=" + fmt(r.rho.rho.to_double(), 6);
    } catch (const Error& e) {
      why = e.what();
    }
    all = all && ok;
    os << name << (ok ? " ok" : " FAIL") << " [" << why << "]; ";
  }
  return {all, os.str()};
}

// ---------------------------------------------------------------- 5

Outcome criterion5() {
  TableFile tf = load_table_file(table_path("equilateral"));
  bool le_ok = true, split = false;
  std::ostringstream os;
  for (const Word& sigma : {Word{1, 2, 3}, Word{1, 2, 1, 3}, Word{1, 2, 3, 2}}) {
    FamilySpec f;
    f.kind = FamilyKind::hn_prime;
    f.sigma = sigma;
    f.n_min = 1;
    f.n_max = 10;
    bool found = false;
    for (int a = 1; a <= 3 && !found; ++a)
      for (int b = 1; b <= 3 && !found; ++b) {
        f.tau_minus = a;
        f.tau_plus = b;
        try {
          validate_family(f, 3);
          found = true;
        } catch (const Error&) {
        }
      }
    if (!found) {
      le_ok = false;
      os << format_word(sigma) << ": no admissible tau; ";
      continue;
    }
    Filled fl = fill("equilateral", {f});
    BilliardTable t(tf.specs, fl.bits);
    SolverOptions opt;
    opt.precision_bits = fl.bits;
    PeriodicOrbit<Real> so = solve_periodic<Real>(t, sigma, opt);
    mp::PrecisionScope scope(fl.bits);
    try {
      LyapunovReport r = lyapunov_from_mls(series_from_store(fl.store, f));
      double e = rel(r.le, so.mono.le);
      le_ok = le_ok && e < 1e-6;
      Real gap = abs(r.C_even - r.C_odd), spread = r.C_even_err + r.C_odd_err;
      bool resolved = gap > spread;
      if (sigma.size() > 2 && !is_palindromic(sigma) && resolved) split = true;
      os << format_word(sigma) << " tau(" << f.tau_minus << "," << f.tau_plus << "): LE rel err " << fmt(e)
         << ", C_even " << fmt(r.C_even.to_double(), 6) << ", C_odd " << fmt(r.C_odd.to_double(), 6) << ", gap/spread "
         << fmt((gap / spread).to_double()) << "; ";
    } catch (const Error& e) {
      le_ok = false;
      os << format_word(sigma) << ": " << e.what() << "; ";
    }
  }
  return {le_ok && split, os.str()};
}

// ---------------------------------------------------------------- 6

Outcome criterion6() {
  bool all = true;
  std::ostringstream os;
  for (const char* name : {"scalene", "four_disc"}) {
    TableFile tf = load_table_file(table_path(name));
    int m = static_cast<int>(tf.specs.size());
    std::vector<FamilySpec> fams;
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j) fams.push_back(pair_family(i, j, m, 0, 14, 64));
    Filled fl = fill(name, fams);
    try {
      DiscReconstruction r = reconstruct_disc_table(pair_data_from_store(fl.store, m, 0, 14), m);
      std::vector<Vec2<double>> got, want;
      double rerr = 0;
      for (int k = 0; k < m; ++k) {
        got.emplace_back(r.centers[k].x.to_double(), r.centers[k].y.to_double());
        want.emplace_back(tf.specs[k].cx, tf.specs[k].cy);
        rerr = std::max(rerr, abs(r.radii[k] - tf.specs[k].radius).to_double());
      }
      double cerr = procrustes_error(got, want);
      bool ok = cerr < 1e-6 && rerr < 1e-6 && r.non_eclipse;
      all = all && ok;
      os << name << ": center err " << fmt(cerr) << ", radius err " << fmt(rerr) << "; ";
    } catch (const Error& e) {
      all = false;
      os << name << ": " << e.what() << "; ";
    }
  }
  return {all, os.str()};
}

// ---------------------------------------------------------------- 7

Outcome criterion7() {
  const long bits = 192;
  std::vector<BilliardTable> tables;
  for (const auto& n : kRegression) tables.emplace_back(load_table_file(table_path(n)).specs, bits);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  mp::PrecisionScope scope(bits);
  double min_slope = 1e9;
  int pairs = 0;
  while (pairs < 100) {
    const BilliardTable& t = tables[rng() % tables.size()];
    int i = static_cast<int>(rng() % t.size()), j = static_cast<int>(rng() % t.size());
    if (i == j) continue;
    Real s(U(rng) * t[i].total_length<double>()), s2(U(rng) * t[j].total_length<double>());
    ChordJet2<Real> base = jet2_chord(t, i, s, j, s2, s, s2);
    if (!(base.zeta_minus > 0.05 && base.zeta_plus > 0.05)) continue;  // not a bounce pair
    double u = U(rng) - 0.5, u2 = U(rng) - 0.5;
    std::vector<double> xs, ys;
    for (double eps : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
      Real sb = s + Real(eps * u), sb2 = s2 + Real(eps * u2);
      ChordJet2<Real> jet = jet2_chord(t, i, s, j, s2, sb, sb2);
      Real err = abs(chord(t, i, sb, j, sb2) - jet.predicted());
      xs.push_back(std::log(eps));
      ys.push_back(std::log(err.to_double()));
    }
    min_slope = std::min(min_slope, slope(xs, ys));
    ++pairs;
  }
  // First-order terms at solved period-two orbits, and gradients of longer orbits.
  double worst_first = 0, worst_grad = 0;
  SolverOptions opt;
  opt.precision_bits = bits;
  for (const auto& t : tables) {
    int m = t.size();
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        PeriodicOrbit<Real> o = solve_periodic<Real>(t, {i + 1, j + 1}, opt);
        Real tol = ldexp(o.length, -(bits - 10));
        ChordJet2<Real> jet = jet2_chord(t, i, o.points[0].s, j, o.points[1].s, o.points[0].s, o.points[1].s);
        worst_first = std::max({worst_first, (abs(jet.first_coef_minus) / tol).to_double(),
                                (abs(jet.first_coef_plus) / tol).to_double()});
      }
    PeriodicOrbit<Real> o = solve_periodic<Real>(t, {1, 2, 3, 2, 1, 3}, opt);
    worst_grad = std::max(worst_grad, (o.gradient_norm / ldexp(o.length, -(bits - 10))).to_double());
  }
  bool ok = min_slope >= 2.9 && worst_first <= 1 && worst_grad <= 1;
  return {ok, "min remainder slope " + fmt(min_slope, 4) + " over 100 pairs; first-order terms at solved orbits " +
                  fmt(worst_first) + " x tol; gradient " + fmt(worst_grad) + " x tol"};
}

// ---------------------------------------------------------------- 8

Outcome criterion8() {
  std::ostringstream os;
  bool ok = true;
  // Uniqueness and symmetries on a mixed table.
  BilliardTable mix(load_table_file(table_path("two_ellipses")).specs);
  double uniq = 0, rot = 0, rev = 0;
  for (const Word& w : {Word{1, 2, 1, 3, 2, 3}, Word{1, 2, 3, 1, 3, 2, 3}, Word{3, 1, 2, 1, 2}}) {
    PeriodicOrbit<double> ref = solve_periodic<double>(mix, w);
    std::size_t p = w.size();
    for (std::uint64_t seed = 1; seed <= 32; ++seed) {
      SolverOptions opt;
      opt.perturb = 0.4;
      opt.seed = seed;
      PeriodicOrbit<double> o = solve_periodic<double>(mix, w, opt);
      for (std::size_t k = 0; k < p; ++k)
        uniq = std::max(uniq, norm(mix[w[k] - 1].point_t(o.t[k]) - mix[w[k] - 1].point_t(ref.t[k])));
    }
    for (std::size_t r = 1; r < p; ++r) {
      PeriodicOrbit<double> o = solve_periodic<double>(mix, rotate(w, r));
      rot = std::max(rot, std::fabs(o.length - ref.length) / ref.length);
      for (std::size_t k = 0; k < p; ++k) rot = std::max(rot, std::fabs(o.points[k].phi - ref.points[(k + r) % p].phi));
    }
    PeriodicOrbit<double> b = solve_periodic<double>(mix, transpose(w));
    rev = std::max(rev, std::fabs(b.length - ref.length) / ref.length);
    for (std::size_t k = 0; k < p; ++k) rev = std::max(rev, std::fabs(b.points[k].phi + ref.points[p - 1 - k].phi));
  }
  ok = ok && uniq < 1e-9 && rot < 1e-9 && rev < 1e-9;
  os << "32-seed spread " << fmt(uniq) << ", rotation " << fmt(rot) << ", reversal " << fmt(rev);
  // Palindromic perpendicularity.
  BilliardTable eq(load_table_file(table_path("equilateral")).specs, 128);
  SolverOptions opt;
  opt.precision_bits = 128;
  double phi = 0;
  for (int n = 0; n <= 30; ++n) {
    Word h = build_hn(n);
    PeriodicOrbit<Real> o = solve_periodic<Real>(eq, h, opt);
    auto [a, b] = palindrome_centers(h);
    phi = std::max({phi, abs(o.points[a].phi).to_double(), abs(o.points[b].phi).to_double()});
  }
  ok = ok && phi < 1e-12;
  os << "; max |phi| at h_n centers (n<=30) " << fmt(phi);
  // Newton step cost against period.
  std::vector<double> lp, lt;
  for (int p : {25, 50, 100, 200}) {
    Word w;
    for (int k = 0; k < p; ++k) w.push_back(k % 3 + 1);
    if (w.front() == w.back()) w.back() = 2;
    PeriodicOrbit<double> o = solve_periodic<double>(mix, w);
    std::vector<double> s;
    for (const auto& pt : o.points) s.push_back(pt.s + 1e-3);
    double best = 1e300;
    for (int rep = 0; rep < 5; ++rep) {
      int reps = 40000 / p;
      auto t0 = Clock::now();
      double sink = 0;
      for (int r = 0; r < reps; ++r) {
        std::vector<double> g = length_gradient(mix, w, s);
        CyclicTridiag<double> H = length_hessian(mix, w, s);
        sink += solve_cyclic(H, g).x[0];
      }
      double dt = std::chrono::duration<double>(Clock::now() - t0).count() / reps;
      if (sink == 12345.678) std::cout << "";
      best = std::min(best, dt);
    }
    lp.push_back(std::log(p));
    lt.push_back(std::log(best));
  }
  double sl = slope(lp, lt);
  ok = ok && sl > 0.7 && sl < 1.3;
  os << "; Newton step time ~ p^" << fmt(sl, 3) << " for p in 25..200";
  return {ok, os.str()};
}

// ---------------------------------------------------------------- 9

Outcome criterion9() {
  const long bits = 256;
  mp::PrecisionScope scope(bits);
  double worst_sq = 0, worst_lin = 0;
  int count = 0;
  for (const auto& name : kRegression) {
    BilliardTable t(load_table_file(table_path(name)).specs, bits);
    SolverOptions opt;
    opt.precision_bits = bits;
    int m = t.size();
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j) {
        PeriodicOrbit<Real> o = solve_periodic<Real>(t, {i, j}, opt);
        // Point 0 is the sigma1 bounce; M is DF^2 there.
        const Mat2<Real>& M = o.mono.M;
        Real lam = o.mono.lambda * double(o.mono.eigen_sign);
        Vec2<Real> C1 = abs(M.b) > abs(M.c) ? Vec2<Real>(M.b, lam - M.a) : Vec2<Real>(lam - M.d, M.c);
        Vec2<Real> C2 = differential(o.jets[0]) * C1;
        Real ell = o.length / 2.0;
        Real a1 = ell * o.jets[0].K0 + 1.0, a0 = ell * o.jets[1].K0 + 1.0;
        Real r = C2.y / C1.y;
        worst_sq = std::max(worst_sq, abs(r * r - o.mono.lambda * a0 / a1).to_double());
        worst_lin = std::max(worst_lin, abs(r + (1.0 + o.mono.lambda) / (2.0 * a1)).to_double());
        ++count;
      }
  }
  return {worst_sq < 1e-12 && worst_lin < 1e-12, "squared-ratio relation " + fmt(worst_sq) + ", ratio relation " +
                                                      fmt(worst_lin) + " over " + std::to_string(count) +
                                                      " period-two orbits on " +
                                                      std::to_string(kRegression.size()) + " tables"};
}

// ---------------------------------------------------------------- 10

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int sh(const std::string& args, const fs::path& out) {
  std::string cmd = "env -u MLSB_STORE " + std::string(MLSB_EXE) + " " + args + " >" + out.string() + " 2>/dev/null";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

Outcome criterion10() {
  fs::path dir = fs::temp_directory_path() / ("mlsb_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  int differ = 0, failed = 0, compared = 0;
  auto same = [&](const fs::path& a, const fs::path& b) {
    ++compared;
    if (slurp(a) != slurp(b) || slurp(a).empty()) ++differ;
  };
  std::vector<std::pair<std::string, std::string>> jobs{
      {"equilateral", "spectrum --family tau-sigma --sigma 12 --tau 3 --n 0..12"},
      {"two_ellipses", "spectrum --family hn-prime --sigma 123 --tau 2,2 --n 1..4"},
      {"scalene", "spectrum --family pairs --n 0..8"}};
  int idx = 0;
  for (const auto& [table, args] : jobs) {
    std::vector<fs::path> outs, stores;
    for (const char* j : {"1", "1", "4"}) {
      fs::path store = dir / ("s" + std::to_string(idx) + ".jsonl"), out = dir / ("o" + std::to_string(idx) + ".csv");
      ++idx;
      if (sh("--table " + table_path(table) + " --store " + store.string() + " --jobs " + j + " --round 40 " + args,
             out) != 0)
        ++failed;
      outs.push_back(out);
      stores.push_back(store);
    }
    same(outs[0], outs[1]);
    same(outs[0], outs[2]);
    same(stores[0], stores[1]);
    same(stores[0], stores[2]);
  }
  std::vector<std::string> figs{
      "--table " + table_path("four_disc") + " plot table",
      "--table " + table_path("two_ellipses") + " plot orbit --word 1213",
      "--table " + table_path("equilateral") + " plot deficits --sigma 12 --tau 3 --n 0..12",
      "--table " + table_path("fourier_pair") + " orbit --word 3212 --svg " + (dir / "svgX.svg").string()};
  for (std::size_t k = 0; k < figs.size(); ++k) {
    std::vector<fs::path> outs;
    for (const char* j : {"1", "1", "3"}) {
      std::string a = figs[k];
      fs::path out = dir / ("f" + std::to_string(idx++) + ".svg");
      if (k == 3) {
        std::string tgt = out.string();
        a.replace(a.find((dir / "svgX.svg").string()), (dir / "svgX.svg").string().size(), tgt);
        if (sh("--jobs " + std::string(j) + " " + a, dir / "ignored.txt") != 0) ++failed;
      } else if (sh("--jobs " + std::string(j) + " " + a, out) != 0) {
        ++failed;
      }
      outs.push_back(out);
    }
    same(outs[0], outs[1]);
    same(outs[0], outs[2]);
  }
  fs::remove_all(dir);
  return {differ == 0 && failed == 0, std::to_string(compared) + " byte comparisons (spectrum CSV, stores, SVG) across runs and --jobs: " +
                                          std::to_string(differ) + " differ, " + std::to_string(failed) +
                                          " command failures"};
}

const char* kNames[] = {"",
                        "eigenvalue identity",
                        "leading term of the deficits",
                        "remainder exponent",
                        "blind period-two inversion",
                        "marked Lyapunov spectrum",
                        "disc-table reconstruction",
                        "generating-function 2-jet",
                        "solver invariants",
                        "eigenvector relations",
                        "determinism"};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  std::vector<std::function<Outcome()>> crit{nullptr,     criterion1, criterion2, criterion3, criterion4, criterion5,
                                             criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (int k = 1; k <= 10; ++k) {
    if (!pick.empty() && !pick.count(k)) continue;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = crit[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << k << " (" << kNames[k] << "): " << o.detail << " ["
              << fmt(secs, 3) << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
