// mlsb: command-line front end for tables, orbits, spectra and inversion.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlsb/mlsb.hpp"

using namespace mlsb;

namespace {

struct Global {
  std::string table;
  std::string store;
  std::string out;
  long precision = 64;
  int jobs = 1;
  int round = 0;
};

struct FamilyArgs {
  std::string family = "tau-sigma";
  std::string sigma;
  std::string tau;
  std::string range = "0..8";
  std::vector<std::string> words;
  int m = 0;
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::io:
    case ErrorKind::fingerprint_mismatch:
    case ErrorKind::store_locked:
      return 1;
    case ErrorKind::table_invalid:
    case ErrorKind::eclipse_violation:
      return 2;
    case ErrorKind::no_intersection:
    case ErrorKind::occlusion:
    case ErrorKind::grazing_degenerate:
    case ErrorKind::non_hyperbolic:
    case ErrorKind::no_convergence:
    case ErrorKind::itinerary_mismatch:
      return 3;
    case ErrorKind::symbol_out_of_range:
    case ErrorKind::inadmissible_word:
    case ErrorKind::inadmissible_tau:
      return 4;
    case ErrorKind::insufficient_data:
    case ErrorKind::non_geometric:
    case ErrorKind::no_positive_root:
    case ErrorKind::branch_ambiguity:
    case ErrorKind::inconsistent_system:
      return 5;
    case ErrorKind::insufficient_precision:
    case ErrorKind::precision_unavailable:
      return 6;
  }
  return 1;
}

std::pair<int, int> parse_range(const std::string& s) {
  auto pos = s.find("..");
  try {
    if (pos == std::string::npos) {
      int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorKind::inadmissible_word, "bad range \"" + s + "\" (expected a..b)");
  }
}

std::string store_path(const Global& g) {
  if (!g.store.empty()) return g.store;
  if (const char* e = std::getenv("MLSB_STORE")) return e;
  return {};
}

TableFile need_table(const Global& g) {
  if (g.table.empty()) throw Error(ErrorKind::io, "--table is required");
  return load_table_file(g.table);
}

void emit(const Global& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot write " + g.out);
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot write " + path);
  f << text;
}

FamilySpec family_from(const FamilyArgs& a, long base_bits) {
  FamilySpec f;
  f.sigma = parse_word(a.sigma);
  auto [lo, hi] = parse_range(a.range);
  f.n_min = lo;
  f.n_max = hi;
  f.base_bits = base_bits;
  if (a.family == "tau-sigma") {
    f.kind = FamilyKind::tau_sigma_n;
    Word t = parse_word(a.tau);
    if (t.size() != 1) throw Error(ErrorKind::inadmissible_tau, "tau-sigma family takes one tau symbol");
    f.tau1 = t[0];
  } else if (a.family == "hn-prime") {
    f.kind = FamilyKind::hn_prime;
    Word t = parse_word(a.tau);
    if (t.size() != 2) throw Error(ErrorKind::inadmissible_tau, "hn-prime family takes tau as \"a,b\"");
    f.tau_minus = t[0];
    f.tau_plus = t[1];
  } else {
    throw Error(ErrorKind::inadmissible_word, "unknown family \"" + a.family + "\"");
  }
  return f;
}

SpectrumStore open_store_rw(const Global& g, const std::string& fp) {
  std::string p = store_path(g);
  return p.empty() ? SpectrumStore::in_memory(fp) : SpectrumStore::open_writable(p, fp);
}

SpectrumStore open_store_ro(const Global& g) {
  std::string p = store_path(g);
  if (p.empty()) throw Error(ErrorKind::io, "--store (or MLSB_STORE) is required");
  std::optional<std::string> fp;
  if (!g.table.empty()) fp = load_table_file(g.table).sha256;
  return SpectrumStore::open_readonly(p, fp);
}

// Table with arclength data deep enough for the family's precision ladder.
BilliardTable table_for_family(const TableFile& tf, const FamilySpec& f) {
  BilliardTable coarse(tf.specs, 64);
  validate_family(f, coarse.size());
  long top = family_max_bits(coarse, f);
  return BilliardTable(tf.specs, std::max<long>(top, f.base_bits));
}

int cmd_table_check(const Global& g) {
  TableFile tf = need_table(g);
  BilliardTable t(tf.specs, 64);
  const NonEclipseReport& r = t.certificate();
  std::ostringstream os;
  os << "table " << g.table << "\n";
  os << "sha256 " << tf.sha256 << "\n";
  os << "obstacles " << t.size() << "\n";
  os << "min_pair_gap " << to_decimal(r.min_pair_gap) << "\n";
  os << "min_clearance " << to_decimal(r.min_clearance) << " (obstacle " << r.arg_k + 1 << " vs hull of "
     << r.arg_i + 1 << "," << r.arg_j + 1 << ")\n";
  os << "non_eclipse ok\n";
  emit(g, os.str());
  return 0;
}

int cmd_orbit(const Global& g, const std::string& word, const std::string& svg_path) {
  TableFile tf = need_table(g);
  Word w = parse_word(word);
  BilliardTable t(tf.specs, g.precision);
  if (!is_admissible(w, t.size())) throw Error(ErrorKind::inadmissible_word, format_word(w));
  SolverOptions opt;
  opt.precision_bits = g.precision;
  PeriodicOrbit<Real> o = solve_periodic<Real>(t, w, opt);
  mp::PrecisionScope scope(g.precision);
  emit(g, orbit_json(t, o, g.round).dump(2) + "\n");
  if (!svg_path.empty()) {
    std::vector<Vec2<double>> poly;
    for (std::size_t k = 0; k < o.t.size(); ++k) poly.push_back(t[o.points[k].obstacle].point_t(o.t[k].to_double()));
    write_file(svg_path, svg::table_figure(t, {poly}));
  }
  return 0;
}

std::optional<LinftyEstimate> try_estimate(const DeficitSeries& s) {
  try {
    return estimate_linfty_lambda(s);
  } catch (const Error&) {
    return std::nullopt;
  }
}

int cmd_spectrum(const Global& g, const FamilyArgs& a) {
  TableFile tf = need_table(g);
  int status = 0;
  std::ostringstream os;
  if (a.family == "words") {
    if (a.words.empty()) throw Error(ErrorKind::inadmissible_word, "--word is required with --family words");
    BilliardTable t(tf.specs, g.precision);
    SpectrumStore store = open_store_rw(g, tf.sha256);
    os << "word,length,le\n";
    for (const auto& ws : a.words) {
      Word w = parse_word(ws);
      SpectrumValue v = mls_entry(store, t, w, g.precision);
      os << format_word(w) << "," << real_str(v.length, g.round) << "," << real_str(v.le, g.round) << "\n";
    }
    emit(g, os.str());
    return 0;
  }
  if (a.family == "pairs") {
    BilliardTable coarse(tf.specs, 64);
    int m = coarse.size();
    auto [lo, hi] = parse_range(a.range);
    std::vector<FamilySpec> fams;
    long top = g.precision;
    for (int i = 1; i <= m; ++i)
      for (int j = i + 1; j <= m; ++j) {
        fams.push_back(pair_family(i, j, m, lo, hi, g.precision));
        top = std::max(top, family_max_bits(coarse, fams.back()));
      }
    BilliardTable t(tf.specs, top);
    SpectrumStore store = open_store_rw(g, tf.sha256);
    os << "pair,n,word,length\n";
    for (const auto& f : fams) {
      FamilyBatch b = batch_family(store, t, f, g.jobs);
      for (const auto& r : b.rows) {
        if (!r.error.empty()) {
          std::cerr << "n=" << r.n << ": " << r.error << "\n";
          status = 3;
          continue;
        }
        os << format_word(f.sigma) << "," << r.n << "," << format_word(r.word) << "," << real_str(r.length, g.round)
           << "\n";
      }
    }
    emit(g, os.str());
    return status;
  }
  FamilySpec f = family_from(a, g.precision);
  BilliardTable t = table_for_family(tf, f);
  SpectrumStore store = open_store_rw(g, tf.sha256);
  FamilyBatch b = batch_family(store, t, f, g.jobs);
  DeficitSeries s = series_from_batch(f, b);
  std::optional<LinftyEstimate> est = try_estimate(s);
  if (!est) std::cerr << "note: too few terms to estimate the limit; deficit column left empty\n";
  os << "n,word,length,deficit\n";
  std::size_t k = 0;
  for (const auto& r : b.rows) {
    if (!r.error.empty()) {
      std::cerr << "n=" << r.n << ": " << r.error << "\n";
      status = 3;
      continue;
    }
    std::string def;
    if (est) {
      mp::PrecisionScope scope(s.bits[k]);
      def = real_str(s.a[k] - Real(est->linf, s.bits[k]), g.round);
    }
    ++k;
    os << r.n << "," << format_word(r.word) << "," << real_str(r.length, g.round) << "," << def << "\n";
  }
  emit(g, os.str());
  return status;
}

int cmd_invert(const Global& g, const std::string& mode, FamilyArgs a) {
  SpectrumStore store = open_store_ro(g);
  if (mode == "period2") {
    a.family = "tau-sigma";
    FamilySpec f = family_from(a, 64);
    DeficitSeries s = series_from_store(store, f);
    mp::PrecisionScope scope(s.max_bits());
    emit(g, period_two_json(invert_period_two(s), g.round).dump(2) + "\n");
    return 0;
  }
  if (mode == "lyapunov") {
    if (a.family == "tau-sigma" && parse_word(a.tau).size() == 2) a.family = "hn-prime";
    FamilySpec f = family_from(a, 64);
    DeficitSeries s = series_from_store(store, f);
    mp::PrecisionScope scope(s.max_bits());
    emit(g, lyapunov_json(lyapunov_from_mls(s), g.round).dump(2) + "\n");
    return 0;
  }
  if (mode == "discs") {
    int m = a.m;
    if (m <= 0 && !g.table.empty()) m = static_cast<int>(load_table_file(g.table).specs.size());
    if (m < 3) throw Error(ErrorKind::insufficient_data, "--m (number of discs, >= 3) is required");
    auto [lo, hi] = parse_range(a.range);
    std::vector<PairData> pairs = pair_data_from_store(store, m, lo, hi);
    DiscReconstruction r = reconstruct_disc_table(pairs, m);
    long bits = 64;
    for (const auto& p : pairs) bits = std::max(bits, p.L.bits());
    mp::PrecisionScope scope(bits);
    emit(g, discs_json(r, pairs, g.round).dump(2) + "\n");
    return 0;
  }
  throw Error(ErrorKind::inadmissible_word, "unknown invert mode \"" + mode + "\"");
}

int cmd_plot(const Global& g, const std::string& what, const std::string& word, const FamilyArgs& a) {
  if (what == "table" || what == "orbit") {
    TableFile tf = need_table(g);
    BilliardTable t(tf.specs, g.precision);
    std::vector<std::vector<Vec2<double>>> polys;
    if (what == "orbit") {
      if (word.empty()) throw Error(ErrorKind::io, "plot orbit needs --word");
      SolverOptions opt;
      opt.precision_bits = g.precision;
      PeriodicOrbit<Real> o = solve_periodic<Real>(t, parse_word(word), opt);
      std::vector<Vec2<double>> poly;
      for (std::size_t k = 0; k < o.t.size(); ++k) poly.push_back(t[o.points[k].obstacle].point_t(o.t[k].to_double()));
      polys.push_back(poly);
    }
    emit(g, svg::table_figure(t, polys));
    return 0;
  }
  if (what == "deficits") {
    FamilySpec f = family_from(a, g.precision);
    DeficitSeries s;
    std::string p = store_path(g);
    bool from_store = false;
    if (!p.empty() && std::ifstream(p).good()) {
      SpectrumStore st = open_store_ro(g);
      try {
        s = series_from_store(st, f);
        from_store = static_cast<int>(s.n.size()) == f.n_max - f.n_min + 1;
      } catch (const Error&) {
        from_store = false;
      }
    }
    if (!from_store) {
      if (g.table.empty()) throw Error(ErrorKind::io, "no spectrum data: give --table or a populated --store");
      TableFile tf = load_table_file(g.table);
      BilliardTable t = table_for_family(tf, f);
      SpectrumStore mem = SpectrumStore::in_memory(tf.sha256);
      s = series_from_batch(f, batch_family(mem, t, f, g.jobs));
    }
    LinftyEstimate e = estimate_linfty_lambda(s);
    std::vector<int> ns;
    std::vector<double> ly;
    for (std::size_t k = 0; k < s.n.size(); ++k) {
      mp::PrecisionScope scope(s.bits[k]);
      Real D = s.a[k] - Real(e.linf, s.bits[k]);
      if (D == 0) continue;
      ns.push_back(s.n[k]);
      ly.push_back(log10(abs(D)).to_double());
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, nn = static_cast<double>(ns.size());
    for (std::size_t k = 0; k < ns.size(); ++k) {
      sx += ns[k];
      sy += ly[k];
      sxx += double(ns[k]) * ns[k];
      sxy += ns[k] * ly[k];
    }
    double slope = nn > 1 ? (nn * sxy - sx * sy) / (nn * sxx - sx * sx) : 0.0;
    emit(g, svg::deficit_figure(ns, ly, slope));
    return 0;
  }
  throw Error(ErrorKind::io, "unknown plot \"" + what + "\" (table, orbit, deficits)");
}

void add_family_opts(CLI::App* c, FamilyArgs& a) {
  c->add_option("--family", a.family, "tau-sigma, hn-prime, pairs or words");
  c->add_option("--sigma", a.sigma, "base word sigma");
  c->add_option("--tau", a.tau, "tau1 (tau-sigma) or \"tau-,tau+\" (hn-prime)");
  c->add_option("--n", a.range, "n range a..b");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlsb: open dispersing billiards, marked length and Lyapunov spectra"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--table", g.table, "table JSON file");
  app.add_option("--precision", g.precision, "mantissa bits")->check(CLI::Range(53L, 4096L));
  app.add_option("--store", g.store, "spectrum store file (default: $MLSB_STORE)");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--round", g.round, "round reals to this many significant digits")->check(CLI::Range(0, 1000));

  auto* table = app.add_subcommand("table", "table utilities");
  table->require_subcommand(1);
  auto* check = table->add_subcommand("check", "validate a table and print its clearance report");

  std::string word, svg_path;
  auto* orbit = app.add_subcommand("orbit", "solve the periodic orbit of a word");
  orbit->add_option("--word", word, "symbol word, e.g. 3212 or 10,2,3")->required();
  orbit->add_option("--svg", svg_path, "write a figure of the orbit");

  FamilyArgs fa;
  auto* spectrum = app.add_subcommand("spectrum", "compute family lengths into the store");
  add_family_opts(spectrum, fa);
  spectrum->add_option("--word", fa.words, "explicit words (with --family words)");

  std::string mode;
  auto* invert = app.add_subcommand("invert", "inverse problems from the store");
  invert->add_option("mode", mode, "period2, lyapunov or discs")->required();
  add_family_opts(invert, fa);
  invert->add_option("--m", fa.m, "number of discs (discs mode)");

  std::string what;
  auto* plot = app.add_subcommand("plot", "SVG figures");
  plot->add_option("what", what, "table, orbit or deficits")->required();
  plot->add_option("--word", word, "orbit word");
  add_family_opts(plot, fa);

  for (auto* c : {table, check, orbit, spectrum, invert, plot}) c->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*check) return cmd_table_check(g);
    if (*orbit) return cmd_orbit(g, word, svg_path);
    if (*spectrum) return cmd_spectrum(g, fa);
    if (*invert) return cmd_invert(g, mode, fa);
    if (*plot) return cmd_plot(g, what, word, fa);
  } catch (const Error& e) {
    std::cerr << "mlsb: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "mlsb: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
