#pragma once

#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "mlsb/errors.hpp"
#include "mlsb/solver.hpp"
#include "mlsb/symbolic.hpp"
#include "mlsb/table_io.hpp"

namespace mlsb {

struct StoreEntry {
  std::string word;  // canonical, formatted
  std::string length;
  long precision_bits = 0;
  std::string le;
  std::string residual;
};

// JSON-lines file: one header with the table fingerprint, then append-only records.
// An empty path gives an in-memory store.
class SpectrumStore {
 public:
  SpectrumStore() = default;
  SpectrumStore(const SpectrumStore&) = delete;
  SpectrumStore& operator=(const SpectrumStore&) = delete;
  SpectrumStore(SpectrumStore&& o) noexcept { *this = std::move(o); }
  SpectrumStore& operator=(SpectrumStore&& o) noexcept {
    if (this != &o) {
      close();
      path_ = std::move(o.path_);
      fingerprint_ = std::move(o.fingerprint_);
      entries_ = std::move(o.entries_);
      fp_ = o.fp_;
      o.fp_ = nullptr;
    }
    return *this;
  }
  ~SpectrumStore() { close(); }

  static SpectrumStore in_memory(const std::string& fingerprint) {
    SpectrumStore s;
    s.fingerprint_ = fingerprint;
    return s;
  }

  // Opens for reading and appending; creates the file when absent. Holds an exclusive lock.
  static SpectrumStore open_writable(const std::string& path, const std::string& fingerprint) {
    SpectrumStore s;
    s.path_ = path;
    s.fingerprint_ = fingerprint;
    bool exists = std::ifstream(path).good();
    if (exists) s.load(path, &fingerprint);
    s.fp_ = std::fopen(path.c_str(), "a");
    if (!s.fp_) throw Error(ErrorKind::io, "cannot open store " + path + " for writing");
    if (flock(fileno(s.fp_), LOCK_EX | LOCK_NB) != 0) {
      std::fclose(s.fp_);
      s.fp_ = nullptr;
      throw Error(ErrorKind::store_locked, "store " + path + " is locked by another process");
    }
    if (!exists) {
      nlohmann::ordered_json h;
      h["table_sha256"] = fingerprint;
      h["version"] = 1;
      std::string line = h.dump() + "\n";
      std::fwrite(line.data(), 1, line.size(), s.fp_);
      std::fflush(s.fp_);
    }
    return s;
  }

  // Read-only view. With an expected fingerprint, a mismatch is an error.
  static SpectrumStore open_readonly(const std::string& path, const std::optional<std::string>& fingerprint) {
    SpectrumStore s;
    s.path_ = path;
    s.load(path, fingerprint ? &*fingerprint : nullptr);
    return s;
  }

  const std::string& fingerprint() const { return fingerprint_; }
  const std::vector<StoreEntry>& entries() const { return entries_; }

  // Highest-precision entry for the canonical word with at least min_bits.
  std::optional<StoreEntry> lookup(const Word& w, long min_bits = 0) const {
    std::string key = format_word(canonicalize(w));
    std::lock_guard<std::mutex> lock(mu_);
    std::optional<StoreEntry> best;
    for (const auto& e : entries_) {
      if (e.word != key || e.precision_bits < min_bits) continue;
      if (!best || e.precision_bits > best->precision_bits) best = e;
    }
    return best;
  }

  void append(const StoreEntry& e) {
    std::lock_guard<std::mutex> lock(mu_);
    entries_.push_back(e);
    if (fp_) {
      std::string line = record_json(e) + "\n";
      std::fwrite(line.data(), 1, line.size(), fp_);
      std::fflush(fp_);
    }
  }

  static std::string record_json(const StoreEntry& e) {
    nlohmann::ordered_json j;
    j["word"] = e.word;
    j["length"] = e.length;
    j["precision_bits"] = e.precision_bits;
    j["le"] = e.le;
    j["residual"] = e.residual;
    return j.dump();
  }

 private:
  void load(const std::string& path, const std::string* expect) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot read store " + path);
    std::string line;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::io, path + ":" + std::to_string(lineno) + ": malformed record");
      }
      if (!header) {
        if (!j.contains("table_sha256")) throw Error(ErrorKind::io, path + ": missing header record");
        fingerprint_ = j["table_sha256"].get<std::string>();
        if (expect && *expect != fingerprint_)
          throw Error(ErrorKind::fingerprint_mismatch, "store " + path + " belongs to table " + fingerprint_);
        header = true;
        continue;
      }
      StoreEntry e;
      try {
        e.word = j.at("word").get<std::string>();
        e.length = j.at("length").get<std::string>();
        e.precision_bits = j.at("precision_bits").get<long>();
        e.le = j.value("le", std::string());
        e.residual = j.value("residual", std::string());
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorKind::io, path + ":" + std::to_string(lineno) + ": malformed record");
      }
      entries_.push_back(e);
    }
    if (!header) throw Error(ErrorKind::io, path + ": empty store");
  }

  void close() {
    if (fp_) {
      flock(fileno(fp_), LOCK_UN);
      std::fclose(fp_);
      fp_ = nullptr;
    }
  }

  std::string path_;
  std::string fingerprint_;
  std::vector<StoreEntry> entries_;
  std::FILE* fp_ = nullptr;
  mutable std::mutex mu_;
};

struct SpectrumValue {
  Real length;
  Real le;
  long precision_bits = 0;
  bool cached = false;
};

inline StoreEntry entry_from_orbit(const PeriodicOrbit<Real>& o) {
  StoreEntry e;
  e.word = format_word(canonicalize(o.word));
  e.length = o.length.to_decimal();
  e.precision_bits = o.precision_bits;
  e.le = o.mono.le.to_decimal();
  e.residual = o.gradient_norm.to_decimal();
  return e;
}

inline SpectrumValue value_from_entry(const StoreEntry& e) {
  SpectrumValue v{Real(std::string_view(e.length), e.precision_bits),
                  e.le.empty() ? Real(0.0, e.precision_bits) : Real(std::string_view(e.le), e.precision_bits),
                  e.precision_bits, true};
  return v;
}

// Length and Lyapunov exponent of the orbit marked by w; solved and persisted when not cached.
inline SpectrumValue mls_entry(SpectrumStore& store, const BilliardTable& table, const Word& w, long bits,
                               const SolverOptions& base = {}) {
  if (!is_admissible(w, table.size())) throw Error(ErrorKind::inadmissible_word, format_word(w));
  if (auto e = store.lookup(w, bits)) return value_from_entry(*e);
  SolverOptions opt = base;
  opt.precision_bits = bits;
  PeriodicOrbit<Real> o = solve_periodic<Real>(table, canonicalize(w), opt);
  StoreEntry e = entry_from_orbit(o);
  store.append(e);
  SpectrumValue v = value_from_entry(e);
  v.cached = false;
  return v;
}

inline Real mls(SpectrumStore& store, const BilliardTable& table, const Word& w, long bits = 64) {
  return mls_entry(store, table, w, bits).length;
}

inline Real mlyap(SpectrumStore& store, const BilliardTable& table, const Word& w, long bits = 64) {
  return mls_entry(store, table, w, bits).le;
}

enum class FamilyKind { tau_sigma_n, hn_prime };

struct FamilySpec {
  FamilyKind kind = FamilyKind::tau_sigma_n;
  Word sigma;
  int tau1 = 0;                   // tau_sigma_n: word (tau1, sigma0, (sigma1 sigma0)^n)
  int tau_minus = 0, tau_plus = 0;  // hn_prime: tau+ sigma^n tau- transpose(sigma)^n
  int n_min = 0, n_max = 0;
  long base_bits = 64;
  bool ladder = true;             // raise precision with n
};

inline Word family_word(const FamilySpec& f, int n) {
  if (f.kind == FamilyKind::tau_sigma_n) return build_tau_sigma_n(f.sigma, f.tau1, n);
  return build_hn_general(f.sigma, f.tau_minus, f.tau_plus, n);
}

// Multiplier of L(sigma) subtracted from the family length.
inline int family_multiplier(const FamilySpec& f, int n) {
  return f.kind == FamilyKind::tau_sigma_n ? n + 1 : 2 * n;
}

inline void validate_family(const FamilySpec& f, int m) {
  if (!is_admissible(f.sigma, m)) throw Error(ErrorKind::inadmissible_word, "sigma " + format_word(f.sigma));
  if (f.n_min < 0 || f.n_max < f.n_min) throw Error(ErrorKind::inadmissible_word, "bad n range");
  if (f.kind == FamilyKind::tau_sigma_n) {
    if (f.sigma.size() != 2) throw Error(ErrorKind::inadmissible_word, "tau-sigma-n family needs a period-two sigma");
    check_symbols({f.tau1}, m);
  } else {
    check_symbols({f.tau_minus, f.tau_plus}, m);
  }
  for (int n = f.n_min; n <= f.n_max; ++n) {
    Word w = family_word(f, n);
    if (!is_admissible(w, m)) throw Error(ErrorKind::inadmissible_tau, "family word " + format_word(w));
  }
}

// Mantissa bits keeping about 20 significant bits of a deficit of size lambda^n.
inline long ladder_bits(long base, int n, double lambda) {
  double need = 64.0 + std::ceil(n * std::log2(1.0 / lambda)) + 40.0;
  return std::max(base, static_cast<long>(need));
}

// Coarse |lambda| of sigma from a double-precision solve.
inline double coarse_lambda(const BilliardTable& table, const Word& sigma) {
  return solve_periodic<double>(table, sigma).mono.lambda;
}

inline long family_max_bits(const BilliardTable& table, const FamilySpec& f) {
  if (!f.ladder) return f.base_bits;
  return ladder_bits(f.base_bits, f.n_max, coarse_lambda(table, f.sigma));
}

struct FamilyRow {
  int n = 0;
  Word word;          // family form
  Word canonical;
  Real length;
  long precision_bits = 0;
  bool cached = false;
  std::string error;  // non-empty if the solve failed
};

struct FamilyBatch {
  Real sigma_length;
  long sigma_bits = 0;
  double coarse_lambda = 0;
  std::vector<FamilyRow> rows;
};

// Computes (or reads) all family lengths. Rows are solved on `jobs` threads and persisted in n order.
inline FamilyBatch batch_family(SpectrumStore& store, const BilliardTable& table, const FamilySpec& f, int jobs = 1) {
  validate_family(f, table.size());
  FamilyBatch out;
  out.coarse_lambda = coarse_lambda(table, f.sigma);
  long top = f.ladder ? ladder_bits(f.base_bits, f.n_max, out.coarse_lambda) : f.base_bits;
  SpectrumValue sv = mls_entry(store, table, f.sigma, top);
  out.sigma_length = sv.length;
  out.sigma_bits = sv.precision_bits;
  int count = f.n_max - f.n_min + 1;
  out.rows.resize(static_cast<std::size_t>(count));
  std::vector<std::optional<StoreEntry>> fresh(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    auto& r = out.rows[static_cast<std::size_t>(i)];
    r.n = f.n_min + i;
    r.word = family_word(f, r.n);
    r.canonical = canonicalize(r.word);
    r.precision_bits = f.ladder ? ladder_bits(f.base_bits, r.n, out.coarse_lambda) : f.base_bits;
  }
  auto work = [&](int i) {
    auto& r = out.rows[static_cast<std::size_t>(i)];
    if (auto e = store.lookup(r.canonical, r.precision_bits)) {
      r.cached = true;
      r.precision_bits = e->precision_bits;
      r.length = Real(std::string_view(e->length), e->precision_bits);
      return;
    }
    try {
      SolverOptions opt;
      opt.precision_bits = r.precision_bits;
      PeriodicOrbit<Real> o = solve_periodic<Real>(table, r.canonical, opt);
      fresh[static_cast<std::size_t>(i)] = entry_from_orbit(o);
      r.length = Real(o.length, o.precision_bits);
    } catch (const Error& e) {
      r.error = e.what();
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) work(i);
  } else {
    std::mutex mu;
    int next = 0;
    auto runner = [&]() {
      for (;;) {
        int i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= count) return;
          i = next++;
        }
        work(i);
      }
    };
    std::vector<std::thread> pool;
    for (int k = 0; k < std::min(jobs, count); ++k) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
  }
  for (int i = 0; i < count; ++i) {
    auto& slot = fresh[static_cast<std::size_t>(i)];
    if (!slot) continue;
    // A word can occur twice in a family (same canonical form); persist it once.
    if (store.lookup(parse_word(slot->word), slot->precision_bits)) continue;
    store.append(*slot);
  }
  return out;
}

// word,n,length,deficit with deficit = length - multiplier * L(sigma) - linf.
inline std::string export_csv(const FamilySpec& f, const FamilyBatch& b, const std::optional<Real>& linf) {
  std::ostringstream os;
  os << "word,n,length,deficit\n";
  for (const auto& r : b.rows) {
    if (!r.error.empty()) continue;
    mp::PrecisionScope scope(r.precision_bits);
    Real a = Real(r.length, r.precision_bits) - Real(double(family_multiplier(f, r.n)), r.precision_bits) *
                                                    Real(b.sigma_length, r.precision_bits);
    std::string def = linf ? (a - Real(*linf, r.precision_bits)).to_decimal() : std::string();
    os << format_word(r.word) << "," << r.n << "," << r.length.to_decimal() << "," << def << "\n";
  }
  return os.str();
}

}  // namespace mlsb
