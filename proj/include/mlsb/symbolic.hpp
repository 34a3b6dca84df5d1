#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "mlsb/errors.hpp"

namespace mlsb {

// Symbols are 1-based obstacle labels.
using Word = std::vector<int>;

inline void check_symbols(const Word& w, int m) {
  for (int s : w) {
    if (s < 1 || (m > 0 && s > m))
      throw Error(ErrorKind::symbol_out_of_range,
                  "symbol " + std::to_string(s) + " outside 1.." + (m > 0 ? std::to_string(m) : std::string("m")));
  }
}

// m <= 0 skips the range check against the alphabet size.
inline bool is_admissible(const Word& w, int m = 0) {
  check_symbols(w, m);
  if (w.size() < 2) return false;
  for (std::size_t j = 0; j + 1 < w.size(); ++j)
    if (w[j] == w[j + 1]) return false;
  return w.front() != w.back();
}

inline Word transpose(const Word& w) { return Word(w.rbegin(), w.rend()); }

inline Word rotate(const Word& w, std::size_t k) {
  Word r(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) r[i] = w[(i + k) % w.size()];
  return r;
}

inline Word power(const Word& w, int n) {
  Word r;
  for (int i = 0; i < n; ++i) r.insert(r.end(), w.begin(), w.end());
  return r;
}

inline Word concat(const Word& a, const Word& b) {
  Word r(a);
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

// A rotation of the form (c1 x1 .. x_{q-1} c2 x_{q-1} .. x1): centers at positions 0 and q.
inline bool is_palindromic(const Word& w) {
  std::size_t p = w.size();
  if (p % 2 != 0 || p < 2) return false;
  std::size_t q = p / 2;
  for (std::size_t r = 0; r < p; ++r) {
    bool ok = true;
    for (std::size_t k = 1; k < q && ok; ++k) ok = w[(r + k) % p] == w[(r + p - k) % p];
    if (ok) return true;
  }
  return false;
}

// Positions of the two palindrome centers in the word as given (first rotation found).
inline std::pair<std::size_t, std::size_t> palindrome_centers(const Word& w) {
  std::size_t p = w.size(), q = p / 2;
  for (std::size_t r = 0; r < p; ++r) {
    bool ok = true;
    for (std::size_t k = 1; k < q && ok; ++k) ok = w[(r + k) % p] == w[(r + p - k) % p];
    if (ok) return {r, (r + q) % p};
  }
  throw Error(ErrorKind::inadmissible_word, "word is not palindromic");
}

inline Word canonicalize(const Word& w) {
  Word best = w;
  Word t = transpose(w);
  for (std::size_t k = 0; k < w.size(); ++k) {
    best = std::min(best, rotate(w, k));
    best = std::min(best, rotate(t, k));
  }
  return best;
}

// (3, 2, (1, 2)^n): period-two family on the first three symbols.
inline Word build_hn(int n) {
  if (n < 0) throw Error(ErrorKind::inadmissible_word, "n must be >= 0");
  return concat({3, 2}, power({1, 2}, n));
}

// (tau1, sigma0, (sigma1 sigma0)^n) for sigma = (sigma1, sigma0).
inline Word build_tau_sigma_n(const Word& sigma, int tau1, int n) {
  if (sigma.size() != 2 || sigma[0] == sigma[1])
    throw Error(ErrorKind::inadmissible_word, "period-two family needs sigma of two distinct symbols");
  if (tau1 == sigma[0] || tau1 == sigma[1])
    throw Error(ErrorKind::inadmissible_tau, "tau1 must differ from both symbols of sigma");
  if (n < 0) throw Error(ErrorKind::inadmissible_word, "n must be >= 0");
  return concat({tau1, sigma[1]}, power(sigma, n));
}

// Longest cyclic stretch of w that is p-periodic, in symbols (capped at |w|).
inline std::size_t longest_periodic_run(const Word& w, std::size_t p) {
  std::size_t N = w.size(), best = 0, run = 0;
  if (p == 0 || N <= p) return N;
  for (std::size_t i = 0; i < 2 * N; ++i) {
    run = w[i % N] == w[(i + p) % N] ? run + 1 : 0;
    best = std::max(best, run);
  }
  return std::min(N, best + p);
}

namespace detail {

inline Word hn_general_raw(const Word& sigma, int tau_minus, int tau_plus, int n) {
  Word w{tau_plus};
  w = concat(w, power(sigma, n));
  w.push_back(tau_minus);
  return concat(w, power(transpose(sigma), n));
}

}  // namespace detail

// tau+ sigma^n tau- transpose(sigma)^n, with tau = (tau-, tau+).
// A tau that continues the sigma orbit merges the two sigma blocks into one (deficits then decay like
// lambda^(2n)); such tau are rejected by probing n = 3.
inline Word build_hn_general(const Word& sigma, int tau_minus, int tau_plus, int n) {
  if (!is_admissible(sigma)) throw Error(ErrorKind::inadmissible_word, "sigma is not admissible");
  if (n < 0) throw Error(ErrorKind::inadmissible_word, "n must be >= 0");
  if (tau_plus == sigma.front() || tau_minus == sigma.back())
    throw Error(ErrorKind::inadmissible_tau, "need tau+ != sigma_1 and tau- != sigma_p");
  std::size_t p = sigma.size();
  if (longest_periodic_run(detail::hn_general_raw(sigma, tau_minus, tau_plus, 3), p) >= 5 * p)
    throw Error(ErrorKind::inadmissible_tau, "tau continues the sigma orbit; the two sigma blocks merge");
  Word w = detail::hn_general_raw(sigma, tau_minus, tau_plus, n);
  if (!is_admissible(w)) throw Error(ErrorKind::inadmissible_tau, "resulting word is not admissible");
  return w;
}

inline std::string format_word(const Word& w) {
  bool wide = std::any_of(w.begin(), w.end(), [](int s) { return s > 9; });
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (wide && i > 0) out += ",";
    out += std::to_string(w[i]);
  }
  return out;
}

inline Word parse_word(const std::string& s) {
  Word w;
  if (s.find(',') != std::string::npos) {
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t e = s.find(',', pos);
      if (e == std::string::npos) e = s.size();
      std::string tok = s.substr(pos, e - pos);
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw Error(ErrorKind::inadmissible_word, "bad word \"" + s + "\"");
      w.push_back(std::stoi(tok));
      pos = e + 1;
    }
  } else {
    if (s.empty()) throw Error(ErrorKind::inadmissible_word, "empty word");
    for (char c : s) {
      if (c < '0' || c > '9') throw Error(ErrorKind::inadmissible_word, "bad word \"" + s + "\"");
      w.push_back(c - '0');
    }
  }
  return w;
}

// All admissible words of length p over 1..m (small p only; used by tests).
inline std::vector<Word> enumerate_words(int m, int p) {
  std::vector<Word> out;
  Word w(static_cast<std::size_t>(p), 1);
  for (;;) {
    if (is_admissible(w)) out.push_back(w);
    int i = p - 1;
    while (i >= 0 && w[static_cast<std::size_t>(i)] == m) w[static_cast<std::size_t>(i--)] = 1;
    if (i < 0) break;
    ++w[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace mlsb
