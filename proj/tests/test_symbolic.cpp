#include <catch_amalgamated.hpp>

#include <set>

#include "mlsb/symbolic.hpp"

using namespace mlsb;

namespace {

// Brute force: some rotation equals its own reversal shifted by one place (mirror through two vertices).
bool palindromic_oracle(const Word& w) {
  std::size_t p = w.size();
  if (p % 2) return false;
  for (std::size_t r = 0; r < p; ++r) {
    Word a = rotate(w, r);
    Word b = transpose(a);
    Word c(p);
    for (std::size_t i = 0; i < p; ++i) c[i] = b[(i + p - 1) % p];
    if (a == c) return true;
  }
  return false;
}

Word canonical_oracle(const Word& w) {
  std::set<Word> all;
  for (std::size_t k = 0; k < w.size(); ++k) {
    all.insert(rotate(w, k));
    all.insert(rotate(transpose(w), k));
  }
  return *all.begin();
}

}  // namespace

TEST_CASE("admissibility") {
  CHECK(is_admissible({1, 2}));
  CHECK_FALSE(is_admissible({1, 2, 1}));
  CHECK_FALSE(is_admissible({1, 1}));
  CHECK_FALSE(is_admissible({1}));
  CHECK(is_admissible({1, 2, 3, 2}, 3));
  CHECK_THROWS_AS(is_admissible({1, 4}, 3), Error);
  try {
    is_admissible({0, 1});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::symbol_out_of_range);
  }
}

TEST_CASE("transpose") {
  CHECK(transpose({1, 2, 3}) == Word{3, 2, 1});
  CHECK(transpose({1, 2}) == Word{2, 1});
  CHECK(transpose(transpose({1, 3, 2, 3})) == Word{1, 3, 2, 3});
}

TEST_CASE("palindromic words") {
  CHECK(is_palindromic({3, 2, 1, 2}));
  CHECK(is_palindromic({1, 2}));
  // (1,2,1,3,2,3) rotates to (1,3,2,3,1,2), mirror-symmetric about its two 2's.
  CHECK(is_palindromic({1, 2, 1, 3, 2, 3}));
  CHECK(palindromic_oracle({1, 2, 1, 3, 2, 3}));
  CHECK_FALSE(is_palindromic({1, 2, 3, 1, 2, 3}));
  CHECK_FALSE(is_palindromic({1, 2, 3}));
  for (int p : {2, 4, 6}) {
    for (const Word& w : enumerate_words(3, p)) CHECK(is_palindromic(w) == palindromic_oracle(w));
  }
  auto [a, b] = palindrome_centers({3, 2, 1, 2});
  CHECK(a == 0);
  CHECK(b == 2);
}

TEST_CASE("shadowing families") {
  CHECK(build_hn(1) == Word{3, 2, 1, 2});
  CHECK(build_hn(0) == Word{3, 2});
  CHECK(build_hn_general({1, 2, 3}, 2, 2, 1) == Word{2, 1, 2, 3, 2, 3, 2, 1});
  CHECK(build_tau_sigma_n({1, 2}, 3, 2) == Word{3, 2, 1, 2, 1, 2});
  for (int n = 0; n <= 10; ++n) {
    Word h = build_hn(n);
    CHECK(h.size() == static_cast<std::size_t>(2 * n + 2));
    CHECK(is_admissible(h));
    CHECK(is_palindromic(h));
  }
  for (int n = 1; n <= 5; ++n) {
    Word g = build_hn_general({1, 2, 3}, 2, 2, n);
    CHECK(g.size() == static_cast<std::size_t>(6 * n + 2));
    CHECK(is_admissible(g));
  }
  // tau- = 1 continues (1,2,3,2) through its own perpendicular bounce: 2 (1232)^n 1 (2321)^n = 2 (1232)^(2n) 1.
  try {
    build_hn_general({1, 2, 3, 2}, 1, 2, 4);
    FAIL("degenerate tau must be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::inadmissible_tau);
  }
  CHECK(build_hn_general({1, 2, 3, 2}, 3, 2, 1) == Word{2, 1, 2, 3, 2, 3, 2, 3, 2, 1});
  CHECK(longest_periodic_run({1, 2, 1, 2, 3}, 2) == 4);
  CHECK(longest_periodic_run({1, 2, 1, 2}, 2) == 4);
  try {
    build_hn_general({1, 2, 3}, 3, 2, 1);
    FAIL("tau- equal to sigma_p must be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::inadmissible_tau);
  }
  try {
    build_tau_sigma_n({1, 2}, 1, 1);
    FAIL("tau1 in sigma must be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::inadmissible_tau);
  }
}

TEST_CASE("canonical form") {
  CHECK(canonicalize({2, 1}) == Word{1, 2});
  CHECK(canonicalize({3, 2, 1}) == Word{1, 2, 3});
  CHECK(canonicalize({2, 1, 2, 3}) == Word{1, 2, 3, 2});
  for (int p : {3, 4, 5}) {
    for (const Word& w : enumerate_words(4, p)) {
      Word c = canonicalize(w);
      CHECK(c == canonical_oracle(w));
      CHECK(canonicalize(c) == c);
      CHECK(canonicalize(transpose(w)) == c);
      CHECK(canonicalize(rotate(w, 1)) == c);
    }
  }
}

TEST_CASE("word text format") {
  CHECK(format_word({3, 2, 1, 2}) == "3212");
  CHECK(format_word({10, 2, 3}) == "10,2,3");
  CHECK(parse_word("3212") == Word{3, 2, 1, 2});
  CHECK(parse_word("10,2,3") == Word{10, 2, 3});
  CHECK_THROWS_AS(parse_word("1a"), Error);
  CHECK_THROWS_AS(parse_word(""), Error);
}
