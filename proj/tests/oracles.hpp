// Brute-force reference computations for property tests. Everything here is
// deliberately naive and independent of the library's algorithms: palindrome
// counts by substring enumeration, occurrence lists by letter-by-letter
// scanning, Property Ju by direct longest-palindromic-suffix checks.
#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "palrich/core.hpp"

namespace oracles {

inline bool vec_palindrome(const std::vector<int>& v) {
  for (std::size_t i = 0, j = v.size(); i + 1 <= j; ++i, --j)
    if (v[i] != v[j - 1]) return false;
  return true;
}

/// Distinct palindromic factors, including the empty word.
inline std::size_t palindrome_count(const palrich::Word& u) {
  std::set<std::vector<int>> pals;
  const auto& s = u.letters();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t len = 1; i + len <= s.size(); ++len) {
      std::vector<int> f(s.begin() + static_cast<std::ptrdiff_t>(i),
                         s.begin() + static_cast<std::ptrdiff_t>(i + len));
      if (vec_palindrome(f)) pals.insert(std::move(f));
    }
  return pals.size() + 1;
}

inline std::size_t defect(const palrich::Word& u) {
  return u.size() + 1 - palindrome_count(u);
}

inline bool is_rich(const palrich::Word& u) { return defect(u) == 0; }

inline std::vector<std::size_t> occurrence_scan(const palrich::Word& u, const palrich::Word& f) {
  std::vector<std::size_t> hits;
  if (f.size() > u.size()) return hits;
  for (std::size_t i = 0; i + f.size() <= u.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < f.size(); ++j)
      if (u[i + j] != f[j]) {
        match = false;
        break;
      }
    if (match) hits.push_back(i);
  }
  return hits;
}

/// Prefix lengths whose longest palindromic suffix occurred earlier.
inline std::vector<std::size_t> ju_violations(const palrich::Word& u) {
  std::vector<std::size_t> out;
  const auto& s = u.letters();
  for (std::size_t n = 1; n <= s.size(); ++n) {
    std::vector<int> prefix(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<int> lps;
    for (std::size_t start = 0; start < n; ++start) {
      std::vector<int> suf(prefix.begin() + static_cast<std::ptrdiff_t>(start), prefix.end());
      if (vec_palindrome(suf)) {
        lps = std::move(suf);
        break;  // longest first
      }
    }
    std::size_t occ = 0;
    for (std::size_t i = 0; i + lps.size() <= n; ++i)
      if (std::equal(lps.begin(), lps.end(), prefix.begin() + static_cast<std::ptrdiff_t>(i))) ++occ;
    if (occ > 1) out.push_back(n);
  }
  return out;
}

/// All words of length `len` over {0, ..., arity-1}, as letter vectors.
inline std::vector<std::vector<int>> all_words(int arity, std::size_t len) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(len, 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = len;
    while (i > 0 && cur[i - 1] == arity - 1) cur[--i] = 0;
    if (i == 0) break;
    ++cur[i - 1];
  }
  return out;
}

inline palrich::Word random_word(std::mt19937& rng, const palrich::AlphabetPtr& alpha,
                                 std::size_t len) {
  std::uniform_int_distribution<int> dist(0, alpha->size() - 1);
  std::vector<int> letters(len);
  for (auto& c : letters) c = dist(rng);
  return palrich::Word(alpha, std::move(letters));
}

/// The prefix of length n of block^w prefixed by pre.
inline palrich::Word periodic_prefix(const palrich::Word& pre, const palrich::Word& block,
                                     std::size_t n) {
  std::vector<int> out = pre.letters();
  while (out.size() < n)
    for (int c : block.letters()) {
      if (out.size() == n) break;
      out.push_back(c);
    }
  out.resize(n);
  return palrich::Word(block.alphabet(), std::move(out));
}

}  // namespace oracles
