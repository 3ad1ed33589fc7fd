#pragma once

#include <cstdlib>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "palrich/core.hpp"

namespace palrich {

// ---------------------------------------------------------------------------
// PalindromeIndex
// ---------------------------------------------------------------------------

/// Incremental index of the distinct palindromic factors of a word
/// (palindromic tree with two roots and suffix links). Appending one letter
/// creates at most one new node: the longest palindromic suffix of the new
/// prefix, which is new exactly when it is unioccurrent in that prefix.
class PalindromeIndex {
 public:
  PalindromeIndex() {
    nodes_.push_back(Node{-1, 0, {}});  // imaginary root
    nodes_.push_back(Node{0, 0, {}});   // empty-word root
    last_ = 1;
  }

  explicit PalindromeIndex(const Word& u) : PalindromeIndex() {
    for (int c : u.letters()) append(c);
  }

  void append(int letter) {
    text_.push_back(letter);
    const std::size_t pos = text_.size() - 1;
    int cur = extendable(last_, pos, letter);
    if (int to = child(cur, letter); to != -1) {
      last_ = to;
      new_pal_.push_back(false);
      return;
    }
    Node node;
    node.length = nodes_[cur].length + 2;
    if (node.length == 1) {
      node.suffix_link = 1;
    } else {
      node.suffix_link = child(extendable(nodes_[cur].suffix_link, pos, letter), letter);
    }
    nodes_[cur].edges.emplace_back(letter, static_cast<int>(nodes_.size()));
    last_ = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    new_pal_.push_back(true);
  }

  std::size_t text_length() const { return text_.size(); }

  /// Number of distinct palindromic factors of the indexed word, including
  /// the empty word. Always <= text_length() + 1.
  std::size_t distinct_palindromes() const { return nodes_.size() - 1; }

  /// Distinct palindromic factors of the prefix of length `len`, including
  /// the empty word.
  std::size_t distinct_at_prefix(std::size_t len) const {
    if (len > text_.size()) throw precondition_error("prefix length exceeds indexed word");
    std::size_t count = 1;
    for (std::size_t i = 0; i < len; ++i) count += new_pal_[i] ? 1 : 0;
    return count;
  }

  /// Bit per appended letter: whether that letter created a new palindrome.
  const std::vector<bool>& new_palindrome_flags() const { return new_pal_; }

 private:
  struct Node {
    int length;
    int suffix_link;
    std::vector<std::pair<int, int>> edges;  // letter -> node
  };

  int child(int v, int letter) const {
    for (auto [c, to] : nodes_[v].edges)
      if (c == letter) return to;
    return -1;
  }

  // Longest palindromic suffix of text_[0..pos] extendable by text_[pos].
  int extendable(int v, std::size_t pos, int letter) const {
    while (true) {
      const int l = nodes_[v].length;
      const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(pos) - 1 - l;
      if (i >= 0 && text_[static_cast<std::size_t>(i)] == letter) return v;
      v = nodes_[v].suffix_link;
    }
  }

  std::vector<Node> nodes_;
  std::vector<int> text_;
  std::vector<bool> new_pal_;
  int last_;
};

inline PalindromeIndex index_word(const Word& u) { return PalindromeIndex(u); }

// ---------------------------------------------------------------------------
// Richness
// ---------------------------------------------------------------------------

struct RichnessReport {
  std::size_t length = 0;
  std::size_t palindromes = 0;  // distinct, including the empty word
  std::size_t defect = 0;       // length + 1 - palindromes
  bool rich = false;
  /// Shortest prefix length whose longest palindromic suffix is not
  /// unioccurrent in it; absent iff the word is rich.
  std::optional<std::size_t> first_violation;
};

inline RichnessReport richness_report(const Word& u) {
  PalindromeIndex idx(u);
  RichnessReport rep;
  rep.length = u.size();
  rep.palindromes = idx.distinct_palindromes();
  rep.defect = rep.length + 1 - rep.palindromes;
  rep.rich = rep.defect == 0;
  const auto& flags = idx.new_palindrome_flags();
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (!flags[i]) {
      rep.first_violation = i + 1;
      break;
    }
  }
  return rep;
}

inline std::size_t defect(const Word& u) { return richness_report(u).defect; }

inline bool is_rich(const Word& u) { return richness_report(u).defect == 0; }

/// Prefix lengths whose longest palindromic suffix occurs earlier in that
/// prefix, ascending; empty iff `u` is rich.
inline std::vector<std::size_t> property_ju_violations(const Word& u) {
  PalindromeIndex idx(u);
  std::vector<std::size_t> out;
  const auto& flags = idx.new_palindrome_flags();
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (!flags[i]) out.push_back(i + 1);
  return out;
}

/// For a binary word: the shortest (then lexicographically least)
/// non-palindromic q such that 0q0, 1q1, 0~q1 and 1~q0 are all factors of u,
/// where ~q is the mirror of q. Such a q exists iff u is not rich.
inline std::optional<Word> non_richness_witness(const Word& u) {
  if (u.alphabet()->size() != 2)
    throw precondition_error("non-richness witness requires a binary alphabet");
  if (u.size() < 4) return std::nullopt;

  // Candidates must occur inside u (each pattern embeds q), so enumerate the
  // distinct factors of u grouped by length; membership checks go through one
  // factor set for the whole word.
  const auto& s = u.letters();
  std::set<std::vector<int>> factors;
  std::vector<std::set<std::vector<int>>> by_length(u.size() + 1);
  for (std::size_t len = 1; len <= u.size(); ++len)
    for (std::size_t i = 0; i + len <= u.size(); ++i) {
      std::vector<int> f(s.begin() + static_cast<std::ptrdiff_t>(i),
                         s.begin() + static_cast<std::ptrdiff_t>(i + len));
      by_length[len].insert(f);
      factors.insert(std::move(f));
    }

  auto has = [&factors](std::vector<int> w) { return factors.count(w) != 0; };
  auto wrap = [](int a, const std::vector<int>& q, int b) {
    std::vector<int> w;
    w.reserve(q.size() + 2);
    w.push_back(a);
    w.insert(w.end(), q.begin(), q.end());
    w.push_back(b);
    return w;
  };

  // Sets are ordered lexicographically; the outer loop runs over lengths, so
  // the first hit is the shortest then lexicographically least witness.
  for (std::size_t len = 1; len + 2 <= u.size(); ++len) {
    for (const auto& q : by_length[len]) {
      std::vector<int> qr(q.rbegin(), q.rend());
      if (qr == q) continue;  // palindromic q never witnesses
      if (has(wrap(0, q, 0)) && has(wrap(1, q, 1)) && has(wrap(0, qr, 1)) &&
          has(wrap(1, qr, 0)))
        return Word(u.alphabet(), q);
    }
  }
  return std::nullopt;
}

/// Decides richness of the periodic word (pq)^w for palindromes p, q by
/// testing its prefix of length |pq| + floor(||q|-|p|| / 3).
inline bool periodic_richness(const Word& p, const Word& q) {
  if (!p.is_palindrome() || !q.is_palindrome())
    throw precondition_error("periodic richness test requires palindromic p and q");
  p.require_compatible(q);
  const Word block = p + q;
  if (block.empty()) throw precondition_error("pq must be non-empty");
  const std::size_t diff = p.size() > q.size() ? p.size() - q.size() : q.size() - p.size();
  const std::size_t len = block.size() + diff / 3;
  std::vector<int> prefix;
  prefix.reserve(len);
  while (prefix.size() < len)
    for (int c : block.letters()) {
      if (prefix.size() == len) break;
      prefix.push_back(c);
    }
  return is_rich(Word(block.alphabet(), std::move(prefix)));
}

}  // namespace palrich
