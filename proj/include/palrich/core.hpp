#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace palrich {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (word literals, morphism specs, source specs).
struct parse_error : error {
  using error::error;
};

/// A documented precondition of an operation does not hold.
struct precondition_error : error {
  using error::error;
};

/// A generated prefix would exceed the configured length cap.
struct cap_exceeded_error : error {
  using error::error;
};

/// Default cap on generated prefixes, overridable per call.
inline constexpr std::size_t kDefaultPrefixCap = 1'000'000;

// ---------------------------------------------------------------------------
// Alphabet
// ---------------------------------------------------------------------------

/// An ordered list of distinct, non-empty symbol tokens. Letter ids are
/// 0..size()-1 in declaration order. Immutable once constructed.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].empty()) throw parse_error("alphabet symbol must be non-empty");
      if (!index_.emplace(symbols_[i], static_cast<int>(i)).second)
        throw parse_error("duplicate alphabet symbol: " + symbols_[i]);
    }
  }

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbol(int id) const { return symbols_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::string>& symbols() const { return symbols_; }

  std::optional<int> id_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, int, std::less<>> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> symbols) {
  return std::make_shared<const Alphabet>(std::move(symbols));
}

inline bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------------------
// Word
// ---------------------------------------------------------------------------

/// A finite word: a sequence of letter ids over a shared alphabet.
/// The empty word is a first-class value. Immutable.
class Word {
 public:
  Word() : alphabet_(std::make_shared<const Alphabet>()) {}

  explicit Word(AlphabetPtr alphabet, std::vector<int> letters = {})
      : alphabet_(std::move(alphabet)), letters_(std::move(letters)) {
    if (!alphabet_) throw precondition_error("word requires an alphabet");
    for (int c : letters_)
      if (c < 0 || c >= alphabet_->size())
        throw precondition_error("letter id out of alphabet range");
  }

  const AlphabetPtr& alphabet() const { return alphabet_; }
  const std::vector<int>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  int front() const { return letters_.front(); }
  int back() const { return letters_.back(); }

  Word mirror() const {
    std::vector<int> rev(letters_.rbegin(), letters_.rend());
    return Word(alphabet_, std::move(rev));
  }

  bool is_palindrome() const {
    return std::equal(letters_.begin(),
                      letters_.begin() + static_cast<std::ptrdiff_t>(letters_.size() / 2),
                      letters_.rbegin());
  }

  Word subword(std::size_t pos, std::size_t len) const {
    if (pos + len > letters_.size()) throw precondition_error("subword out of range");
    return Word(alphabet_, std::vector<int>(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                                            letters_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
  }

  Word prefix(std::size_t len) const { return subword(0, std::min(len, size())); }
  Word suffix(std::size_t len) const {
    len = std::min(len, size());
    return subword(size() - len, len);
  }

  Word operator+(const Word& rhs) const {
    require_compatible(rhs);
    std::vector<int> cat = letters_;
    cat.insert(cat.end(), rhs.letters_.begin(), rhs.letters_.end());
    return Word(alphabet_, std::move(cat));
  }

  bool starts_with(const Word& w) const {
    return w.size() <= size() && std::equal(w.letters_.begin(), w.letters_.end(), letters_.begin());
  }
  bool ends_with(const Word& w) const {
    return w.size() <= size() &&
           std::equal(w.letters_.rbegin(), w.letters_.rend(), letters_.rbegin());
  }

  bool operator==(const Word& rhs) const {
    return same_alphabet(alphabet_, rhs.alphabet_) && letters_ == rhs.letters_;
  }
  bool operator!=(const Word& rhs) const { return !(*this == rhs); }
  /// Lexicographic by letter id, then by length; alphabets assumed compatible.
  bool operator<(const Word& rhs) const { return letters_ < rhs.letters_; }

  void require_compatible(const Word& other) const {
    if (!same_alphabet(alphabet_, other.alphabet_))
      throw precondition_error("words are over different alphabets");
  }

  /// Renders the word; tokens joined by `sep`. Multi-character symbols
  /// require a non-empty separator to stay unambiguous.
  std::string str(const std::string& sep = "") const {
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (i > 0) out += sep;
      out += alphabet_->symbol(letters_[i]);
    }
    return out;
  }

 private:
  AlphabetPtr alphabet_;
  std::vector<int> letters_;
};

/// All start indices at which `f` occurs in `u`, ascending.
/// occurrences(u, epsilon) = 0..|u|.
inline std::vector<std::size_t> occurrences(const Word& u, const Word& f) {
  u.require_compatible(f);
  std::vector<std::size_t> hits;
  if (f.empty()) {
    hits.resize(u.size() + 1);
    for (std::size_t i = 0; i <= u.size(); ++i) hits[i] = i;
    return hits;
  }
  if (f.size() > u.size()) return hits;
  const auto& hay = u.letters();
  const auto& needle = f.letters();
  auto it = hay.begin();
  while (true) {
    it = std::search(it, hay.end(), needle.begin(), needle.end());
    if (it == hay.end()) break;
    hits.push_back(static_cast<std::size_t>(it - hay.begin()));
    ++it;
  }
  return hits;
}

inline bool contains_factor(const Word& u, const Word& f) {
  if (f.empty()) return true;
  const auto& hay = u.letters();
  const auto& needle = f.letters();
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

inline Word mirror(const Word& u) { return u.mirror(); }
inline bool is_palindrome(const Word& u) { return u.is_palindrome(); }

// ---------------------------------------------------------------------------
// Word literals
// ---------------------------------------------------------------------------

/// Splits a literal into symbol tokens: one character per token by default,
/// or on `sep` when given.
inline std::vector<std::string> tokenize(const std::string& text, const std::string& sep = "") {
  std::vector<std::string> tokens;
  if (sep.empty()) {
    for (char c : text) tokens.emplace_back(1, c);
    return tokens;
  }
  if (text.empty()) return tokens;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = text.find(sep, pos);
    std::string tok = text.substr(pos, next == std::string::npos ? next : next - pos);
    if (tok.empty()) throw parse_error("empty symbol token in word literal");
    tokens.push_back(std::move(tok));
    if (next == std::string::npos) break;
    pos = next + sep.size();
  }
  return tokens;
}

/// Parses a word literal. With no declared alphabet, the alphabet is
/// inferred as the sorted set of tokens appearing in the literal.
inline Word parse_word(const std::string& text, AlphabetPtr alphabet = nullptr,
                       const std::string& sep = "") {
  std::vector<std::string> tokens = tokenize(text, sep);
  if (!alphabet) {
    std::set<std::string> uniq(tokens.begin(), tokens.end());
    alphabet = make_alphabet(std::vector<std::string>(uniq.begin(), uniq.end()));
  }
  std::vector<int> letters;
  letters.reserve(tokens.size());
  for (const auto& tok : tokens) {
    auto id = alphabet->id_of(tok);
    if (!id) throw parse_error("symbol '" + tok + "' not in alphabet");
    letters.push_back(*id);
  }
  return Word(std::move(alphabet), std::move(letters));
}

}  // namespace palrich
