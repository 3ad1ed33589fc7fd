#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "palrich/core.hpp"
#include "palrich/morphism.hpp"
#include "palrich/palindromes.hpp"

namespace palrich {

namespace detail {

/// Applies phi to u but stops once the output reaches `limit` letters.
inline Word apply_truncated(const Morphism& phi, const Word& u, std::size_t limit) {
  std::vector<int> out;
  out.reserve(std::min(limit, u.size() * 4));
  for (int c : u.letters()) {
    for (int x : phi.image(c).letters()) {
      out.push_back(x);
      if (out.size() == limit) return Word(phi.codomain(), std::move(out));
    }
  }
  return Word(phi.codomain(), std::move(out));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// WordSource
// ---------------------------------------------------------------------------

/// A finite or infinite word given by one of four recipes: a finite word, an
/// (eventually) periodic word, the fixed point of a substitution, or the
/// image of another source under a morphism. A source produces a monotone
/// chain of prefixes indexed by a growth step.
class WordSource {
 public:
  enum class Kind { Finite, Periodic, FixedPoint, Image };

  static WordSource finite(Word w) {
    WordSource s(Kind::Finite);
    s.word_ = std::move(w);
    return s;
  }

  static WordSource periodic(Word block, Word preperiod = Word()) {
    if (block.empty()) throw precondition_error("periodic source requires a non-empty block");
    if (preperiod.empty()) preperiod = Word(block.alphabet());
    block.require_compatible(preperiod);
    WordSource s(Kind::Periodic);
    s.word_ = std::move(block);
    s.preperiod_ = std::move(preperiod);
    return s;
  }

  static WordSource fixed_point(Morphism phi, int seed) {
    if (!is_substitution_seed(phi, seed))
      throw precondition_error("fixed point requires a substitution seed: phi(a) must start with a and grow");
    WordSource s(Kind::FixedPoint);
    s.morphism_ = std::move(phi);
    s.seed_ = seed;
    return s;
  }

  static WordSource image(Morphism phi, WordSource inner) {
    if (!same_alphabet(phi.domain(), inner.alphabet()))
      throw precondition_error("image source: morphism domain must match the inner source alphabet");
    phi.require_non_erasing("image source");
    WordSource s(Kind::Image);
    s.morphism_ = std::move(phi);
    s.inner_ = std::make_shared<const WordSource>(std::move(inner));
    return s;
  }

  Kind kind() const { return kind_; }

  AlphabetPtr alphabet() const {
    switch (kind_) {
      case Kind::Finite:
      case Kind::Periodic:
        return word_->alphabet();
      case Kind::FixedPoint:
        return morphism_->domain();
      case Kind::Image:
        return morphism_->codomain();
    }
    throw error("unreachable");
  }

  /// True when the source denotes a finite word, so prefixes stop growing.
  bool eventually_finite() const {
    if (kind_ == Kind::Finite) return true;
    if (kind_ == Kind::Image) return inner_->eventually_finite();
    return false;
  }

  /// The prefix at growth step `step`, truncated to `cap` letters. Prefixes
  /// are monotone: prefix_at(s) is a prefix of prefix_at(s + 1).
  Word prefix_at(int step, std::size_t cap = kDefaultPrefixCap) const {
    switch (kind_) {
      case Kind::Finite:
        return word_->prefix(cap);
      case Kind::Periodic: {
        std::vector<int> out = preperiod_->letters();
        for (int i = 0; i <= step && out.size() < cap; ++i)
          for (int c : word_->letters()) {
            if (out.size() == cap) break;
            out.push_back(c);
          }
        return Word(word_->alphabet(), std::move(out));
      }
      case Kind::FixedPoint: {
        Word w(morphism_->domain(), {seed_});
        for (int i = 0; i < step; ++i) {
          if (w.size() >= cap) break;
          w = detail::apply_truncated(*morphism_, w, cap);
        }
        return w;
      }
      case Kind::Image:
        return detail::apply_truncated(*morphism_, inner_->prefix_at(step, cap), cap);
    }
    throw error("unreachable");
  }

  /// Shortest generated prefix with at least `min_len` letters (the whole
  /// word for finite sources); throws when the cap truncates first.
  Word prefix_of_length(std::size_t min_len, std::size_t cap = kDefaultPrefixCap) const {
    if (min_len > cap) throw cap_exceeded_error("requested prefix exceeds the length cap");
    Word prev = prefix_at(0, cap);
    for (int step = 1; prev.size() < min_len; ++step) {
      if (eventually_finite()) throw precondition_error("finite source is shorter than the requested prefix");
      Word next = prefix_at(step, cap);
      if (next.size() == prev.size())
        throw cap_exceeded_error("prefix generation hit the length cap");
      prev = std::move(next);
    }
    return prev;
  }

  /// Round-trippable description in the CLI source grammar.
  std::string describe(const std::string& sep = "") const {
    switch (kind_) {
      case Kind::Finite:
        return "finite:" + word_->str(sep);
      case Kind::Periodic:
        return "periodic:" + word_->str(sep) +
               (preperiod_->empty() ? "" : "+" + preperiod_->str(sep));
      case Kind::FixedPoint:
        return "fix:" + format_morphism(*morphism_, sep) + "@" +
               morphism_->domain()->symbol(seed_);
      case Kind::Image:
        return "img:" + format_morphism(*morphism_, sep) + "(" + inner_->describe(sep) + ")";
    }
    throw error("unreachable");
  }

  const Morphism& morphism() const {
    if (!morphism_) throw precondition_error("source has no morphism");
    return *morphism_;
  }
  int seed() const { return seed_; }

 private:
  explicit WordSource(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::optional<Word> word_;       // finite word or periodic block
  std::optional<Word> preperiod_;  // periodic only
  std::optional<Morphism> morphism_;
  int seed_ = -1;
  std::shared_ptr<const WordSource> inner_;
};

// ---------------------------------------------------------------------------
// LanguageView
// ---------------------------------------------------------------------------

struct ExtensionData {
  std::vector<int> left;                   // letters a with a.u in the language
  std::vector<int> right;                  // letters b with u.b in the language
  std::vector<std::pair<int, int>> bi;     // pairs (a, b) with a.u.b in the language
  int bilateral_order = 0;                 // #bi - #left - #right + 1
  int pext = 0;                            // #{a : (a, a) in bi}; meaningful for palindromic u
  bool palindromic = false;
};

struct AuditReport {
  bool hypothesis_ok = false;  // language mirror-closed up to max_len + 2
  std::vector<Word> violators;
  bool exact = false;
  int max_len = 0;
};

/// The factor sets F_k, k <= horizon, of a word source. For infinite sources
/// the generated prefix is grown until the factor sets of every length up to
/// the horizon are identical for two consecutive growth steps; the view is
/// then marked exact. Views over finite sources never claim exactness (a
/// prefix cannot certify absent extensions).
class LanguageView {
 public:
  static LanguageView build(WordSource source, int horizon, std::size_t cap = kDefaultPrefixCap) {
    if (horizon < 1) throw precondition_error("horizon must be at least 1");
    LanguageView view(std::move(source), horizon, cap);
    if (view.source_.eventually_finite()) {
      view.prefix_ = view.source_.prefix_at(0, cap);
      view.factors_ = factor_sets(view.prefix_, horizon);
      view.exact_.assign(static_cast<std::size_t>(horizon) + 1, false);
      view.build_step_ = 0;
      return view;
    }
    std::optional<std::vector<std::set<std::vector<int>>>> prev;
    std::size_t prev_len = 0;
    for (int step = 0;; ++step) {
      Word p = view.source_.prefix_at(step, cap);
      if (step > 0 && p.size() == prev_len)
        throw cap_exceeded_error("factor sets did not stabilize within the prefix cap");
      prev_len = p.size();
      if (p.size() < static_cast<std::size_t>(horizon)) continue;
      auto sets = factor_sets(p, horizon);
      if (prev && *prev == sets) {
        view.prefix_ = std::move(p);
        view.factors_ = std::move(sets);
        view.exact_.assign(static_cast<std::size_t>(horizon) + 1, true);
        view.build_step_ = step;
        return view;
      }
      prev = std::move(sets);
    }
  }

  const WordSource& source() const { return source_; }
  int horizon() const { return horizon_; }
  std::size_t cap() const { return cap_; }
  const Word& generated_prefix() const { return prefix_; }
  int build_step() const { return build_step_; }
  AlphabetPtr alphabet() const { return source_.alphabet(); }
  bool exact(int k) const { return exact_.at(static_cast<std::size_t>(k)); }
  bool exact() const { return exact_.empty() ? false : exact_.front(); }

  const std::set<std::vector<int>>& factor_set(int k) const {
    if (k < 0 || k > horizon_) throw precondition_error("length outside the view horizon");
    return factors_[static_cast<std::size_t>(k)];
  }

  std::vector<Word> factors(int k) const {
    std::vector<Word> out;
    for (const auto& f : factor_set(k)) out.push_back(Word(alphabet(), f));
    return out;
  }

  bool contains(const Word& u) const {
    if (u.size() > static_cast<std::size_t>(horizon_))
      throw precondition_error("factor longer than the view horizon");
    return factor_set(static_cast<int>(u.size())).count(u.letters()) != 0;
  }

  /// Left/right extensions from F_{|u|+1}, bi-extensions from F_{|u|+2}.
  ExtensionData extension_data(const Word& u) const {
    if (u.size() + 2 > static_cast<std::size_t>(horizon_))
      throw precondition_error("horizon too small for extension data of this factor");
    if (!contains(u)) throw precondition_error("factor not in the view");
    ExtensionData data;
    data.palindromic = u.is_palindrome();
    const int d = alphabet()->size();
    const auto& f1 = factor_set(static_cast<int>(u.size()) + 1);
    for (int a = 0; a < d; ++a) {
      std::vector<int> ext;
      ext.reserve(u.size() + 1);
      ext.push_back(a);
      ext.insert(ext.end(), u.letters().begin(), u.letters().end());
      if (f1.count(ext)) data.left.push_back(a);
      ext.erase(ext.begin());
      ext.push_back(a);
      if (f1.count(ext)) data.right.push_back(a);
    }
    const auto& f2 = factor_set(static_cast<int>(u.size()) + 2);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        std::vector<int> ext;
        ext.reserve(u.size() + 2);
        ext.push_back(a);
        ext.insert(ext.end(), u.letters().begin(), u.letters().end());
        ext.push_back(b);
        if (f2.count(ext)) {
          data.bi.emplace_back(a, b);
          if (a == b) ++data.pext;
        }
      }
    data.bilateral_order = static_cast<int>(data.bi.size()) - static_cast<int>(data.left.size()) -
                           static_cast<int>(data.right.size()) + 1;
    return data;
  }

  /// All factors of length <= max_len with at least two left and two right
  /// extensions, sorted by length then lexicographically.
  std::vector<Word> bispecials(int max_len) const {
    if (max_len + 2 > horizon_)
      throw precondition_error("horizon too small for bispecials of this length");
    std::vector<Word> out;
    for (int k = 0; k <= max_len; ++k) {
      for (const auto& f : factor_set(k)) {
        Word u(alphabet(), f);
        ExtensionData data = extension_data(u);
        if (data.left.size() >= 2 && data.right.size() >= 2) out.push_back(std::move(u));
      }
    }
    return out;
  }

  /// True iff F_k is mirror-closed for every k <= up_to.
  bool reversal_closed(int up_to) const {
    if (up_to > horizon_) throw precondition_error("horizon too small for reversal check");
    for (int k = 0; k <= up_to; ++k)
      for (const auto& f : factor_set(k)) {
        std::vector<int> rev(f.rbegin(), f.rend());
        if (!factor_set(k).count(rev)) return false;
      }
    return true;
  }

 private:
  LanguageView(WordSource source, int horizon, std::size_t cap)
      : source_(std::move(source)), horizon_(horizon), cap_(cap), prefix_(source_.alphabet()) {}

  static std::vector<std::set<std::vector<int>>> factor_sets(const Word& p, int horizon) {
    std::vector<std::set<std::vector<int>>> sets(static_cast<std::size_t>(horizon) + 1);
    sets[0].insert(std::vector<int>{});
    const auto& s = p.letters();
    for (int k = 1; k <= horizon; ++k) {
      if (static_cast<std::size_t>(k) > s.size()) break;
      auto& fk = sets[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= s.size(); ++i)
        fk.emplace(s.begin() + static_cast<std::ptrdiff_t>(i),
                   s.begin() + static_cast<std::ptrdiff_t>(i + static_cast<std::size_t>(k)));
    }
    return sets;
  }

  WordSource source_;
  int horizon_;
  std::size_t cap_;
  Word prefix_;
  std::vector<std::set<std::vector<int>>> factors_;
  std::vector<bool> exact_;
  int build_step_ = 0;
};

// ---------------------------------------------------------------------------
// Return words
// ---------------------------------------------------------------------------

struct ReturnsResult {
  std::vector<Word> complete_returns;  // sorted, distinct
  std::vector<Word> return_words;      // sorted, distinct
  bool approximate = false;
};

namespace detail {

struct SegmentScan {
  std::vector<std::size_t> occ;
  std::map<std::vector<int>, std::size_t> counts;  // segment -> multiplicity
  std::vector<Word> by_first_occurrence;
};

inline SegmentScan scan_segments(const Word& p, const Word& u) {
  SegmentScan scan;
  scan.occ = occurrences(p, u);
  for (std::size_t j = 0; j + 1 < scan.occ.size(); ++j) {
    Word seg = p.subword(scan.occ[j], scan.occ[j + 1] - scan.occ[j]);
    auto [it, inserted] = scan.counts.emplace(seg.letters(), 0);
    ++it->second;
    if (inserted) scan.by_first_occurrence.push_back(std::move(seg));
  }
  return scan;
}

struct StableSegments {
  Word prefix;
  SegmentScan scan;
  bool approximate = false;  // growth exhausted before the set stabilized
  bool occurred = false;
};

/// Grows the source prefix until the set of gaps between consecutive
/// occurrences of u repeats across two growth steps with every gap witnessed
/// at least twice. Finite sources and the cap end the growth early, leaving
/// an approximate result.
inline StableSegments stabilize_segments(const WordSource& src, const Word& u, Word prefix,
                                         int step, std::size_t cap) {
  StableSegments out;
  std::optional<std::set<std::vector<int>>> prev;
  while (true) {
    out.scan = scan_segments(prefix, u);
    out.occurred = !out.scan.occ.empty();
    std::optional<Word> next;
    bool exhausted = src.eventually_finite() || prefix.size() >= cap;
    if (!exhausted) {
      next = src.prefix_at(step + 1, cap);
      if (next->size() == prefix.size()) exhausted = true;  // the cap truncates growth
    }
    if (!out.scan.counts.empty()) {
      bool twice = true;
      std::set<std::vector<int>> cur;
      for (const auto& [seg, count] : out.scan.counts) {
        cur.insert(seg);
        if (count < 2) twice = false;
      }
      if (twice && prev && *prev == cur) {
        out.prefix = std::move(prefix);
        return out;
      }
      prev = std::move(cur);
    }
    if (exhausted) {
      out.approximate = true;
      out.prefix = std::move(prefix);
      return out;
    }
    ++step;
    prefix = std::move(*next);
  }
}

}  // namespace detail

/// Complete return words to u (two occurrences of u, as proper prefix and
/// proper suffix) and the return words (complete returns with the trailing u
/// removed), collected from the generated prefix. The prefix is grown until
/// every distinct gap between consecutive occurrences is witnessed at least
/// twice and the set is stable under further growth; otherwise the result is
/// flagged approximate.
inline ReturnsResult returns(const LanguageView& view, const Word& u) {
  if (!same_alphabet(u.alphabet(), view.alphabet()))
    throw precondition_error("factor is not over the view's alphabet");
  detail::StableSegments stable = detail::stabilize_segments(
      view.source(), u, view.generated_prefix(), view.build_step(), view.cap());
  if (!stable.occurred)
    throw precondition_error("factor does not occur in the generated prefix");
  ReturnsResult result;
  result.approximate = stable.approximate;
  for (const auto& [seg, count] : stable.scan.counts) {
    Word r(view.alphabet(), seg);
    result.complete_returns.push_back(r + u);
    result.return_words.push_back(std::move(r));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Derived words
// ---------------------------------------------------------------------------

struct DerivedWordResult {
  Word derived;                  // index sequence over the derived alphabet
  std::vector<Word> dictionary;  // return words in first-occurrence order
  Word preprefix;                // shortest prefix stripped before the first occurrence
};

namespace detail {

inline std::string derived_symbol(std::size_t i) {
  if (i < 9) return std::string(1, static_cast<char>('r' + i));
  return "r" + std::to_string(i);
}

inline AlphabetPtr derived_alphabet(std::size_t arity) {
  std::vector<std::string> symbols;
  symbols.reserve(arity);
  for (std::size_t i = 0; i < arity; ++i) symbols.push_back(derived_symbol(i));
  return make_alphabet(std::move(symbols));
}

}  // namespace detail

/// The derived word of the source to the factor x: the sequence of indices of
/// consecutive return words to x, read along the word. Indices are assigned
/// by first occurrence; the shortest prefix before the first occurrence of x
/// is stripped.
inline DerivedWordResult derived_word(const WordSource& src, const Word& x, std::size_t out_len,
                                      std::size_t cap = kDefaultPrefixCap) {
  if (!same_alphabet(x.alphabet(), src.alphabet()))
    throw precondition_error("factor is not over the source alphabet");
  if (x.empty()) throw precondition_error("derived word requires a non-empty factor");

  Word p = src.prefix_at(0, cap);
  std::vector<std::size_t> occ = occurrences(p, x);
  for (int step = 1; occ.size() < out_len + 1; ++step) {
    if (src.eventually_finite())
      throw precondition_error("factor does not occur often enough in the source");
    Word next = src.prefix_at(step, cap);
    if (next.size() == p.size())
      throw cap_exceeded_error("prefix cap reached before enough occurrences were found");
    p = std::move(next);
    occ = occurrences(p, x);
  }

  std::map<std::vector<int>, int> index;
  std::vector<Word> dictionary;
  std::vector<int> derived;
  derived.reserve(out_len);
  for (std::size_t j = 0; j < out_len; ++j) {
    Word seg = p.subword(occ[j], occ[j + 1] - occ[j]);
    auto [it, inserted] = index.emplace(seg.letters(), static_cast<int>(dictionary.size()));
    if (inserted) dictionary.push_back(std::move(seg));
    derived.push_back(it->second);
  }
  AlphabetPtr alpha = detail::derived_alphabet(dictionary.size());
  DerivedWordResult result;
  result.derived = Word(alpha, std::move(derived));
  result.dictionary = std::move(dictionary);
  result.preprefix = p.prefix(occ[0]);
  return result;
}

// ---------------------------------------------------------------------------
// Richness audit
// ---------------------------------------------------------------------------

/// Checks the bispecial richness condition on every bispecial factor of
/// length <= max_len: the bilateral order must equal the palindromic
/// extension count minus one for palindromic factors, and zero otherwise.
/// The condition characterizes richness only when the language is closed
/// under reversal, so a failed closure check is reported separately from
/// condition violations.
inline AuditReport richness_audit(const LanguageView& view, int max_len) {
  if (max_len + 2 > view.horizon())
    throw precondition_error("horizon too small for the requested audit length");
  AuditReport report;
  report.max_len = max_len;
  report.exact = view.exact();
  report.hypothesis_ok = view.reversal_closed(max_len + 2);
  for (const Word& u : view.bispecials(max_len)) {
    ExtensionData data = view.extension_data(u);
    const int expected = data.palindromic ? data.pext - 1 : 0;
    if (data.bilateral_order != expected) report.violators.push_back(u);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Source grammar: finite:<word> | periodic:<block>[+<pre>] |
//                 fix:<morphism>@<seed> | img:<morphism>(<source>)
// ---------------------------------------------------------------------------

inline WordSource parse_source(const std::string& spec, const std::string& sep = "") {
  auto starts = [&spec](const char* tag) { return spec.rfind(tag, 0) == 0; };
  if (starts("finite:")) {
    return WordSource::finite(parse_word(spec.substr(7), nullptr, sep));
  }
  if (starts("periodic:")) {
    std::string rest = spec.substr(9);
    std::size_t plus = rest.find('+');
    std::string block_text = rest.substr(0, plus);
    std::string pre_text = plus == std::string::npos ? "" : rest.substr(plus + 1);
    std::set<std::string> tokens;
    for (const auto& t : tokenize(block_text, sep)) tokens.insert(t);
    for (const auto& t : tokenize(pre_text, sep)) tokens.insert(t);
    AlphabetPtr alpha = make_alphabet({tokens.begin(), tokens.end()});
    return WordSource::periodic(parse_word(block_text, alpha, sep), parse_word(pre_text, alpha, sep));
  }
  if (starts("fix:")) {
    std::string rest = spec.substr(4);
    std::size_t at = rest.rfind('@');
    if (at == std::string::npos) throw parse_error("fixed-point source needs '@<seed>'");
    Morphism phi = parse_morphism(rest.substr(0, at), sep);
    auto seed = phi.domain()->id_of(rest.substr(at + 1));
    if (!seed) throw parse_error("seed letter not in the morphism domain");
    return WordSource::fixed_point(std::move(phi), *seed);
  }
  if (starts("img:")) {
    std::string rest = spec.substr(4);
    std::size_t open = rest.find('(');
    if (open == std::string::npos || rest.back() != ')')
      throw parse_error("image source needs '(<source>)'");
    Morphism phi = parse_morphism(rest.substr(0, open), sep);
    WordSource inner = parse_source(rest.substr(open + 1, rest.size() - open - 2), sep);
    return WordSource::image(std::move(phi), std::move(inner));
  }
  throw parse_error("unknown source spec: " + spec);
}

}  // namespace palrich
