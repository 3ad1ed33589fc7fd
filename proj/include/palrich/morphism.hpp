#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "palrich/core.hpp"

namespace palrich {

/// Paper-facing operations reject erasing morphisms with this error.
struct erasing_morphism_error : precondition_error {
  using precondition_error::precondition_error;
};

// ---------------------------------------------------------------------------
// Morphism
// ---------------------------------------------------------------------------

/// A monoid morphism A* -> B*, given by one image word per domain letter.
/// Erasing morphisms (some image empty) are representable; every operation
/// that needs non-erasing input rejects them explicitly.
class Morphism {
 public:
  Morphism(AlphabetPtr domain, AlphabetPtr codomain, std::vector<Word> images)
      : domain_(std::move(domain)), codomain_(std::move(codomain)), images_(std::move(images)) {
    if (static_cast<int>(images_.size()) != domain_->size())
      throw precondition_error("morphism needs one image per domain letter");
    for (const Word& w : images_)
      if (!same_alphabet(w.alphabet(), codomain_))
        throw precondition_error("image word not over the codomain alphabet");
  }

  const AlphabetPtr& domain() const { return domain_; }
  const AlphabetPtr& codomain() const { return codomain_; }
  const Word& image(int letter) const { return images_.at(static_cast<std::size_t>(letter)); }
  const std::vector<Word>& images() const { return images_; }

  bool non_erasing() const {
    for (const Word& w : images_)
      if (w.empty()) return false;
    return true;
  }

  bool is_endomorphism() const { return same_alphabet(domain_, codomain_); }

  bool injective_on_letters() const {
    std::set<std::vector<int>> seen;
    for (const Word& w : images_)
      if (!seen.insert(w.letters()).second) return false;
    return true;
  }

  Word apply(const Word& u) const {
    if (!same_alphabet(u.alphabet(), domain_))
      throw precondition_error("word is not over the morphism's domain");
    std::vector<int> out;
    std::size_t total = 0;
    for (int c : u.letters()) total += image(c).size();
    out.reserve(total);
    for (int c : u.letters()) {
      const auto& img = image(c).letters();
      out.insert(out.end(), img.begin(), img.end());
    }
    return Word(codomain_, std::move(out));
  }

  bool operator==(const Morphism& rhs) const {
    if (!same_alphabet(domain_, rhs.domain_) || !same_alphabet(codomain_, rhs.codomain_))
      return false;
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i].letters() != rhs.images_[i].letters()) return false;
    return true;
  }
  bool operator!=(const Morphism& rhs) const { return !(*this == rhs); }

  void require_non_erasing(const char* what) const {
    if (!non_erasing()) throw erasing_morphism_error(std::string(what) + " requires a non-erasing morphism");
  }
  void require_endomorphism(const char* what) const {
    if (!is_endomorphism()) throw precondition_error(std::string(what) + " requires domain = codomain");
  }

 private:
  AlphabetPtr domain_;
  AlphabetPtr codomain_;
  std::vector<Word> images_;
};

inline Word apply(const Morphism& phi, const Word& u) { return phi.apply(u); }

/// (sigma o phi)(a) = sigma(phi(a)).
inline Morphism compose(const Morphism& sigma, const Morphism& phi) {
  if (!same_alphabet(phi.codomain(), sigma.domain()))
    throw precondition_error("compose: codomain of inner morphism must equal domain of outer");
  std::vector<Word> images;
  images.reserve(phi.images().size());
  for (const Word& w : phi.images()) images.push_back(sigma.apply(w));
  return Morphism(phi.domain(), sigma.codomain(), std::move(images));
}

inline Morphism identity_morphism(const AlphabetPtr& alphabet) {
  std::vector<Word> images;
  for (int a = 0; a < alphabet->size(); ++a) images.push_back(Word(alphabet, {a}));
  return Morphism(alphabet, alphabet, std::move(images));
}

/// Letter permutation a -> perm[a]; perm must be a bijection.
inline Morphism permutation_morphism(const AlphabetPtr& alphabet, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != alphabet->size())
    throw precondition_error("permutation size mismatch");
  std::vector<bool> hit(perm.size(), false);
  for (int p : perm) {
    if (p < 0 || p >= alphabet->size() || hit[static_cast<std::size_t>(p)])
      throw precondition_error("not a permutation of the alphabet");
    hit[static_cast<std::size_t>(p)] = true;
  }
  std::vector<Word> images;
  for (int p : perm) images.push_back(Word(alphabet, {p}));
  return Morphism(alphabet, alphabet, std::move(images));
}

// ---------------------------------------------------------------------------
// Incidence matrix and growth
// ---------------------------------------------------------------------------

/// M[a][b] = number of occurrences of codomain letter a in phi(b).
/// Column sums equal image lengths; composition multiplies matrices.
struct IncidenceMatrix {
  int rows = 0;  // codomain size
  int cols = 0;  // domain size
  std::vector<std::int64_t> m;

  std::int64_t& at(int r, int c) { return m[static_cast<std::size_t>(r) * cols + c]; }
  std::int64_t at(int r, int c) const { return m[static_cast<std::size_t>(r) * cols + c]; }

  IncidenceMatrix multiply(const IncidenceMatrix& rhs) const {
    if (cols != rhs.rows) throw precondition_error("incidence matrix dimension mismatch");
    IncidenceMatrix out;
    out.rows = rows;
    out.cols = rhs.cols;
    out.m.assign(static_cast<std::size_t>(rows) * rhs.cols, 0);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) {
        const std::int64_t v = at(i, k);
        if (v == 0) continue;
        for (int j = 0; j < rhs.cols; ++j) out.at(i, j) += v * rhs.at(k, j);
      }
    return out;
  }

  std::int64_t column_sum(int c) const {
    std::int64_t s = 0;
    for (int r = 0; r < rows; ++r) s += at(r, c);
    return s;
  }
};

inline IncidenceMatrix incidence_matrix(const Morphism& phi) {
  IncidenceMatrix M;
  M.rows = phi.codomain()->size();
  M.cols = phi.domain()->size();
  M.m.assign(static_cast<std::size_t>(M.rows) * M.cols, 0);
  for (int b = 0; b < M.cols; ++b)
    for (int a : phi.image(b).letters()) ++M.at(a, b);
  return M;
}

/// True iff some power k <= d^2 - 2d + 2 of the incidence matrix is
/// entrywise positive (Wielandt bound keeps the check exact).
inline bool is_primitive(const Morphism& phi) {
  phi.require_endomorphism("primitivity");
  const int d = phi.domain()->size();
  if (d == 0) return false;
  const IncidenceMatrix M = incidence_matrix(phi);
  std::vector<bool> B(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) B[static_cast<std::size_t>(i) * d + j] = M.at(i, j) > 0;
  const int bound = d * d - 2 * d + 2;
  std::vector<bool> P = B;
  for (int k = 1; k <= bound; ++k) {
    if (std::find(P.begin(), P.end(), false) == P.end()) return true;
    if (k == bound) break;
    std::vector<bool> next(static_cast<std::size_t>(d) * d, false);
    for (int i = 0; i < d; ++i)
      for (int l = 0; l < d; ++l)
        if (P[static_cast<std::size_t>(i) * d + l])
          for (int j = 0; j < d; ++j)
            if (B[static_cast<std::size_t>(l) * d + j]) next[static_cast<std::size_t>(i) * d + j] = true;
    P = std::move(next);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Conjugation
// ---------------------------------------------------------------------------

namespace detail {

/// Primitive root of a non-empty word (shortest z with w in z^+), via the
/// border array.
inline std::vector<int> primitive_root(const std::vector<int>& w) {
  const std::size_t n = w.size();
  std::vector<std::size_t> border(n + 1, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t b = border[i];
    while (b > 0 && w[i] != w[b]) b = border[b];
    border[i + 1] = (w[i] == w[b]) ? b + 1 : 0;
  }
  const std::size_t p = n - border[n];
  if (n % p == 0) return std::vector<int>(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
  return w;
}

inline std::optional<int> common_first_letter(const std::vector<Word>& images) {
  const int c = images.front().front();
  for (const Word& w : images)
    if (w.front() != c) return std::nullopt;
  return c;
}

inline std::optional<int> common_last_letter(const std::vector<Word>& images) {
  const int c = images.front().back();
  for (const Word& w : images)
    if (w.back() != c) return std::nullopt;
  return c;
}

/// One conjugation step toward the leftmost form: the shared first letter
/// moves to the back of every image.
inline std::vector<Word> shift_left(const std::vector<Word>& images, int c) {
  std::vector<Word> out;
  out.reserve(images.size());
  for (const Word& w : images) {
    std::vector<int> v(w.letters().begin() + 1, w.letters().end());
    v.push_back(c);
    out.push_back(Word(w.alphabet(), std::move(v)));
  }
  return out;
}

/// One conjugation step toward the rightmost form: the shared last letter
/// moves to the front of every image.
inline std::vector<Word> shift_right(const std::vector<Word>& images, int c) {
  std::vector<Word> out;
  out.reserve(images.size());
  for (const Word& w : images) {
    std::vector<int> v;
    v.reserve(w.size());
    v.push_back(c);
    v.insert(v.end(), w.letters().begin(), w.letters().end() - 1);
    out.push_back(Word(w.alphabet(), std::move(v)));
  }
  return out;
}

}  // namespace detail

/// True iff all images are powers of one common primitive word.
inline bool is_cyclic(const Morphism& phi) {
  phi.require_non_erasing("cyclicity test");
  std::vector<int> root = detail::primitive_root(phi.image(0).letters());
  for (const Word& w : phi.images())
    if (detail::primitive_root(w.letters()) != root) return false;
  return true;
}

/// The full line of conjugates of an acyclic morphism, from the leftmost
/// conjugate (index 0) to the rightmost (index D). conj_words[t] is the word
/// c_t with positions[t](a) c_t = c_t positions[0](a) and |c_t| = t.
struct ConjugationChain {
  bool cyclic = false;
  std::vector<Morphism> positions;
  std::vector<Word> conj_words;
  std::size_t input_index = 0;

  const Morphism& leftmost() const { return positions.front(); }
  const Morphism& rightmost() const { return positions.back(); }
};

inline ConjugationChain conjugation_chain(const Morphism& phi) {
  phi.require_non_erasing("conjugation");
  ConjugationChain chain;
  if (is_cyclic(phi)) {
    chain.cyclic = true;
    return chain;
  }

  // Walk to the leftmost conjugate; acyclicity guarantees termination, the
  // seen-set guards against it.
  std::vector<Word> images = phi.images();
  std::set<std::vector<std::vector<int>>> seen;
  auto key = [](const std::vector<Word>& imgs) {
    std::vector<std::vector<int>> k;
    k.reserve(imgs.size());
    for (const Word& w : imgs) k.push_back(w.letters());
    return k;
  };
  while (auto c = detail::common_first_letter(images)) {
    if (!seen.insert(key(images)).second)
      throw error("conjugation did not terminate on an acyclic morphism");
    images = detail::shift_left(images, *c);
  }

  // Collect the whole line rightward from the leftmost form.
  const AlphabetPtr& cod = phi.codomain();
  std::vector<int> conj;  // built from the back: c_{t+1} = popped letter . c_t
  chain.positions.emplace_back(phi.domain(), cod, images);
  chain.conj_words.push_back(Word(cod));
  while (auto c = detail::common_last_letter(chain.positions.back().images())) {
    conj.insert(conj.begin(), *c);
    chain.positions.emplace_back(phi.domain(), cod,
                                 detail::shift_right(chain.positions.back().images(), *c));
    chain.conj_words.push_back(Word(cod, conj));
  }

  for (std::size_t i = 0; i < chain.positions.size(); ++i)
    if (chain.positions[i] == phi) {
      chain.input_index = i;
      return chain;
    }
  throw error("input morphism not found on its own conjugation line");
}

inline Morphism rightmost_conjugate(const Morphism& phi) {
  ConjugationChain chain = conjugation_chain(phi);
  if (chain.cyclic) throw precondition_error("cyclic morphism has no rightmost conjugate");
  return chain.rightmost();
}

inline Morphism leftmost_conjugate(const Morphism& phi) {
  ConjugationChain chain = conjugation_chain(phi);
  if (chain.cyclic) throw precondition_error("cyclic morphism has no leftmost conjugate");
  return chain.leftmost();
}

// ---------------------------------------------------------------------------
// Perron data
// ---------------------------------------------------------------------------

/// Dominant eigenvalue and letter-density eigenvector of a primitive
/// incidence matrix (power iteration, deterministic all-ones start).
struct PerronData {
  double lambda = 0.0;
  std::vector<double> densities;  // positive, sum to 1
  double residual = 0.0;          // |M rho - lambda rho|_2
};

inline PerronData perron(const Morphism& phi) {
  if (!is_primitive(phi)) throw precondition_error("perron data requires a primitive morphism");
  const int d = phi.domain()->size();
  const IncidenceMatrix M = incidence_matrix(phi);
  auto matvec = [&](const std::vector<double>& x) {
    std::vector<double> y(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        y[static_cast<std::size_t>(i)] +=
            static_cast<double>(M.at(i, j)) * x[static_cast<std::size_t>(j)];
    return y;
  };
  std::vector<double> v(static_cast<std::size_t>(d), 1.0 / d);
  double lambda = 0.0;
  double residual = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    std::vector<double> w = matvec(v);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= sum;
    std::vector<double> mw = matvec(w);
    lambda = std::accumulate(mw.begin(), mw.end(), 0.0);  // |w|_1 = 1
    residual = 0.0;
    for (int i = 0; i < d; ++i) {
      const double r = mw[static_cast<std::size_t>(i)] - lambda * w[static_cast<std::size_t>(i)];
      residual += r * r;
    }
    residual = std::sqrt(residual);
    v = std::move(w);
    if (residual <= 1e-13) break;
  }
  return PerronData{lambda, std::move(v), residual};
}

// ---------------------------------------------------------------------------
// Fixed points
// ---------------------------------------------------------------------------

/// phi is a substitution on `seed` iff phi(seed) starts with seed and the
/// iterated image lengths are unbounded; with non-erasing images that is
/// exactly |phi(seed)| >= 2.
inline bool is_substitution_seed(const Morphism& phi, int seed) {
  if (!phi.is_endomorphism() || !phi.non_erasing()) return false;
  if (seed < 0 || seed >= phi.domain()->size()) return false;
  const Word& img = phi.image(seed);
  return img.size() >= 2 && img.front() == seed;
}

/// The prefix of length n of the fixed point phi^w(seed).
inline Word fixed_point_prefix(const Morphism& phi, int seed, std::size_t n,
                               std::size_t cap = kDefaultPrefixCap) {
  phi.require_endomorphism("fixed point");
  phi.require_non_erasing("fixed point");
  if (!is_substitution_seed(phi, seed))
    throw precondition_error("morphism is not a substitution on the given seed letter");
  if (n > cap) throw cap_exceeded_error("requested fixed-point prefix exceeds the length cap");
  Word w(phi.domain(), {seed});
  while (w.size() < n) {
    w = phi.apply(w);
    if (w.size() > n) w = w.prefix(n);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Elementary Arnoux-Rauzy morphisms
// ---------------------------------------------------------------------------

/// a -> a, b -> ab for b != a.
inline Morphism ar_psi(const AlphabetPtr& alphabet, int a) {
  std::vector<Word> images;
  for (int b = 0; b < alphabet->size(); ++b)
    images.push_back(b == a ? Word(alphabet, {a}) : Word(alphabet, {a, b}));
  return Morphism(alphabet, alphabet, std::move(images));
}

/// a -> a, b -> ba for b != a.
inline Morphism ar_psi_bar(const AlphabetPtr& alphabet, int a) {
  std::vector<Word> images;
  for (int b = 0; b < alphabet->size(); ++b)
    images.push_back(b == a ? Word(alphabet, {a}) : Word(alphabet, {b, a}));
  return Morphism(alphabet, alphabet, std::move(images));
}

// ---------------------------------------------------------------------------
// Text format: a->image;b->image;...
// ---------------------------------------------------------------------------

/// Parses `a->image;b->image;...`. Domain letters are the left-hand sides in
/// sorted order; the codomain is the domain when all image letters belong to
/// it, otherwise the sorted set of image letters.
inline Morphism parse_morphism(const std::string& spec, const std::string& sep = "") {
  std::vector<std::pair<std::string, std::string>> rules;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t end = spec.find(';', pos);
    std::string rule = spec.substr(pos, end == std::string::npos ? end : end - pos);
    if (!rule.empty()) {
      std::size_t arrow = rule.find("->");
      if (arrow == std::string::npos) throw parse_error("morphism rule missing '->': " + rule);
      rules.emplace_back(rule.substr(0, arrow), rule.substr(arrow + 2));
    }
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  if (rules.empty()) throw parse_error("empty morphism spec");

  std::set<std::string> domain_tokens;
  for (auto& [lhs, rhs] : rules) {
    std::vector<std::string> toks = tokenize(lhs, sep);
    if (toks.size() != 1) throw parse_error("morphism rule left side must be a single letter: " + lhs);
    lhs = toks[0];
    if (!domain_tokens.insert(lhs).second) throw parse_error("duplicate rule for letter " + lhs);
  }
  AlphabetPtr domain = make_alphabet({domain_tokens.begin(), domain_tokens.end()});

  std::set<std::string> image_tokens;
  for (const auto& [lhs, rhs] : rules)
    for (const auto& tok : tokenize(rhs, sep)) image_tokens.insert(tok);
  bool inside = true;
  for (const auto& tok : image_tokens)
    if (!domain->id_of(tok)) inside = false;
  AlphabetPtr codomain = inside ? domain : make_alphabet({image_tokens.begin(), image_tokens.end()});

  std::vector<Word> images(static_cast<std::size_t>(domain->size()), Word(codomain));
  for (const auto& [lhs, rhs] : rules)
    images[static_cast<std::size_t>(*domain->id_of(lhs))] = parse_word(rhs, codomain, sep);
  return Morphism(std::move(domain), std::move(codomain), std::move(images));
}

inline std::string format_morphism(const Morphism& phi, const std::string& sep = "") {
  std::string out;
  for (int a = 0; a < phi.domain()->size(); ++a) {
    if (a > 0) out += ';';
    out += phi.domain()->symbol(a);
    out += "->";
    out += phi.image(a).str(sep);
  }
  return out;
}

}  // namespace palrich
