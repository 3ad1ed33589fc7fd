#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "palrich/morphism.hpp"

namespace palrich {

// ---------------------------------------------------------------------------
// Class P
// ---------------------------------------------------------------------------

/// A decomposition eta(a) = p q_a with p and every q_a palindromic.
struct ClassPDecomposition {
  Word p;
  std::vector<Word> q;  // one remainder per domain letter
};

/// Finds a Class P decomposition with the longest valid palindromic common
/// prefix p, or nothing. Any valid p proves membership; the longest one makes
/// the result canonical.
inline std::optional<ClassPDecomposition> class_p_decomposition(const Morphism& phi) {
  std::size_t common = phi.image(0).size();
  for (const Word& w : phi.images()) {
    std::size_t k = 0;
    while (k < common && k < w.size() && w[k] == phi.image(0)[k]) ++k;
    common = k;
  }
  for (std::size_t len = common + 1; len-- > 0;) {
    Word p = phi.image(0).prefix(len);
    if (!p.is_palindrome()) continue;
    bool ok = true;
    std::vector<Word> q;
    for (const Word& w : phi.images()) {
      Word rest = w.subword(len, w.size() - len);
      if (!rest.is_palindrome()) {
        ok = false;
        break;
      }
      q.push_back(std::move(rest));
    }
    if (ok) return ClassPDecomposition{std::move(p), std::move(q)};
  }
  return std::nullopt;
}

/// True iff the rightmost conjugate images are letterwise mirror images of
/// the leftmost conjugate images.
inline bool conjugate_to_class_p(const Morphism& phi) {
  ConjugationChain chain = conjugation_chain(phi);
  if (chain.cyclic) throw precondition_error("cyclic morphism: conjugacy to Class P undefined");
  const Morphism& left = chain.leftmost();
  const Morphism& right = chain.rightmost();
  for (int a = 0; a < phi.domain()->size(); ++a)
    if (right.image(a) != left.image(a).mirror()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Class P_ret
// ---------------------------------------------------------------------------

/// Verified evidence that phi has marker w: every phi(a) w is a palindromic
/// complete return word to w, and the images are pairwise distinct.
struct PretWitness {
  Word marker;
  struct LetterCheck {
    Word complete_return;                    // phi(a) w
    bool palindromic = false;
    std::vector<std::size_t> marker_occurrences;  // must be {0, |phi(a)|}
  };
  std::vector<LetterCheck> letters;
  bool injective = false;
};

/// Every word w such that w is a prefix of phi(a) w for all letters a:
/// exactly the words popped letter by letter off the common front of the
/// images. Candidates come back shortest first, starting with the empty word.
inline std::vector<Word> marker_candidates(const Morphism& phi) {
  phi.require_non_erasing("marker search");
  std::vector<Word> candidates;
  candidates.push_back(Word(phi.codomain()));
  if (is_cyclic(phi)) return candidates;  // popping would never block
  std::vector<Word> images = phi.images();
  std::vector<int> popped;
  while (auto c = detail::common_first_letter(images)) {
    popped.push_back(*c);
    candidates.push_back(Word(phi.codomain(), popped));
    images = detail::shift_left(images, *c);
  }
  return candidates;
}

inline std::optional<PretWitness> verify_marker(const Morphism& phi, const Word& w) {
  if (!w.is_palindrome()) return std::nullopt;
  PretWitness witness;
  witness.marker = w;
  witness.injective = phi.injective_on_letters();
  if (!witness.injective) return std::nullopt;
  for (const Word& img : phi.images()) {
    PretWitness::LetterCheck check;
    check.complete_return = img + w;
    check.palindromic = check.complete_return.is_palindrome();
    check.marker_occurrences = occurrences(check.complete_return, w);
    const bool ok = check.palindromic && check.marker_occurrences.size() == 2 &&
                    check.marker_occurrences[0] == 0 &&
                    check.marker_occurrences[1] == img.size();
    if (!ok) return std::nullopt;
    witness.letters.push_back(std::move(check));
  }
  return witness;
}

/// Searches the candidate chain for the marker; the marker is unique when it
/// exists. Cyclic morphisms never qualify.
inline std::optional<PretWitness> pret_marker(const Morphism& phi) {
  phi.require_non_erasing("marker search");
  if (is_cyclic(phi)) return std::nullopt;
  for (const Word& w : marker_candidates(phi))
    if (auto witness = verify_marker(phi, w)) return witness;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Marked morphisms
// ---------------------------------------------------------------------------

/// rho: last letters of the rightmost conjugate's images;
/// lambda: first letters of the leftmost conjugate's images.
struct MarkMaps {
  std::vector<int> rho;
  std::vector<int> lambda;
};

inline MarkMaps mark_maps(const Morphism& phi) {
  ConjugationChain chain = conjugation_chain(phi);
  if (chain.cyclic) throw precondition_error("cyclic morphism has no mark maps");
  MarkMaps maps;
  for (int a = 0; a < phi.domain()->size(); ++a) {
    maps.rho.push_back(chain.rightmost().image(a).back());
    maps.lambda.push_back(chain.leftmost().image(a).front());
  }
  return maps;
}

struct Markedness {
  bool right_marked = false;  // rho injective
  bool left_marked = false;   // lambda injective
  bool marked = false;
  bool well_marked = false;  // rho and lambda both the identity
};

inline Markedness markedness(const Morphism& phi) {
  MarkMaps maps = mark_maps(phi);
  auto injective = [](const std::vector<int>& f) {
    std::set<int> seen(f.begin(), f.end());
    return seen.size() == f.size();
  };
  auto identity = [&phi](const std::vector<int>& f) {
    if (!phi.is_endomorphism()) return false;
    for (std::size_t a = 0; a < f.size(); ++a)
      if (f[a] != static_cast<int>(a)) return false;
    return true;
  };
  Markedness m;
  m.right_marked = injective(maps.rho);
  m.left_marked = injective(maps.lambda);
  m.marked = m.right_marked && m.left_marked;
  m.well_marked = m.marked && identity(maps.rho) && identity(maps.lambda);
  return m;
}

/// Smallest k >= 1 such that phi^k is well-marked, for a right-marked
/// morphism with a marker. Iterates composition; k divides the order of the
/// permutation rho, so d! compositions bound the search.
inline int well_marked_power(const Morphism& phi) {
  phi.require_endomorphism("well-marked power");
  if (!pret_marker(phi)) throw precondition_error("well-marked power requires a marker");
  if (!markedness(phi).right_marked)
    throw precondition_error("well-marked power requires a right-marked morphism");
  std::size_t cap = 1;
  for (int i = 2; i <= phi.domain()->size(); ++i) cap *= static_cast<std::size_t>(i);
  Morphism power = phi;
  for (std::size_t k = 1; k <= cap; ++k) {
    if (markedness(power).well_marked) return static_cast<int>(k);
    power = compose(phi, power);
  }
  throw error("no well-marked power within d! compositions");
}

}  // namespace palrich
