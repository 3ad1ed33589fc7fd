#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "palrich/classify.hpp"
#include "palrich/language.hpp"
#include "palrich/morphism.hpp"
#include "palrich/palindromes.hpp"

namespace palrich {

/// The binary criterion applies only to morphisms with a conjugate in Class
/// P_ret; anything else is inapplicable rather than a negative verdict.
struct not_conjugate_to_pret_error : precondition_error {
  using precondition_error::precondition_error;
};

// ---------------------------------------------------------------------------
// Arnoux-Rauzy expressions
// ---------------------------------------------------------------------------

/// A composition of elementary generators, evaluated left to right as
/// gens[0] o gens[1] o ... o gens[k-1].
struct ARExpression {
  struct Generator {
    enum class Kind { Psi, PsiBar, Perm };
    Kind kind = Kind::Psi;
    int letter = 0;          // for Psi / PsiBar
    std::vector<int> perm;   // for Perm
  };
  AlphabetPtr alphabet;
  std::vector<Generator> gens;

  static Generator psi(int letter) { return Generator{Generator::Kind::Psi, letter, {}}; }
  static Generator psi_bar(int letter) { return Generator{Generator::Kind::PsiBar, letter, {}}; }
  static Generator perm(std::vector<int> images) {
    return Generator{Generator::Kind::Perm, 0, std::move(images)};
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (i > 0) out += " . ";
      const Generator& g = gens[i];
      switch (g.kind) {
        case Generator::Kind::Psi:
          out += "psi(" + alphabet->symbol(g.letter) + ")";
          break;
        case Generator::Kind::PsiBar:
          out += "psibar(" + alphabet->symbol(g.letter) + ")";
          break;
        case Generator::Kind::Perm: {
          out += "perm(";
          for (std::size_t j = 0; j < g.perm.size(); ++j) {
            if (j > 0) out += ",";
            out += alphabet->symbol(g.perm[j]);
          }
          out += ")";
          break;
        }
      }
    }
    return out.empty() ? "identity" : out;
  }
};

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// A machine-checkable verdict that a morphism preserves richness, together
/// with the evidence needed to recheck it.
struct Certificate {
  enum class Kind { BinaryPretCriterion, ArnouxRauzyExpression };

  Morphism subject;
  Kind kind;
  bool verdict = false;
  std::vector<std::string> caveats;

  // binary criterion evidence
  std::optional<Morphism> phi_r;
  std::optional<Word> marker;
  std::optional<Word> test_word;
  std::optional<RichnessReport> test_report;

  // Arnoux-Rauzy evidence
  std::optional<ARExpression> expression;
};

/// Decides the binary preservation criterion: the rightmost conjugate must
/// carry a marker w, and the finite word phi_R(0) phi_R(1) w must be rich.
/// A true verdict certifies that images of recurrent rich words are rich and
/// that fixed points of primitive subjects are rich.
inline Certificate certify_binary(const Morphism& phi) {
  if (phi.domain()->size() != 2)
    throw precondition_error("binary certification requires a two-letter domain");
  phi.require_non_erasing("binary certification");
  if (is_cyclic(phi))
    throw not_conjugate_to_pret_error("cyclic morphism: no conjugate lies in Class P_ret");

  Morphism phi_r = rightmost_conjugate(phi);
  auto witness = pret_marker(phi_r);
  if (!witness)
    throw not_conjugate_to_pret_error("no conjugate of the morphism lies in Class P_ret");

  Certificate cert{phi, Certificate::Kind::BinaryPretCriterion};
  cert.phi_r = phi_r;
  cert.marker = witness->marker;
  cert.test_word = phi_r.image(0) + phi_r.image(1) + witness->marker;
  cert.test_report = richness_report(*cert.test_word);
  cert.verdict = cert.test_report->rich;
  if (cert.verdict) {
    cert.caveats.push_back("images of recurrent rich words are rich");
    if (phi.is_endomorphism() && is_primitive(phi))
      cert.caveats.push_back("primitive: fixed points are rich");
    else
      cert.caveats.push_back("not primitive: no fixed-point conclusion");
  }
  return cert;
}

/// Evaluates an Arnoux-Rauzy expression to its morphism. Members of the
/// Arnoux-Rauzy monoid preserve richness on languages closed under reversal,
/// so the certificate's verdict is true by construction.
inline std::pair<Morphism, Certificate> ar_eval(const ARExpression& expr) {
  if (!expr.alphabet) throw precondition_error("expression needs an alphabet");
  Morphism result = identity_morphism(expr.alphabet);
  bool has_bar = false;
  for (const auto& g : expr.gens) {
    Morphism gen = [&]() -> Morphism {
      switch (g.kind) {
        case ARExpression::Generator::Kind::Psi:
          return ar_psi(expr.alphabet, g.letter);
        case ARExpression::Generator::Kind::PsiBar:
          has_bar = true;
          return ar_psi_bar(expr.alphabet, g.letter);
        case ARExpression::Generator::Kind::Perm:
          return permutation_morphism(expr.alphabet, g.perm);
      }
      throw error("unreachable");
    }();
    result = compose(result, gen);
  }
  Certificate cert{result, Certificate::Kind::ArnouxRauzyExpression};
  cert.expression = expr;
  cert.verdict = true;
  cert.caveats.push_back("preserves richness of words whose language is closed under reversal");
  for (const auto& g : expr.gens)
    if (g.kind == ARExpression::Generator::Kind::PsiBar) {
      cert.caveats.push_back("psibar(" + expr.alphabet->symbol(g.letter) +
                             ") is conjugate to psi(" + expr.alphabet->symbol(g.letter) +
                             ") with conjugate word " + expr.alphabet->symbol(g.letter));
      break;
    }
  (void)has_bar;
  return {std::move(result), std::move(cert)};
}

/// Recomputes a certificate's evidence from its subject and checks that the
/// stored verdict is reproduced.
inline bool re_verify(const Certificate& cert) {
  if (cert.kind == Certificate::Kind::BinaryPretCriterion) {
    try {
      Certificate fresh = certify_binary(cert.subject);
      return fresh.verdict == cert.verdict && cert.phi_r && *cert.phi_r == *fresh.phi_r &&
             cert.marker && *cert.marker == *fresh.marker && cert.test_word &&
             *cert.test_word == *fresh.test_word;
    } catch (const not_conjugate_to_pret_error&) {
      return false;
    }
  }
  if (!cert.expression) return false;
  auto [phi, fresh] = ar_eval(*cert.expression);
  return phi == cert.subject && fresh.verdict == cert.verdict;
}

// ---------------------------------------------------------------------------
// Construction of new substitutions from a rich word
// ---------------------------------------------------------------------------

/// From a binary source and a palindromic bispecial factor w, builds the
/// substitutions psi(a0) = r0, psi(a1) = r1 over ordered pairs of return
/// words to w with distinct last letters and r0 r1 occurring in the source.
/// Each output carries its marker verification and a binary certificate;
/// fixed points of certified outputs are rich.
inline std::vector<std::pair<Morphism, Certificate>> construct_from_rich(
    const WordSource& source, const Word& w, std::size_t cap = kDefaultPrefixCap) {
  if (source.alphabet()->size() != 2)
    throw precondition_error("construction requires a binary source");
  if (!w.is_palindrome()) throw precondition_error("construction requires a palindromic factor");

  const int horizon = static_cast<int>(w.size()) + 2;
  LanguageView view = LanguageView::build(source, horizon, cap);
  if (!view.contains(w)) throw precondition_error("factor not in the source language");
  ExtensionData ext = view.extension_data(w);
  if (ext.left.size() < 2 || ext.right.size() < 2)
    throw precondition_error("construction requires a bispecial factor");

  detail::StableSegments stable = detail::stabilize_segments(
      source, w, view.generated_prefix(), view.build_step(), cap);
  if (!stable.occurred) throw precondition_error("factor does not occur in the generated prefix");
  const Word& p = stable.prefix;
  const std::vector<Word>& words = stable.scan.by_first_occurrence;  // deterministic order
  if (words.size() < 2) throw precondition_error("fewer than two return words");

  std::vector<std::pair<Morphism, Certificate>> out;
  const AlphabetPtr& alpha = source.alphabet();
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (i == j) continue;
      const Word& r0 = words[i];
      const Word& r1 = words[j];
      if (r0.back() == r1.back()) continue;
      if (!contains_factor(p, r0 + r1)) continue;
      Morphism psi(alpha, alpha, {r0, r1});
      auto witness = pret_marker(psi);
      if (!witness || witness->marker != w) continue;
      if (rightmost_conjugate(psi) != psi) continue;
      try {
        Certificate cert = certify_binary(psi);
        out.emplace_back(std::move(psi), std::move(cert));
      } catch (const not_conjugate_to_pret_error&) {
        continue;
      }
    }
  }
  if (out.empty() && words.size() >= 2)
    throw precondition_error("no qualifying ordered pair of return words");
  return out;
}

// ---------------------------------------------------------------------------
// Derived substitutions
// ---------------------------------------------------------------------------

/// The substitution fixing the derived word of a substitution fixed point to
/// a palindromic prefix p, with consistency and spectral checks.
struct DerivedSubstitutionReport {
  Morphism eta;
  std::vector<Word> dictionary;       // return words to p, first-occurrence order
  std::optional<Word> eta_marker;     // marker of eta, when eta has one
  double lambda_source = 0.0;
  std::optional<double> lambda_eta;   // absent when eta is not primitive
  bool lambda_match = false;          // |lambda_source - lambda_eta| <= 1e-9
  bool roundtrip_ok = false;          // eta's fixed point equals the derived word
  std::size_t roundtrip_length = 0;
};

inline DerivedSubstitutionReport derived_substitution(const Morphism& phi, const Word& p,
                                                      std::size_t cap = kDefaultPrefixCap) {
  phi.require_endomorphism("derived substitution");
  phi.require_non_erasing("derived substitution");
  if (!is_primitive(phi)) throw precondition_error("derived substitution requires a primitive morphism");
  if (p.empty() || !p.is_palindrome())
    throw precondition_error("derived substitution requires a non-empty palindromic prefix");
  if (!same_alphabet(p.alphabet(), phi.domain()))
    throw precondition_error("prefix is not over the morphism's alphabet");
  const int seed = p.front();
  if (!is_substitution_seed(phi, seed))
    throw precondition_error("the prefix's first letter does not seed a fixed point");

  WordSource source = WordSource::fixed_point(phi, seed);
  if (!source.prefix_of_length(p.size(), cap).starts_with(p))
    throw precondition_error("p is not a prefix of the fixed point");

  // Return words to p, stabilized: grow until the segment set repeats and
  // every segment is witnessed twice.
  detail::StableSegments stable =
      detail::stabilize_segments(source, p, source.prefix_at(0, cap), 0, cap);
  if (stable.approximate)
    throw cap_exceeded_error("return words to p did not stabilize within the prefix cap");
  Word prefix = std::move(stable.prefix);
  detail::SegmentScan scan = std::move(stable.scan);
  const std::vector<Word> dictionary = scan.by_first_occurrence;  // copy: scans below rescan
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < dictionary.size(); ++i)
    index.emplace(dictionary[i].letters(), static_cast<int>(i));

  // Image lengths under phi, to map occurrence positions into the fixed point.
  std::vector<std::size_t> occ_of;  // first occurrence position of each dictionary word
  occ_of.assign(dictionary.size(), 0);
  {
    std::vector<bool> found(dictionary.size(), false);
    for (std::size_t j = 0; j + 1 < scan.occ.size(); ++j) {
      Word seg = prefix.subword(scan.occ[j], scan.occ[j + 1] - scan.occ[j]);
      int id = index.at(seg.letters());
      if (!found[static_cast<std::size_t>(id)]) {
        found[static_cast<std::size_t>(id)] = true;
        occ_of[static_cast<std::size_t>(id)] = scan.occ[j];
      }
    }
  }

  // Decompose phi(r_i): the image of the block starting at an occurrence of p
  // starts at another occurrence of p, and the return words tile it.
  AlphabetPtr derived_alpha = detail::derived_alphabet(dictionary.size());
  std::vector<Word> eta_images;
  for (std::size_t i = 0; i < dictionary.size(); ++i) {
    const Word& r = dictionary[i];
    std::size_t start = 0;
    for (std::size_t pos = 0; pos < occ_of[i]; ++pos) start += phi.image(prefix[pos]).size();
    const std::size_t end = start + phi.apply(r).size();
    if (end + p.size() > prefix.size()) {
      // materialize more of the fixed point
      prefix = source.prefix_of_length(end + p.size(), cap);
      scan = detail::scan_segments(prefix, p);
    }
    std::vector<int> image_indices;
    std::size_t pos = start;
    while (pos < end) {
      if (!std::binary_search(scan.occ.begin(), scan.occ.end(), pos))
        throw precondition_error("image block is not aligned on occurrences of p");
      auto next_occ = std::upper_bound(scan.occ.begin(), scan.occ.end(), pos);
      if (next_occ == scan.occ.end())
        throw cap_exceeded_error("insufficient horizon to decompose an image block");
      Word seg = prefix.subword(pos, *next_occ - pos);
      auto it = index.find(seg.letters());
      if (it == index.end())
        throw precondition_error("image block uses an unknown return word");
      image_indices.push_back(it->second);
      pos = *next_occ;
    }
    eta_images.push_back(Word(derived_alpha, std::move(image_indices)));
  }

  DerivedSubstitutionReport report{
      Morphism(derived_alpha, derived_alpha, std::move(eta_images)), dictionary};

  if (auto witness = pret_marker(report.eta)) report.eta_marker = witness->marker;
  report.lambda_source = perron(phi).lambda;
  if (is_primitive(report.eta)) {
    report.lambda_eta = perron(report.eta).lambda;
    report.lambda_match = std::abs(*report.lambda_eta - report.lambda_source) <= 1e-9;
  }

  const std::size_t n = std::min<std::size_t>(200, scan.occ.size() - 1);
  DerivedWordResult dw = derived_word(source, p, n, cap);
  Word eta_fp = fixed_point_prefix(report.eta, 0, n, cap);
  report.roundtrip_ok = dw.derived.letters() == eta_fp.letters();
  report.roundtrip_length = n;
  return report;
}

// ---------------------------------------------------------------------------
// Seed words
// ---------------------------------------------------------------------------

/// The word 0^{a_1} 1^{b_1} ... 0^{a_k} 1^{b_k} for non-decreasing exponent
/// lists; every word of this shape is rich, and the output is checked.
inline Word gss_word(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty() || a.size() != b.size())
    throw precondition_error("exponent lists must be non-empty and of equal length");
  auto valid = [](const std::vector<int>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 1) return false;
      if (i > 0 && v[i] < v[i - 1]) return false;
    }
    return true;
  };
  if (!valid(a) || !valid(b))
    throw precondition_error("exponent lists must be positive and non-decreasing");
  AlphabetPtr alpha = make_alphabet({"0", "1"});
  std::vector<int> letters;
  for (std::size_t i = 0; i < a.size(); ++i) {
    letters.insert(letters.end(), static_cast<std::size_t>(a[i]), 0);
    letters.insert(letters.end(), static_cast<std::size_t>(b[i]), 1);
  }
  Word w(alpha, std::move(letters));
  if (!is_rich(w)) throw std::logic_error("seed word failed its richness check");
  return w;
}

}  // namespace palrich
