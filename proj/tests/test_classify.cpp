#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "palrich/classify.hpp"

using namespace palrich;

namespace {

Morphism fibonacci() { return parse_morphism("0->01;1->0"); }
Morphism tribonacci() { return parse_morphism("0->01;1->02;2->0"); }
Morphism phi1() { return parse_morphism("0->010;1->01001"); }
Morphism phi2() { return parse_morphism("0->1110;1->1"); }
Morphism sigma_113() { return parse_morphism("0->01;1->0111"); }
Morphism sigma_212() { return parse_morphism("0->001;1->0011"); }
Morphism eta_rs() { return parse_morphism("r->rss;s->r"); }
Morphism class_p_not_pret() { return parse_morphism("0->010101;1->0101001"); }

int count_verified_candidates(const Morphism& phi) {
  int verified = 0;
  for (const Word& w : marker_candidates(phi))
    if (verify_marker(phi, w)) ++verified;
  return verified;
}

std::vector<Morphism> pret_corpus() {
  std::vector<Morphism> corpus = {phi1(),      phi2(),      fibonacci(),
                                  sigma_113(), sigma_212(), eta_rs(),
                                  tribonacci()};
  auto tri = make_alphabet({"0", "1", "2"});
  corpus.push_back(ar_psi(tri, 0));
  corpus.push_back(ar_psi(tri, 2));
  corpus.push_back(permutation_morphism(tri, {2, 0, 1}));
  corpus.push_back(compose(phi1(), phi2()));
  corpus.push_back(compose(phi2(), fibonacci()));
  corpus.push_back(compose(tribonacci(), ar_psi(tri, 1)));
  return corpus;
}

}  // namespace

TEST_CASE("palindromic prefix decompositions") {
  auto psi_tame = parse_morphism("a->aca;b->a;c->b");
  auto dec = class_p_decomposition(psi_tame);
  REQUIRE(dec.has_value());
  CHECK(dec->p == Word(psi_tame.codomain()));
  CHECK(dec->q[0].str() == "aca");
  CHECK(dec->q[1].str() == "a");
  CHECK(dec->q[2].str() == "b");

  auto single = class_p_decomposition(parse_morphism("0->01;1->0"));
  REQUIRE(single.has_value());
  CHECK(single->p.str() == "0");
  CHECK(single->q[0].str() == "1");

  CHECK_FALSE(class_p_decomposition(parse_morphism("0->011010")).has_value());

  auto end3 = class_p_decomposition(class_p_not_pret());
  REQUIRE(end3.has_value());
  CHECK(end3->p.str() == "010");
  CHECK(end3->q[0].str() == "101");
  CHECK(end3->q[1].str() == "1001");
}

TEST_CASE("conjugacy to a palindromic-split morphism") {
  CHECK(conjugate_to_class_p(class_p_not_pret()));
  CHECK(conjugate_to_class_p(fibonacci()));
  CHECK_FALSE(conjugate_to_class_p(parse_morphism("0->01;1->10")));
  CHECK_THROWS_AS(conjugate_to_class_p(parse_morphism("0->00;1->0")), precondition_error);
}

TEST_CASE("marker detection on the standard examples") {
  auto marker_of = [](const Morphism& phi) {
    auto w = pret_marker(phi);
    REQUIRE(w.has_value());
    return w->marker.str();
  };
  CHECK(marker_of(phi1()) == "010010");
  CHECK(marker_of(phi2()) == "111");
  CHECK(marker_of(sigma_113()) == "0");
  CHECK(marker_of(sigma_212()) == "00");
  CHECK(marker_of(fibonacci()) == "0");
  CHECK(marker_of(tribonacci()) == "0");
  CHECK(marker_of(eta_rs()) == "r");

  SECTION("elementary generators") {
    auto tri = make_alphabet({"0", "1", "2"});
    for (int a = 0; a < 3; ++a) {
      auto w = pret_marker(ar_psi(tri, a));
      REQUIRE(w.has_value());
      CHECK(w->marker == Word(tri, {a}));
      CHECK_FALSE(pret_marker(ar_psi_bar(tri, a)).has_value());
    }
    auto perm = pret_marker(permutation_morphism(tri, {1, 2, 0}));
    REQUIRE(perm.has_value());
    CHECK(perm->marker.empty());
  }

  SECTION("cross-alphabet morphism onto a binary codomain") {
    auto dom = make_alphabet({"0", "1", "2"});
    auto cod = make_alphabet({"0", "1"});
    Morphism zeta(dom, cod,
                  {parse_word("0100", cod), parse_word("01011", cod), parse_word("010111", cod)});
    auto w = pret_marker(zeta);
    REQUIRE(w.has_value());
    CHECK(w->marker.str() == "010");
  }

  SECTION("cyclic morphisms never carry a marker") {
    CHECK_FALSE(pret_marker(parse_morphism("0->00;1->0")).has_value());
  }

  SECTION("witness records the verification evidence") {
    auto w = pret_marker(phi2());
    REQUIRE(w.has_value());
    CHECK(w->injective);
    REQUIRE(w->letters.size() == 2);
    CHECK(w->letters[0].complete_return.str() == "1110111");
    CHECK(w->letters[0].palindromic);
    CHECK(w->letters[0].marker_occurrences == std::vector<std::size_t>{0, 4});
    CHECK(w->letters[1].complete_return.str() == "1111");
    CHECK(w->letters[1].marker_occurrences == std::vector<std::size_t>{0, 1});
  }
}

TEST_CASE("the acyclic palindromic-split morphism with no marked conjugate") {
  Morphism phi = class_p_not_pret();
  ConjugationChain chain = conjugation_chain(phi);
  REQUIRE_FALSE(chain.cyclic);
  CHECK(format_morphism(chain.rightmost()) == "0->010101;1->0101010");
  CHECK(format_morphism(chain.leftmost()) == "0->101010;1->0101010");
  CHECK(chain.conj_words.back().str() == "0101010");
  CHECK(conjugate_to_class_p(phi));
  for (const Morphism& conj : chain.positions) CHECK_FALSE(pret_marker(conj).has_value());

  // The longest candidate of the rightmost conjugate fails by occurring four
  // times in the first complete-return check.
  const Morphism& right = chain.rightmost();
  Word w = parse_word("0101010", right.codomain());
  CHECK(occurrences(right.image(0) + w, w).size() == 4);
}

TEST_CASE("first/last letter maps") {
  MarkMaps tau_maps = mark_maps(tribonacci());
  CHECK(tau_maps.rho == std::vector<int>{1, 2, 0});
  CHECK(tau_maps.lambda == std::vector<int>{1, 2, 0});

  MarkMaps sigma_maps = mark_maps(sigma_113());
  CHECK(sigma_maps.rho == sigma_maps.lambda);

  auto tri = make_alphabet({"0", "1", "2"});
  MarkMaps perm_maps = mark_maps(permutation_morphism(tri, {2, 0, 1}));
  CHECK(perm_maps.rho == std::vector<int>{2, 0, 1});
  CHECK(perm_maps.lambda == std::vector<int>{2, 0, 1});

  CHECK_THROWS_AS(mark_maps(parse_morphism("0->00;1->0")), precondition_error);
}

TEST_CASE("markedness") {
  Markedness tau = markedness(tribonacci());
  CHECK(tau.marked);
  CHECK_FALSE(tau.well_marked);

  Morphism tau3 = compose(tribonacci(), compose(tribonacci(), tribonacci()));
  CHECK(markedness(tau3).well_marked);

  CHECK(markedness(sigma_113()).well_marked);
}

TEST_CASE("smallest well-marked power") {
  CHECK(well_marked_power(tribonacci()) == 3);
  CHECK(well_marked_power(sigma_113()) == 1);
  auto tri = make_alphabet({"0", "1", "2"});
  CHECK(well_marked_power(ar_psi(tri, 1)) == 1);

  SECTION("the third power's extremal conjugates") {
    Morphism tau3 = compose(tribonacci(), compose(tribonacci(), tribonacci()));
    ConjugationChain chain = conjugation_chain(tau3);
    CHECK(format_morphism(chain.rightmost()) == "0->0102010;1->010201;2->0102");
    CHECK(format_morphism(chain.leftmost()) == "0->0102010;1->102010;2->2010");
  }

  SECTION("preconditions") {
    CHECK_THROWS_AS(well_marked_power(class_p_not_pret()), precondition_error);
  }
}

TEST_CASE("marker uniqueness over a corpus") {
  for (const Morphism& phi : pret_corpus()) CHECK(count_verified_candidates(phi) == 1);

  SECTION("random morphisms verify at most one candidate") {
    std::mt19937 rng(4242);
    auto bin = make_alphabet({"0", "1"});
    std::uniform_int_distribution<std::size_t> len_dist(1, 5);
    for (int rep = 0; rep < 300; ++rep) {
      std::vector<Word> images = {oracles::random_word(rng, bin, len_dist(rng)),
                                  oracles::random_word(rng, bin, len_dist(rng))};
      Morphism phi(bin, bin, images);
      if (is_cyclic(phi)) continue;
      CHECK(count_verified_candidates(phi) <= 1);
    }
  }
}

TEST_CASE("marker of a composition") {
  Morphism composed = compose(phi1(), phi2());
  auto w = pret_marker(composed);
  REQUIRE(w.has_value());
  Word expected = phi1().apply(pret_marker(phi2())->marker) + pret_marker(phi1())->marker;
  CHECK(w->marker == expected);

  SECTION("holds across the corpus") {
    auto corpus = pret_corpus();
    for (const Morphism& sigma : corpus)
      for (const Morphism& phi : corpus) {
        if (!same_alphabet(phi.codomain(), sigma.domain())) continue;
        auto w_phi = pret_marker(phi);
        auto w_sigma = pret_marker(sigma);
        if (!w_phi || !w_sigma) continue;
        auto w_comp = pret_marker(compose(sigma, phi));
        REQUIRE(w_comp.has_value());
        CHECK(w_comp->marker == sigma.apply(w_phi->marker) + w_sigma->marker);
      }
  }
}

TEST_CASE("palindromes transfer through marked images") {
  auto bin = make_alphabet({"0", "1"});
  for (const Morphism& phi : {phi1(), phi2()}) {
    const Word w = pret_marker(phi)->marker;
    for (std::size_t len = 0; len <= 8; ++len) {
      for (const auto& letters : oracles::all_words(2, len)) {
        Word u(bin, letters);
        Word image = phi.apply(u) + w;
        REQUIRE(image.mirror() == phi.apply(u.mirror()) + w);
        REQUIRE(u.is_palindrome() == image.is_palindrome());
      }
    }
  }
}

TEST_CASE("marker occurrence law") {
  std::mt19937 rng(31337);
  for (const Morphism& phi : {phi1(), phi2(), tribonacci(), eta_rs()}) {
    const Word w = pret_marker(phi)->marker;
    for (int rep = 0; rep < 60; ++rep) {
      std::uniform_int_distribution<std::size_t> len_dist(0, 8);
      Word v = oracles::random_word(rng, phi.domain(), len_dist(rng));
      auto occ = occurrences(phi.apply(v) + w, w);
      REQUIRE(occ.size() == v.size() + 1);
      CHECK(occ.front() == 0);
    }
  }
}

TEST_CASE("right conjugates stay marked, growing by one letter on each side") {
  for (const Morphism& phi : pret_corpus()) {
    ConjugationChain chain = conjugation_chain(phi);
    std::optional<Word> prev_marker;
    for (std::size_t t = chain.input_index; t < chain.positions.size(); ++t) {
      auto w = pret_marker(chain.positions[t]);
      REQUIRE(w.has_value());
      if (prev_marker && t > chain.input_index) {
        // one right-conjugation step wraps the marker in the popped letter
        REQUIRE(w->marker.size() == prev_marker->size() + 2);
        CHECK(w->marker.subword(1, prev_marker->size()) == *prev_marker);
        CHECK(w->marker.front() == w->marker.back());
      }
      prev_marker = w->marker;
    }
  }
}

TEST_CASE("for a rightmost form the marker is the conjugating word and rho = lambda") {
  Morphism sigma_r = rightmost_conjugate(sigma_113());
  auto w = pret_marker(sigma_r);
  REQUIRE(w.has_value());
  CHECK(w->marker.str() == "101");
  ConjugationChain chain = conjugation_chain(sigma_r);
  CHECK(w->marker == chain.conj_words.back());

  auto tau_w = pret_marker(tribonacci());
  REQUIRE(tau_w.has_value());
  CHECK(tau_w->marker == conjugation_chain(tribonacci()).conj_words.back());

  for (const Morphism& phi : {sigma_r, tribonacci()}) {
    MarkMaps maps = mark_maps(phi);
    CHECK(maps.rho == maps.lambda);
    const Word marker = pret_marker(phi)->marker;
    const Morphism left = conjugation_chain(phi).leftmost();
    for (int a = 0; a < phi.domain()->size(); ++a)
      CHECK(phi.image(a) + marker == marker + left.image(a));
  }
}

TEST_CASE("a marker implies conjugacy to a palindromic split, not conversely") {
  for (const Morphism& phi : pret_corpus())
    if (pret_marker(phi)) CHECK(conjugate_to_class_p(phi));
  CHECK(conjugate_to_class_p(class_p_not_pret()));
  CHECK_FALSE(pret_marker(rightmost_conjugate(class_p_not_pret())).has_value());
}
