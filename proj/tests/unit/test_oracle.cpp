#include <doctest.h>

#include <functional>

#include "corpus.hpp"
#include "lrambig/detector.hpp"
#include "lrambig/oracle.hpp"

using namespace lrambig;

namespace {

using Word = std::vector<SymbolId>;

Word words(const Grammar& g, std::initializer_list<const char*> tokens) {
  Word w;
  for (const char* t : tokens) w.push_back(*g.find(t));
  return w;
}

// Parse trees of an ε-free grammar without unit cycles, counted over spans.
std::size_t count_trees(const Grammar& g, const Word& w) {
  std::map<std::tuple<SymbolId, std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(SymbolId, std::size_t, std::size_t)> sym;
  std::function<std::size_t(const std::vector<SymbolId>&, std::size_t, std::size_t, std::size_t)> seq;
  sym = [&](SymbolId s, std::size_t i, std::size_t j) -> std::size_t {
    if (!g.is_nonterminal(s)) return j == i + 1 && w[i] == s ? 1 : 0;
    auto key = std::make_tuple(s, i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t n = 0;
    for (const auto& p : g.productions)
      if (p.lhs == s) n += seq(p.rhs, 0, i, j);
    memo[key] = n;
    return n;
  };
  seq = [&](const std::vector<SymbolId>& rhs, std::size_t k, std::size_t i, std::size_t j) -> std::size_t {
    if (k == rhs.size()) return i == j ? 1 : 0;
    std::size_t n = 0;
    std::size_t rest = rhs.size() - k - 1;  // each remaining symbol covers at least one token
    for (std::size_t m = i + 1; m + rest <= j; ++m) {
      std::size_t left = sym(rhs[k], i, m);
      if (left) n += left * seq(rhs, k + 1, m, j);
    }
    return n;
  };
  return sym(g.start, 0, w.size());
}

}  // namespace

TEST_CASE("enumeration examples") {
  Grammar g1 = parse_grammar("E -> E + E | a");
  auto s = enumerate_sentences(g1, 5);
  CHECK(s.size() == 3);
  CHECK(s.at(words(g1, {"a"})) == 1);
  CHECK(s.at(words(g1, {"a", "+", "a"})) == 1);
  CHECK(s.at(words(g1, {"a", "+", "a", "+", "a"})) == 2);

  Grammar single = parse_grammar("S -> a");
  CHECK(enumerate_sentences(single, 3) == std::map<Word, std::size_t>{{words(single, {"a"}), 1}});

  Grammar rr = parse_grammar("S -> A | B\nA -> a\nB -> a");
  CHECK(enumerate_sentences(rr, 1) == std::map<Word, std::size_t>{{words(rr, {"a"}), 2}});
}

TEST_CASE("epsilon productions") {
  Grammar g = parse_grammar("S -> a S b | %eps");
  auto s = enumerate_sentences(g, 4);
  CHECK(s.size() == 3);
  CHECK(s.at({}) == 1);
  CHECK(s.at(words(g, {"a", "a", "b", "b"})) == 1);

  Grammar pair = testing_support::load_corpus("optional_pair");
  CHECK(count_derivations(pair, words(pair, {"a"})) == 2);
  CHECK(count_derivations(pair, {}) == 1);
}

TEST_CASE("counts agree with span counting") {
  for (const char* name : {"g1", "expr_ambiguous", "concat", "dangling_else", "rr_twin", "both_sides", "odd_as",
                           "expr_stratified", "assign", "lalr_finite"}) {
    CAPTURE(name);
    Grammar g = testing_support::load_corpus(name);
    auto sentences = enumerate_sentences(g, 7);
    for (const auto& [w, n] : sentences) CHECK(n == count_trees(g, w));
    for (const auto& [w, n] : sentences) CHECK(count_derivations(g, w) == n);
  }
  Grammar concat = testing_support::load_corpus("concat");
  // Catalan numbers.
  CHECK(count_derivations(concat, words(concat, {"a", "a", "a", "a"})) == 5);
  CHECK(count_derivations(concat, words(concat, {"a", "a", "a", "a", "a"})) == 14);
}

TEST_CASE("words outside the language count zero") {
  Grammar g1 = parse_grammar("E -> E + E | a");
  CHECK(count_derivations(g1, words(g1, {"+", "a"})) == 0);
  CHECK(count_derivations(g1, words(g1, {"a", "+"})) == 0);
  CHECK(count_derivations(g1, {}) == 0);
}

TEST_CASE("rightmost derivation replay") {
  Grammar g1 = parse_grammar("E -> E + E | a");
  Word w = words(g1, {"a", "+", "a", "+", "a"});
  CHECK(is_rightmost_derivation(g1, w, {2, 2, 2, 1, 1}));
  CHECK(is_rightmost_derivation(g1, w, {2, 2, 1, 2, 1}));
  CHECK_FALSE(is_rightmost_derivation(g1, w, {2, 2, 1, 1, 2}));
  CHECK_FALSE(is_rightmost_derivation(g1, w, {2, 1}));
  CHECK_FALSE(is_rightmost_derivation(g1, w, {7}));
}

TEST_CASE("witness confirmation") {
  Grammar g1 = parse_grammar("E -> E + E | a");
  Word w = words(g1, {"a", "+", "a", "+", "a"});
  Confirmation c = confirm_witness(g1, w, {2, 2, 2, 1, 1}, {2, 2, 1, 2, 1});
  CHECK(c.status == ConfirmStatus::confirmed);
  CHECK(c.derivations == 2);
  CHECK(confirm_witness(g1, w, {2, 2, 2, 1, 1}, {2, 2, 2, 1, 1}).status == ConfirmStatus::refuted);
  CHECK(confirm_witness(g1, w, {2, 2, 2, 1, 1}, {2, 1}).status == ConfirmStatus::refuted);

  Grammar de = testing_support::load_corpus("dangling_else");
  DetectResult r = detect(de, Flavor::lalr1);
  REQUIRE(r.verdict.witness);
  CHECK(confirm_witness(de, *r.verdict.witness).status == ConfirmStatus::confirmed);
  CHECK(count_derivations(de, words(de, {"i", "i", "a", "e", "a"})) == 2);
}

TEST_CASE("long words are left unverified") {
  Grammar g1 = parse_grammar("E -> E + E | a");
  Word w;
  for (int i = 0; i < 7; ++i) {
    if (i) w.push_back(*g1.find("+"));
    w.push_back(*g1.find("a"));
  }
  // Two distinct rightmost derivations of a 13-token word.
  std::vector<ProductionId> right_assoc, left_assoc;
  for (int i = 0; i < 7; ++i) right_assoc.push_back(2);
  for (int i = 0; i < 6; ++i) right_assoc.push_back(1);
  left_assoc = {2, 2, 1};
  for (int i = 0; i < 5; ++i) {
    left_assoc.push_back(2);
    left_assoc.push_back(1);
  }
  REQUIRE(is_rightmost_derivation(g1, w, right_assoc));
  REQUIRE(is_rightmost_derivation(g1, w, left_assoc));
  CHECK(confirm_witness(g1, w, right_assoc, left_assoc).status == ConfirmStatus::unverified);
}

TEST_CASE("bounds and cycles") {
  Grammar g1 = parse_grammar("E -> E + E | a");
  CHECK_THROWS_AS(enumerate_sentences(g1, kOracleMaxLength + 1), OracleError);
  CHECK_THROWS_AS(enumerate_sentences(g1, -1), OracleError);
  Grammar cyclic = parse_grammar("S -> A | a\nA -> S");
  CHECK_THROWS_AS(enumerate_sentences(cyclic, 2), OracleError);
}
