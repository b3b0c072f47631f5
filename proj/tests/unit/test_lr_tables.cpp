#include <doctest.h>

#include "corpus.hpp"
#include "lrambig/lr_tables.hpp"
#include "oracles.hpp"

using namespace lrambig;

namespace {

AugmentedGrammar aug(const char* text) { return augment(parse_grammar(text)); }

SymbolId sym(const AugmentedGrammar& g, const char* name) {
  for (SymbolId s = 0; s < static_cast<SymbolId>(g.symbol_count()); ++s)
    if (g.name(s) == name) return s;
  FAIL("unknown symbol " << name);
  return -1;
}

std::set<SymbolId> syms(const AugmentedGrammar& g, std::initializer_list<const char*> names) {
  std::set<SymbolId> out;
  for (const char* n : names) out.insert(sym(g, n));
  return out;
}

StateId state_with(const CharacteristicAutomaton& ca, Item it) {
  for (const auto& s : ca.states)
    if (std::find(s.items.begin(), s.items.end(), it) != s.items.end()) return s.id;
  FAIL("no state has the item");
  return -1;
}

}  // namespace

TEST_CASE("closure on G1") {
  AugmentedGrammar g = aug("E -> E + E | a");
  CHECK(closure({{0, 0}}, g) == ItemSet{{0, 0}, {1, 0}, {2, 0}});
  CHECK(closure({{2, 1}}, g) == ItemSet{{2, 1}});
  CHECK(closure({{1, 2}}, g) == ItemSet{{1, 0}, {1, 2}, {2, 0}});
}

TEST_CASE("characteristic automaton of G1 has the published numbering") {
  AugmentedGrammar g = aug("E -> E + E | a");
  CharacteristicAutomaton ca = build_characteristic_automaton(g);
  const SymbolId a = sym(g, "a"), plus = sym(g, "+"), E = sym(g, "E"), end = g.endmarker;
  CHECK(ca.size() == 6);
  CHECK(ca.initial == 0);
  CHECK(ca.final_state == 3);
  CHECK(ca.go(0, a) == 1);
  CHECK(ca.go(0, E) == 2);
  CHECK(ca.go(2, end) == 3);
  CHECK(ca.go(2, plus) == 4);
  CHECK(ca.go(4, a) == 1);
  CHECK(ca.go(4, E) == 5);
  CHECK(ca.go(5, plus) == 4);
  CHECK_FALSE(ca.go(1, plus).has_value());
}

TEST_CASE("automaton structure") {
  SUBCASE("single production") {
    AugmentedGrammar g = aug("S -> a");
    CharacteristicAutomaton ca = build_characteristic_automaton(g);
    StateId s1 = *ca.go(0, sym(g, "S"));
    StateId s2 = *ca.go(s1, g.endmarker);
    CHECK(s2 == ca.final_state);
    CHECK(ca.states[static_cast<std::size_t>(s1)].kernel == ItemSet{{0, 1}});
    CHECK(ca.states[static_cast<std::size_t>(s2)].kernel == ItemSet{{0, 2}});
  }
  SUBCASE("epsilon production") {
    AugmentedGrammar g = aug("S -> %eps");
    CharacteristicAutomaton ca = build_characteristic_automaton(g);
    const auto& items = ca.states[0].items;
    CHECK(std::find(items.begin(), items.end(), Item{1, 0}) != items.end());
    CHECK(ca.go(0, sym(g, "S")).has_value());
  }
  SUBCASE("invariants over the corpus") {
    for (const auto& e : testing_support::corpus()) {
      CAPTURE(e.name);
      AugmentedGrammar g = augment(testing_support::load_corpus(e.name));
      CharacteristicAutomaton ca = build_characteristic_automaton(g);
      std::set<ItemSet> kernels;
      std::vector<int> incoming(ca.size(), 0);
      for (const auto& s : ca.states) {
        CHECK(kernels.insert(s.kernel).second);
        CHECK(closure(s.kernel, g) == s.items);
        for (const auto& it : s.items) CHECK(it.dot <= static_cast<int>(g.production(it.production).rhs.size()));
      }
      for (const auto& t : ca.transitions)
        for (const auto& [x, to] : t) ++incoming[static_cast<std::size_t>(to)];
      for (std::size_t s = 1; s < ca.size(); ++s) CHECK(incoming[s] > 0);
      const auto& fin = ca.states[static_cast<std::size_t>(ca.final_state)].items;
      CHECK(std::find(fin.begin(), fin.end(), Item{0, 2}) != fin.end());
      // Rebuilding gives the same numbering.
      CharacteristicAutomaton again = build_characteristic_automaton(g);
      CHECK(again.transitions == ca.transitions);
    }
  }
}

TEST_CASE("first and follow sets") {
  {
    AugmentedGrammar g = aug("E -> E + E | a");
    auto follow = follow_sets(g);
    CHECK(follow[static_cast<std::size_t>(sym(g, "E"))] == syms(g, {"+", "$"}));
  }
  {
    AugmentedGrammar g = aug("S -> a");
    FirstSets f = first_sets(g);
    CHECK(f.first[static_cast<std::size_t>(sym(g, "S"))] == syms(g, {"a"}));
    CHECK(follow_sets(g, f)[static_cast<std::size_t>(sym(g, "S"))] == syms(g, {"$"}));
  }
  {
    AugmentedGrammar g = aug("S -> A B\nA -> %eps\nB -> b");
    FirstSets f = first_sets(g);
    CHECK(f.nullable[static_cast<std::size_t>(sym(g, "A"))]);
    CHECK_FALSE(f.nullable[static_cast<std::size_t>(sym(g, "S"))]);
    CHECK(f.first[static_cast<std::size_t>(sym(g, "S"))] == syms(g, {"b"}));
  }
}

TEST_CASE("SLR and LALR lookaheads on G1") {
  AugmentedGrammar g = aug("E -> E + E | a");
  CharacteristicAutomaton ca = build_characteristic_automaton(g);
  for (auto la : {lookahead_slr(ca, g), lookahead_lalr(ca, g)}) {
    CHECK(la.at(2, 1) == syms(g, {"+", "$"}));
    CHECK(la.at(1, 5) == syms(g, {"+", "$"}));
    CHECK(la.at(1, 1).empty());
  }
}

TEST_CASE("single production lookaheads") {
  AugmentedGrammar g = aug("S -> a");
  CharacteristicAutomaton ca = build_characteristic_automaton(g);
  StateId q = *ca.go(0, sym(g, "a"));
  CHECK(lookahead_slr(ca, g).at(1, q) == syms(g, {"$"}));
  CHECK(lookahead_lalr(ca, g).at(1, q) == syms(g, {"$"}));
}

TEST_CASE("LALR refines FOLLOW on the assignment grammar") {
  AugmentedGrammar g = aug("S -> L = R | R\nL -> * R | id\nR -> L");
  CharacteristicAutomaton ca = build_characteristic_automaton(g);
  StateId q = *ca.go(0, sym(g, "L"));
  const ProductionId r_to_l = 5;
  REQUIRE(g.format_production(r_to_l) == "R -> L");
  CHECK(lookahead_slr(ca, g).at(r_to_l, q) == syms(g, {"=", "$"}));
  CHECK(lookahead_lalr(ca, g).at(r_to_l, q) == syms(g, {"$"}));

  ParsingTable slr = build_parsing_table(parse_grammar("S -> L = R | R\nL -> * R | id\nR -> L"), Flavor::slr1);
  ParsingTable lalr = build_parsing_table(parse_grammar("S -> L = R | R\nL -> * R | id\nR -> L"), Flavor::lalr1);
  REQUIRE(slr.conflicts.size() == 1);
  CHECK(slr.conflicts[0].state == q);
  CHECK(slr.conflicts[0].symbol == sym(g, "="));
  CHECK(lalr.conflicts.empty());
}

TEST_CASE("LALR lookaheads agree with right sentential forms") {
  for (const auto& e : testing_support::corpus()) {
    CAPTURE(e.name);
    AugmentedGrammar g = augment(testing_support::load_corpus(e.name));
    CharacteristicAutomaton ca = build_characteristic_automaton(g);
    LookaheadFn lalr = lookahead_lalr(ca, g);
    LookaheadFn slr = lookahead_slr(ca, g);
    auto oracle = testing_support::lalr_by_sentential_forms(g, ca, 9);
    for (const auto& [key, set] : lalr.map) {
      CAPTURE(key.first);
      CAPTURE(key.second);
      const auto& s = slr.at(key.first, key.second);
      CHECK(std::includes(s.begin(), s.end(), set.begin(), set.end()));
      auto it = oracle.find(key);
      CHECK((it == oracle.end() ? std::set<SymbolId>{} : it->second) == set);
    }
    for (const auto& [key, set] : oracle) CHECK(lalr.map.count(key));
  }
}

TEST_CASE("conflicts") {
  SUBCASE("G1") {
    ParsingTable t = build_parsing_table(parse_grammar("E -> E + E | a"), Flavor::slr1);
    REQUIRE(t.conflicts.size() == 1);
    const Conflict& c = t.conflicts[0];
    CHECK(c.state == 5);
    CHECK(c.symbol == sym(t.grammar, "+"));
    CHECK(c.kind == ConflictKind::shift_reduce);
    CHECK(c.shift_target == 4);
    CHECK(c.reductions == std::vector<ProductionId>{1});
  }
  SUBCASE("deterministic") {
    CHECK(build_parsing_table(parse_grammar("S -> a"), Flavor::slr1).conflicts.empty());
    CHECK(build_parsing_table(parse_grammar("S -> a S b | %eps"), Flavor::lalr1).conflicts.empty());
  }
  SUBCASE("reduce/reduce") {
    ParsingTable t = build_parsing_table(parse_grammar("S -> A | B\nA -> a\nB -> a"), Flavor::slr1);
    REQUIRE(t.conflicts.size() == 1);
    const Conflict& c = t.conflicts[0];
    CHECK(c.kind == ConflictKind::reduce_reduce);
    CHECK(c.symbol == t.grammar.endmarker);
    CHECK_FALSE(c.shift_target.has_value());
    CHECK(c.reductions == std::vector<ProductionId>{3, 4});
  }
  SUBCASE("three-way reduce/reduce") {
    ParsingTable t = build_parsing_table(parse_grammar("S -> A | B | C\nA -> a\nB -> a\nC -> a"), Flavor::lalr1);
    REQUIRE(t.conflicts.size() == 1);
    CHECK(t.conflicts[0].reductions.size() == 3);
  }
}

TEST_CASE("conflict-free iff every cell has at most one directive") {
  for (const auto& e : testing_support::corpus()) {
    for (Flavor f : {Flavor::slr1, Flavor::lalr1}) {
      CAPTURE(e.name);
      ParsingTable t = build_parsing_table(testing_support::load_corpus(e.name), f);
      std::size_t cells = 0;
      for (StateId q = 0; q < static_cast<StateId>(t.automaton.size()); ++q)
        for (SymbolId x : t.grammar.terminals()) {
          std::size_t n = t.reductions(q, x).size() + (t.automaton.go(q, x) ? 1 : 0);
          if (n >= 2) ++cells;
        }
      CHECK(cells == t.conflicts.size());
    }
  }
}
