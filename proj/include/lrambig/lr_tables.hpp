#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "lrambig/grammar.hpp"

namespace lrambig {

struct Item {
  ProductionId production = 0;
  int dot = 0;

  auto operator<=>(const Item&) const = default;
};

using ItemSet = std::vector<Item>;  // sorted, unique

struct State {
  StateId id = 0;
  ItemSet kernel;
  ItemSet items;  // closure of kernel
};

/// LR(0) collection. States are numbered in BFS order from the initial
/// state, visiting successors in AugmentedGrammar::symbol_less order.
struct CharacteristicAutomaton {
  std::vector<State> states;
  std::vector<std::map<SymbolId, StateId>> transitions;
  StateId initial = 0;
  StateId final_state = 0;

  std::optional<StateId> go(StateId from, SymbolId x) const;
  std::size_t size() const { return states.size(); }
};

ItemSet closure(const ItemSet& items, const AugmentedGrammar& g);
CharacteristicAutomaton build_characteristic_automaton(const AugmentedGrammar& g);

struct FirstSets {
  std::vector<std::set<SymbolId>> first;  // indexed by symbol id; {x} for terminals
  std::vector<bool> nullable;

  /// FIRST of a symbol string; `nullable_out` reports whether it derives ε.
  std::set<SymbolId> of(const std::vector<SymbolId>& seq, std::size_t from, bool* nullable_out = nullptr) const;
};

FirstSets first_sets(const AugmentedGrammar& g);
std::vector<std::set<SymbolId>> follow_sets(const AugmentedGrammar& g, const FirstSets& first);
inline std::vector<std::set<SymbolId>> follow_sets(const AugmentedGrammar& g) { return follow_sets(g, first_sets(g)); }

enum class Flavor { slr1, lalr1 };

const char* flavor_name(Flavor f);

struct LookaheadFn {
  Flavor flavor = Flavor::lalr1;
  std::map<std::pair<ProductionId, StateId>, std::set<SymbolId>> map;

  /// Empty set when (p, state) has no completed item.
  const std::set<SymbolId>& at(ProductionId p, StateId state) const;
};

LookaheadFn lookahead_slr(const CharacteristicAutomaton& ca, const AugmentedGrammar& g);
LookaheadFn lookahead_lalr(const CharacteristicAutomaton& ca, const AugmentedGrammar& g);

enum class ConflictKind { shift_reduce, reduce_reduce };

const char* conflict_kind_name(ConflictKind k);

struct Conflict {
  StateId state = 0;
  SymbolId symbol = 0;
  ConflictKind kind = ConflictKind::shift_reduce;
  std::optional<StateId> shift_target;
  std::vector<ProductionId> reductions;  // ascending

  bool operator==(const Conflict&) const = default;
};

std::vector<Conflict> find_conflicts(const CharacteristicAutomaton& ca, const LookaheadFn& la);

/// The pair ⟨automaton, lookahead function⟩ plus the conflicts it has.
struct ParsingTable {
  AugmentedGrammar grammar;
  CharacteristicAutomaton automaton;
  LookaheadFn lookahead;
  std::vector<Conflict> conflicts;

  /// Reductions licensed at (state, x), ascending by production id.
  std::vector<ProductionId> reductions(StateId state, SymbolId x) const;
};

ParsingTable build_parsing_table(const Grammar& g, Flavor flavor);
ParsingTable build_parsing_table(AugmentedGrammar g, Flavor flavor);

}  // namespace lrambig
