#include "lrambig/lr_tables.hpp"

#include <algorithm>
#include <deque>

namespace lrambig {

namespace {

const std::set<SymbolId> kEmptySet;

void normalize(ItemSet& items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
}

std::optional<SymbolId> symbol_after_dot(const AugmentedGrammar& g, const Item& it) {
  const auto& rhs = g.production(it.production).rhs;
  if (it.dot >= static_cast<int>(rhs.size())) return std::nullopt;
  return rhs[static_cast<std::size_t>(it.dot)];
}

// Successor symbols of an item set in enumeration order.
std::vector<SymbolId> outgoing_symbols(const ItemSet& items, const AugmentedGrammar& g) {
  std::vector<SymbolId> syms;
  for (const auto& it : items)
    if (auto s = symbol_after_dot(g, it)) syms.push_back(*s);
  std::sort(syms.begin(), syms.end(), [&](SymbolId a, SymbolId b) { return g.symbol_less(a, b); });
  syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
  return syms;
}

ItemSet advance(const ItemSet& items, SymbolId x, const AugmentedGrammar& g) {
  ItemSet kernel;
  for (const auto& it : items)
    if (symbol_after_dot(g, it) == x) kernel.push_back({it.production, it.dot + 1});
  normalize(kernel);
  return kernel;
}

// LR(1) items for the merge-based LALR construction. A lookahead of -1
// marks the augmenting item, which is never reduced.
struct Lr1Item {
  ProductionId production;
  int dot;
  SymbolId lookahead;
  auto operator<=>(const Lr1Item&) const = default;
};

using Lr1Set = std::vector<Lr1Item>;

Lr1Set lr1_closure(Lr1Set items, const AugmentedGrammar& g, const FirstSets& first) {
  std::set<Lr1Item> seen(items.begin(), items.end());
  std::vector<Lr1Item> work(items.begin(), items.end());
  while (!work.empty()) {
    Lr1Item it = work.back();
    work.pop_back();
    const auto& rhs = g.production(it.production).rhs;
    if (it.dot >= static_cast<int>(rhs.size())) continue;
    SymbolId b = rhs[static_cast<std::size_t>(it.dot)];
    if (!g.is_nonterminal(b)) continue;
    bool rest_nullable = false;
    std::set<SymbolId> la = first.of(rhs, static_cast<std::size_t>(it.dot) + 1, &rest_nullable);
    if (rest_nullable && it.lookahead >= 0) la.insert(it.lookahead);
    for (const auto& p : g.productions) {
      if (p.lhs != b) continue;
      for (SymbolId x : la) {
        Lr1Item next{p.id, 0, x};
        if (seen.insert(next).second) work.push_back(next);
      }
    }
  }
  return Lr1Set(seen.begin(), seen.end());
}

ItemSet core_of(const Lr1Set& items) {
  ItemSet core;
  for (const auto& it : items) core.push_back({it.production, it.dot});
  normalize(core);
  return core;
}

}  // namespace

std::optional<StateId> CharacteristicAutomaton::go(StateId from, SymbolId x) const {
  const auto& row = transitions.at(static_cast<std::size_t>(from));
  auto it = row.find(x);
  if (it == row.end()) return std::nullopt;
  return it->second;
}

ItemSet closure(const ItemSet& items, const AugmentedGrammar& g) {
  ItemSet out = items;
  normalize(out);
  std::vector<bool> expanded(g.symbol_count(), false);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto b = symbol_after_dot(g, out[i]);
    if (!b || !g.is_nonterminal(*b) || expanded[static_cast<std::size_t>(*b)]) continue;
    expanded[static_cast<std::size_t>(*b)] = true;
    for (const auto& p : g.productions)
      if (p.lhs == *b) out.push_back({p.id, 0});
  }
  normalize(out);
  return out;
}

CharacteristicAutomaton build_characteristic_automaton(const AugmentedGrammar& g) {
  CharacteristicAutomaton ca;
  std::map<ItemSet, StateId> by_kernel;

  auto add_state = [&](ItemSet kernel) {
    auto id = static_cast<StateId>(ca.states.size());
    by_kernel.emplace(kernel, id);
    State s{id, kernel, closure(kernel, g)};
    ca.states.push_back(std::move(s));
    ca.transitions.emplace_back();
    return id;
  };

  add_state({{0, 0}});
  for (std::size_t i = 0; i < ca.states.size(); ++i) {
    ItemSet items = ca.states[i].items;
    for (SymbolId x : outgoing_symbols(items, g)) {
      ItemSet kernel = advance(items, x, g);
      auto found = by_kernel.find(kernel);
      StateId target = found != by_kernel.end() ? found->second : add_state(kernel);
      ca.transitions[i][x] = target;
    }
  }

  const Item accept{0, 2};
  for (const auto& s : ca.states)
    if (std::binary_search(s.kernel.begin(), s.kernel.end(), accept)) ca.final_state = s.id;
  return ca;
}

std::set<SymbolId> FirstSets::of(const std::vector<SymbolId>& seq, std::size_t from, bool* nullable_out) const {
  std::set<SymbolId> out;
  bool all_nullable = true;
  for (std::size_t i = from; i < seq.size(); ++i) {
    auto s = static_cast<std::size_t>(seq[i]);
    out.insert(first[s].begin(), first[s].end());
    if (!nullable[s]) {
      all_nullable = false;
      break;
    }
  }
  if (nullable_out) *nullable_out = all_nullable;
  return out;
}

FirstSets first_sets(const AugmentedGrammar& g) {
  FirstSets fs;
  fs.first.resize(g.symbol_count());
  fs.nullable.assign(g.symbol_count(), false);
  for (SymbolId t : g.terminals()) fs.first[static_cast<std::size_t>(t)] = {t};

  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      auto a = static_cast<std::size_t>(p.lhs);
      bool nullable = false;
      std::set<SymbolId> add = fs.of(p.rhs, 0, &nullable);
      std::size_t before = fs.first[a].size();
      fs.first[a].insert(add.begin(), add.end());
      if (fs.first[a].size() != before) changed = true;
      if (nullable && !fs.nullable[a]) fs.nullable[a] = changed = true;
    }
  }
  return fs;
}

std::vector<std::set<SymbolId>> follow_sets(const AugmentedGrammar& g, const FirstSets& first) {
  std::vector<std::set<SymbolId>> follow(g.symbol_count());
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      for (std::size_t i = 0; i < p.rhs.size(); ++i) {
        auto b = static_cast<std::size_t>(p.rhs[i]);
        if (!g.is_nonterminal(p.rhs[i])) continue;
        bool rest_nullable = false;
        std::set<SymbolId> add = first.of(p.rhs, i + 1, &rest_nullable);
        if (rest_nullable) {
          const auto& fa = follow[static_cast<std::size_t>(p.lhs)];
          add.insert(fa.begin(), fa.end());
        }
        std::size_t before = follow[b].size();
        follow[b].insert(add.begin(), add.end());
        if (follow[b].size() != before) changed = true;
      }
    }
  }
  return follow;
}

const char* flavor_name(Flavor f) { return f == Flavor::slr1 ? "SLR(1)" : "LALR(1)"; }

const std::set<SymbolId>& LookaheadFn::at(ProductionId p, StateId state) const {
  auto it = map.find({p, state});
  return it == map.end() ? kEmptySet : it->second;
}

LookaheadFn lookahead_slr(const CharacteristicAutomaton& ca, const AugmentedGrammar& g) {
  auto follow = follow_sets(g);
  LookaheadFn la;
  la.flavor = Flavor::slr1;
  for (const auto& s : ca.states) {
    for (const auto& it : s.items) {
      const auto& p = g.production(it.production);
      if (it.dot != static_cast<int>(p.rhs.size())) continue;
      la.map[{p.id, s.id}] = follow[static_cast<std::size_t>(p.lhs)];
    }
  }
  return la;
}

LookaheadFn lookahead_lalr(const CharacteristicAutomaton& ca, const AugmentedGrammar& g) {
  FirstSets first = first_sets(g);

  std::map<ItemSet, StateId> lr0_by_core;
  for (const auto& s : ca.states) lr0_by_core.emplace(s.items, s.id);

  LookaheadFn la;
  la.flavor = Flavor::lalr1;
  for (const auto& s : ca.states)
    for (const auto& it : s.items)
      if (it.dot == static_cast<int>(g.production(it.production).rhs.size())) la.map[{it.production, s.id}];

  // Canonical LR(1) collection; every state's core is mapped back onto the
  // LR(0) state with the same closure and its reduce lookaheads are merged.
  std::map<Lr1Set, int> seen;
  std::deque<Lr1Set> work;
  Lr1Set start = lr1_closure({{0, 0, -1}}, g, first);
  seen.emplace(start, 0);
  work.push_back(start);
  while (!work.empty()) {
    Lr1Set items = std::move(work.front());
    work.pop_front();
    StateId core_state = lr0_by_core.at(core_of(items));
    for (const auto& it : items) {
      if (it.dot == static_cast<int>(g.production(it.production).rhs.size()) && it.lookahead >= 0)
        la.map[{it.production, core_state}].insert(it.lookahead);
    }
    std::set<SymbolId> symbols;
    for (const auto& it : items) {
      const auto& rhs = g.production(it.production).rhs;
      if (it.dot < static_cast<int>(rhs.size())) symbols.insert(rhs[static_cast<std::size_t>(it.dot)]);
    }
    for (SymbolId x : symbols) {
      Lr1Set kernel;
      for (const auto& it : items) {
        const auto& rhs = g.production(it.production).rhs;
        if (it.dot < static_cast<int>(rhs.size()) && rhs[static_cast<std::size_t>(it.dot)] == x)
          kernel.push_back({it.production, it.dot + 1, it.lookahead});
      }
      Lr1Set next = lr1_closure(std::move(kernel), g, first);
      if (seen.emplace(next, static_cast<int>(seen.size())).second) work.push_back(std::move(next));
    }
  }
  return la;
}

const char* conflict_kind_name(ConflictKind k) { return k == ConflictKind::shift_reduce ? "shift/reduce" : "reduce/reduce"; }

std::vector<Conflict> find_conflicts(const CharacteristicAutomaton& ca, const LookaheadFn& la) {
  std::map<std::pair<StateId, SymbolId>, std::vector<ProductionId>> reduces;
  for (const auto& [key, symbols] : la.map)
    for (SymbolId x : symbols) reduces[{key.second, x}].push_back(key.first);

  std::vector<Conflict> out;
  for (auto& [key, prods] : reduces) {
    std::sort(prods.begin(), prods.end());
    auto shift = ca.go(key.first, key.second);
    if (prods.size() + (shift ? 1 : 0) < 2) continue;
    Conflict c;
    c.state = key.first;
    c.symbol = key.second;
    c.kind = shift ? ConflictKind::shift_reduce : ConflictKind::reduce_reduce;
    c.shift_target = shift;
    c.reductions = prods;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ProductionId> ParsingTable::reductions(StateId state, SymbolId x) const {
  std::vector<ProductionId> out;
  for (const auto& it : automaton.states.at(static_cast<std::size_t>(state)).items) {
    if (it.dot != static_cast<int>(grammar.production(it.production).rhs.size())) continue;
    if (lookahead.at(it.production, state).count(x)) out.push_back(it.production);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ParsingTable build_parsing_table(AugmentedGrammar g, Flavor flavor) {
  ParsingTable t;
  t.automaton = build_characteristic_automaton(g);
  t.lookahead = flavor == Flavor::slr1 ? lookahead_slr(t.automaton, g) : lookahead_lalr(t.automaton, g);
  t.conflicts = find_conflicts(t.automaton, t.lookahead);
  t.grammar = std::move(g);
  return t;
}

ParsingTable build_parsing_table(const Grammar& g, Flavor flavor) { return build_parsing_table(augment(g), flavor); }

}  // namespace lrambig
