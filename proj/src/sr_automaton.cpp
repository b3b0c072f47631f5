#include "lrambig/sr_automaton.hpp"

#include <algorithm>
#include <tuple>

namespace lrambig {

std::set<StateId> opening(ProductionId p, StateId state, const CharacteristicAutomaton& ca, const AugmentedGrammar& g) {
  // Walk rhs(p) right to left over reversed transitions.
  std::vector<std::vector<std::pair<SymbolId, StateId>>> reverse(ca.size());
  for (std::size_t from = 0; from < ca.size(); ++from)
    for (const auto& [x, to] : ca.transitions[from])
      reverse[static_cast<std::size_t>(to)].push_back({x, static_cast<StateId>(from)});

  std::set<StateId> frontier{state};
  const auto& rhs = g.production(p).rhs;
  for (auto it = rhs.rbegin(); it != rhs.rend() && !frontier.empty(); ++it) {
    std::set<StateId> next;
    for (StateId q : frontier)
      for (const auto& [x, from] : reverse[static_cast<std::size_t>(q)])
        if (x == *it) next.insert(from);
    frontier = std::move(next);
  }
  return frontier;
}

SRAutomaton::SRAutomaton(const ParsingTable& table) {
  const auto& ca = table.automaton;
  const auto& g = table.grammar;
  initial_ = ca.initial;
  final_ = ca.final_state;
  plain_.resize(ca.size());
  prospective_.resize(ca.size());
  for (const auto& p : g.productions) {
    rhs_length_.push_back(p.rhs.size());
    max_rhs_ = std::max(max_rhs_, p.rhs.size());
  }

  for (std::size_t s = 0; s < ca.size(); ++s) {
    for (const auto& [x, to] : ca.transitions[s])
      if (!g.is_nonterminal(x)) plain_[s][x] = to;
  }

  for (const auto& [key, lookaheads] : table.lookahead.map) {
    const auto [p, state] = key;
    if (lookaheads.empty()) continue;
    SymbolId lhs = g.production(p).lhs;
    for (StateId r : opening(p, state, ca, g)) {
      auto q = ca.go(r, lhs);
      if (!q) continue;
      for (SymbolId x : lookaheads) prospective_[static_cast<std::size_t>(state)].push_back({x, r, p, *q});
    }
  }
  for (auto& edges : prospective_) {
    std::sort(edges.begin(), edges.end(), [](const ProspectiveEdge& a, const ProspectiveEdge& b) {
      return std::tie(a.x, a.production, a.opening) < std::tie(b.x, b.production, b.opening);
    });
  }
}

std::vector<SREdge> SRAutomaton::edges() const {
  std::vector<SREdge> out;
  for (std::size_t s = 0; s < plain_.size(); ++s) {
    auto src = static_cast<StateId>(s);
    for (const auto& [x, to] : plain_[s]) out.push_back({src, SRLabel::plain(x), to});
    for (const auto& e : prospective_[s]) out.push_back({src, SRLabel::reduce(e.x, e.opening, e.production), e.target});
  }
  std::sort(out.begin(), out.end());
  return out;
}

SRAutomaton build_sr_automaton(const ParsingTable& table) { return SRAutomaton(table); }

std::string format_label(const SRLabel& l, const AugmentedGrammar& g) {
  if (!l.prospective) return g.name(l.x);
  return "[" + g.name(l.x) + "]:" + std::to_string(l.opening) + ":p" + std::to_string(l.production);
}

}  // namespace lrambig
