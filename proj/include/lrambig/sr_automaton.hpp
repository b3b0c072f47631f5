#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lrambig/lr_tables.hpp"

namespace lrambig {

/// Edge label: either a plain terminal `x` or a prospective triple
/// `[x]:R:p`.
struct SRLabel {
  SymbolId x = 0;
  bool prospective = false;
  StateId opening = -1;       // R, prospective only
  ProductionId production = -1;  // p, prospective only

  static SRLabel plain(SymbolId x) { return {x, false, -1, -1}; }
  static SRLabel reduce(SymbolId x, StateId r, ProductionId p) { return {x, true, r, p}; }

  auto operator<=>(const SRLabel&) const = default;
};

struct SREdge {
  StateId source = 0;
  SRLabel label;
  StateId target = 0;

  auto operator<=>(const SREdge&) const = default;
};

struct ProspectiveEdge {
  SymbolId x = 0;
  StateId opening = 0;
  ProductionId production = 0;
  StateId target = 0;
};

/// Shift edges for terminals and `$`, reduce edges `[x]:R:p` for every
/// lookahead x, every R in opening(p, P) with a goto on lhs(p).
class SRAutomaton {
 public:
  SRAutomaton() = default;
  SRAutomaton(const ParsingTable& table);

  StateId initial() const { return initial_; }
  StateId final_state() const { return final_; }
  std::size_t state_count() const { return plain_.size(); }

  const std::map<SymbolId, StateId>& plain(StateId p) const { return plain_.at(static_cast<std::size_t>(p)); }
  /// Reduce edges of `p`, sorted by (x, production, opening).
  const std::vector<ProspectiveEdge>& prospective(StateId p) const { return prospective_.at(static_cast<std::size_t>(p)); }

  std::size_t rhs_length(ProductionId p) const { return rhs_length_.at(static_cast<std::size_t>(p)); }
  std::size_t max_rhs_length() const { return max_rhs_; }

  /// The flat edge set, ordered.
  std::vector<SREdge> edges() const;

 private:
  StateId initial_ = 0;
  StateId final_ = 0;
  std::vector<std::map<SymbolId, StateId>> plain_;
  std::vector<std::vector<ProspectiveEdge>> prospective_;
  std::vector<std::size_t> rhs_length_;
  std::size_t max_rhs_ = 0;
};

/// All R with a path spelling rhs(p) from R to P in the characteristic
/// automaton. For ε-productions the result is {P}.
std::set<StateId> opening(ProductionId p, StateId state, const CharacteristicAutomaton& ca, const AugmentedGrammar& g);

SRAutomaton build_sr_automaton(const ParsingTable& table);

std::string format_label(const SRLabel& l, const AugmentedGrammar& g);

}  // namespace lrambig
