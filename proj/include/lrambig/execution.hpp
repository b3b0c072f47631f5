#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lrambig/sr_automaton.hpp"

namespace lrambig {

/// One resolution of a table conflict: the shift, or a reduction.
struct Alternative {
  std::optional<ProductionId> reduce;

  static Alternative shift() { return {}; }
  static Alternative reduction(ProductionId p) { return {p}; }
  bool is_shift() const { return !reduce.has_value(); }
  auto operator<=>(const Alternative&) const = default;
};

/// Shift first, then reductions by ascending production id.
std::vector<Alternative> alternatives(const Conflict& c);

/// Chosen alternative per conflict entry (state, symbol). Entries without a
/// choice are open and permit every alternative.
class ResolutionMask {
 public:
  void resolve(StateId state, SymbolId x, Alternative choice) { choices_[{state, x}] = choice; }
  void resolve(const Conflict& c, Alternative choice) { resolve(c.state, c.symbol, choice); }
  void open(StateId state, SymbolId x) { choices_.erase({state, x}); }

  bool is_open(StateId state, SymbolId x) const { return !choices_.count({state, x}); }
  bool allows_shift(StateId state, SymbolId x) const;
  bool allows_reduce(StateId state, SymbolId x, ProductionId p) const;

  const std::map<std::pair<StateId, SymbolId>, Alternative>& choices() const { return choices_; }
  bool operator==(const ResolutionMask&) const = default;

 private:
  std::map<std::pair<StateId, SymbolId>, Alternative> choices_;
};

/// ⟨h, state-stack, word, production-stack⟩; stacks are bottom to top.
struct Configuration {
  std::optional<SymbolId> pending;  // h: ε or a prospective [x]
  std::vector<StateId> states;
  std::vector<SymbolId> word;
  std::vector<ProductionId> productions;

  StateId top() const { return states.back(); }
  auto operator<=>(const Configuration&) const = default;
};

Configuration initial_configuration(const SRAutomaton& sr);

/// The SR edge taken by one execution step; shift iff the label is plain.
struct Step {
  SRLabel label;
  StateId target = 0;

  bool is_shift() const { return !label.prospective; }
  auto operator<=>(const Step&) const = default;
};

struct TraceEntry {
  Step step;
  Configuration after;
};

/// Reduce steps allowed between two shifts. Zero selects the default,
/// (number of states) × (1 + max |rhs|).
struct ExecutionBounds {
  std::size_t reduce_chain = 0;

  std::size_t resolve(const SRAutomaton& sr) const;
};

enum class SearchStatus { found, absent, budget_exhausted };

const char* search_status_name(SearchStatus s);

std::optional<Configuration> apply_shift(const Configuration& c, SymbolId x, const SRAutomaton& sr,
                                         const ResolutionMask& mask);
std::optional<Configuration> apply_reduce(const Configuration& c, const ProspectiveEdge& e, const SRAutomaton& sr,
                                          const ResolutionMask& mask);

/// One-step successors by rules (S) and (R): shifts first, then reduce
/// edges in (x, production, R) order.
std::vector<std::pair<Step, Configuration>> successors(const Configuration& c, const SRAutomaton& sr,
                                                       const ResolutionMask& mask);

struct ValidateResult {
  SearchStatus status = SearchStatus::absent;
  std::optional<Configuration> config;
  std::vector<TraceEntry> trace;  // steps from the start configuration
};

/// Finds an execution from `c` that appends `suffix` to the word and ends,
/// right after shifting the last suffix symbol, with `target` on top. An
/// empty suffix succeeds iff `c` already has `target` on top.
/// Depth-first; shifts before reductions.
ValidateResult validate(const Configuration& c, const std::vector<SymbolId>& suffix, StateId target,
                        const SRAutomaton& sr, const ResolutionMask& mask, ExecutionBounds bounds = {});

struct ValidateAllResult {
  std::vector<Configuration> configs;  // distinct (h, state-stack), discovery order
  bool budget_exhausted = false;
};

/// Every end configuration `validate` could return, one per distinct
/// state-stack.
ValidateAllResult validate_all(const Configuration& c, const std::vector<SymbolId>& suffix, StateId target,
                               const SRAutomaton& sr, const ResolutionMask& mask, ExecutionBounds bounds = {});

struct ClosureResult {
  std::vector<Configuration> configs;
  bool budget_exhausted = false;
};

/// Configurations reachable from `c` by zero or more (R)-steps under [x].
/// `target` < 0 keeps all of them; otherwise only those with `target` on top.
ClosureResult reduce_closure(const Configuration& c, SymbolId x, StateId target, const SRAutomaton& sr,
                             const ResolutionMask& mask, ExecutionBounds bounds = {});

inline ClosureResult extend_reduce_closure(const Configuration& c, SymbolId x, StateId target, const SRAutomaton& sr,
                                           const ResolutionMask& mask, ExecutionBounds bounds = {}) {
  return reduce_closure(c, x, target, sr, mask, bounds);
}

/// For each suffix, whether `validate(c, suffix, target, ...)` can succeed.
/// Suffixes sharing a prefix share the work, so dead prefixes are pruned
/// once. A suffix whose search hits the reduce-chain bound counts as viable.
std::vector<bool> viable_suffixes(const Configuration& c, const std::vector<std::vector<SymbolId>>& suffixes,
                                  StateId target, const SRAutomaton& sr, const ResolutionMask& mask,
                                  ExecutionBounds bounds = {});

struct AcceptResult {
  SearchStatus status = SearchStatus::absent;
  std::vector<ProductionId> productions;
  std::vector<TraceEntry> trace;

  bool accepted() const { return status == SearchStatus::found; }
};

/// Whether ⟨ε,[P_init],ε,[]⟩ reaches ⟨ε,π,w$,ρ⟩.
AcceptResult accepts(const SRAutomaton& sr, const std::vector<SymbolId>& word, SymbolId endmarker,
                     const ResolutionMask& mask = {}, ExecutionBounds bounds = {});

struct ParsesResult {
  std::vector<std::vector<ProductionId>> productions;  // sorted, distinct
  bool budget_exhausted = false;
};

/// All distinct production-stacks of accepting executions for `word`.
ParsesResult all_parses(const SRAutomaton& sr, const std::vector<SymbolId>& word, SymbolId endmarker,
                        const ResolutionMask& mask = {}, ExecutionBounds bounds = {});

/// Re-runs the execution for `word` whose production-stack is exactly
/// `productions`. Empty when no such execution exists.
std::optional<std::vector<TraceEntry>> replay(const SRAutomaton& sr, const std::vector<SymbolId>& word,
                                              SymbolId endmarker, const std::vector<ProductionId>& productions,
                                              const ResolutionMask& mask = {}, ExecutionBounds bounds = {});

/// Result of running the classic table-driven parser.
struct ParseRun {
  bool accepted = false;
  std::vector<std::vector<StateId>> stacks;  // state-stack after every move
  std::vector<ProductionId> productions;
  std::string error;
};

/// Shift-reduce parsing of `word` over ⟨automaton, lookahead⟩. Every
/// conflict entry reached must be resolved by `mask`; an unresolved one
/// throws std::invalid_argument.
ParseRun shift_reduce_parse(const ParsingTable& table, const std::vector<SymbolId>& word,
                            const ResolutionMask& mask, std::size_t reduce_chain);

std::string format_configuration(const Configuration& c, const AugmentedGrammar& g);
std::string format_step(const Step& s, const AugmentedGrammar& g);

}  // namespace lrambig
