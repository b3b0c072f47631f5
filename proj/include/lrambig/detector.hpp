#pragma once

#include <atomic>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lrambig/execution.hpp"

namespace lrambig {

using Word = std::vector<SymbolId>;

/// Approximation of an SR-automaton under a resolution mask: the R and p
/// components of reduce labels are forgotten.
///   P →x Q     a (permitted) shift edge
///   P →[x] Q   some permitted reduce edge [x]:R:p from P to Q
///   P ⇒x Q     P →[x]* P' →x Q
class ApproxGraph {
 public:
  ApproxGraph(const SRAutomaton& sr, const ResolutionMask& mask);

  std::size_t state_count() const { return plain_.size(); }
  const std::vector<SymbolId>& terminals() const { return terminals_; }

  const std::map<SymbolId, StateId>& plain(StateId p) const { return plain_.at(static_cast<std::size_t>(p)); }
  std::set<StateId> bracket(StateId p, SymbolId x) const;
  /// States reachable from `p` by zero or more →[x] steps.
  std::set<StateId> bracket_closure(StateId p, SymbolId x) const;
  /// All R with R →[x]* p.
  std::set<StateId> bracket_sources(StateId p, SymbolId x) const;
  /// Targets of p ⇒x.
  const std::set<StateId>& step(StateId p, SymbolId x) const;
  /// Whether from ⇒w to.
  bool reaches(StateId from, const Word& w, StateId to) const;
  /// States from which `to` is reachable by ⇒-steps (including `to`).
  std::vector<bool> coreachable(StateId to) const;

 private:
  std::vector<SymbolId> terminals_;
  std::vector<std::map<SymbolId, StateId>> plain_;
  std::vector<std::map<SymbolId, std::set<StateId>>> bracket_;
  std::vector<std::map<SymbolId, std::set<StateId>>> step_;
};

struct GuessResult {
  std::vector<Word> words;  // shortest first
  bool exhausted = false;   // no word of length >= bound exists
  bool truncated = false;   // enumeration stopped at the word cap
};

/// Words w with |w| < bound and from ⇒w to.
GuessResult guess(StateId from, StateId to, int bound, const ApproxGraph& graph, std::size_t max_words = 20000);

struct SearchBudget {
  int l1 = 4;
  int l2 = 0;  // 0: start at l1
  int l1_max = 16;
  int l2_max = 16;
  int growth = 2;
  std::size_t max_combinations = 64;
  std::size_t reduce_chain = 0;  // 0: ExecutionBounds default
  std::size_t max_guess_words = 20000;
  // Search work (roughly, symbols pushed through guess and validation) per
  // conflict and resolution mask; 0 means unlimited.
  std::size_t max_work = 1000000;
};

struct SearchStats {
  std::size_t guess_calls = 0;
  std::size_t validate_calls = 0;
  std::size_t closure_calls = 0;
  std::size_t n3_builds = 0;
  std::size_t suffix_rounds = 0;

  SearchStats& operator+=(const SearchStats& o);
};

/// A word with two distinct production-stacks whose executions diverge at
/// `conflict`.
struct Witness {
  Word word;  // without the endmarker
  Word prefix;
  SymbolId pivot = 0;
  Word suffix;
  std::vector<ProductionId> productions_1;
  std::vector<ProductionId> productions_2;
  Conflict conflict;
  Alternative branch_1;
  Alternative branch_2;
  Configuration divergence;  // the configuration with the conflict state on top
  ResolutionMask mask;
};

/// The stage that came up empty last in a failed analysis.
enum class EmptyStage { none, n1, n2, n3, guess, validate };

const char* empty_stage_name(EmptyStage s);

/// One validated execution segment: from a configuration with `from` on
/// top, consuming `word`, to one with `to` on top.
struct Segment {
  StateId from = 0;
  StateId to = 0;
  Word word;
  int bound = 0;
  ResolutionMask mask;
};

/// Intermediate sets of one l1 round.
struct RoundRecord {
  int l1 = 0;
  std::vector<std::pair<Word, StateId>> n1;
  std::vector<Configuration> n2;
  std::vector<Configuration> manipulation_failed;  // N2 members yielding no pair
  std::vector<std::pair<Configuration, Configuration>> n3;
  std::map<std::pair<StateId, int>, std::vector<Word>> suffix_guesses;  // (Q1, l2)
};

struct Recorder {
  std::vector<RoundRecord> rounds;
  std::vector<Segment> segments;
};

struct AnalysisResult {
  std::optional<Witness> witness;
  int l1_reached = 0;
  int l2_reached = 0;
  EmptyStage last_empty = EmptyStage::none;
  bool exhausted = false;         // every guess space finite and covered
  bool budget_exhausted = false;  // some execution search hit the reduce-chain bound
  bool work_exhausted = false;    // SearchBudget::max_work ran out
  bool cancelled = false;
  SearchStats stats;
};

struct AnalysisContext {
  const SRAutomaton& sr;
  const ResolutionMask& mask;
  const SearchBudget& budget;
  Recorder* recorder = nullptr;
  // Set by parallel runs: stop when a conflict with a smaller index wins.
  const std::atomic<int>* winner = nullptr;
  int conflict_index = 0;
  // Shared by every pair analyzed under this mask.
  std::size_t* work = nullptr;
};

/// Guess/validate search for one pair of alternatives of `conflict`, with
/// bound escalation. N3 pairs are kept across l2 retries.
AnalysisResult analyze_pair(const Conflict& conflict, Alternative first, Alternative second, const AnalysisContext& ctx);

/// Every pair of reductions.
AnalysisResult analyze_rr(const Conflict& conflict, const AnalysisContext& ctx);
/// The shift against every reduction, then pairs of reductions.
AnalysisResult analyze_sr(const Conflict& conflict, const AnalysisContext& ctx);

/// Building blocks of the analysis, exposed for inspection.
std::vector<std::pair<Word, StateId>> prefix_guesses(const Conflict& conflict, int l1, const ApproxGraph& graph,
                                                      StateId initial, std::size_t max_words, bool* exhausted = nullptr);
/// Configurations reached from `at_conflict` (conflict state on top) by
/// taking `alt`, closing under [x] and shifting x.
std::vector<Configuration> branch(const Configuration& at_conflict, const Conflict& conflict, Alternative alt,
                                  const SRAutomaton& sr, const ResolutionMask& mask, ExecutionBounds bounds,
                                  bool* budget_hit = nullptr);
/// Step 2 manipulation of one N2 configuration: the resulting N3 pairs.
std::vector<std::pair<Configuration, Configuration>> manipulate(const Configuration& c, const Conflict& conflict,
                                                                Alternative first, Alternative second,
                                                                const SRAutomaton& sr, const ResolutionMask& mask,
                                                                ExecutionBounds bounds, bool* budget_hit = nullptr);

enum class VerdictKind { ambiguous, unambiguous, inconclusive };
enum class UnambiguousReason { deterministic_table, search_exhausted };

const char* verdict_name(VerdictKind k);
const char* reason_name(UnambiguousReason r);

struct ConflictStatus {
  Conflict conflict;
  int l1_reached = 0;
  int l2_reached = 0;
  EmptyStage last_empty = EmptyStage::none;
  std::size_t combinations_tried = 0;
  bool combinations_truncated = false;
  bool budget_exhausted = false;
  bool work_exhausted = false;
  bool exhausted = false;
  bool witness_found = false;
};

struct Verdict {
  VerdictKind kind = VerdictKind::inconclusive;
  std::optional<UnambiguousReason> reason;
  std::optional<Witness> witness;
  std::vector<ConflictStatus> conflicts;
};

struct DetectOptions {
  SearchBudget budget;
  bool parallel = false;
  bool record = false;  // keep intermediate sets and validated segments
};

struct DetectResult {
  ParsingTable table;
  SRAutomaton sr;
  Verdict verdict;
  SearchStats stats;
  Recorder recorder;
};

/// Resolution masks used while analyzing conflict `index`: combinations of
/// the other conflicts' alternatives in fixed order, capped, followed by the
/// all-open mask when other conflicts exist.
std::vector<ResolutionMask> resolution_masks(const std::vector<Conflict>& conflicts, std::size_t index,
                                             std::size_t cap, bool* truncated = nullptr);

DetectResult detect(const ParsingTable& table, const DetectOptions& options = {});
DetectResult detect(const Grammar& g, Flavor flavor, const DetectOptions& options = {});

}  // namespace lrambig
