#include "lrambig/detector.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <tuple>

namespace lrambig {

// ---------------------------------------------------------------------------
// approximated graph

ApproxGraph::ApproxGraph(const SRAutomaton& sr, const ResolutionMask& mask) {
  const std::size_t n = sr.state_count();
  plain_.resize(n);
  bracket_.resize(n);
  step_.resize(n);
  std::set<SymbolId> terms;
  for (std::size_t s = 0; s < n; ++s) {
    auto p = static_cast<StateId>(s);
    for (const auto& [x, to] : sr.plain(p)) {
      terms.insert(x);
      if (mask.allows_shift(p, x)) plain_[s][x] = to;
    }
    for (const auto& e : sr.prospective(p)) {
      terms.insert(e.x);
      if (mask.allows_reduce(p, e.x, e.production)) bracket_[s][e.x].insert(e.target);
    }
  }
  terminals_.assign(terms.begin(), terms.end());
  for (std::size_t s = 0; s < n; ++s) {
    for (SymbolId x : terminals_) {
      std::set<StateId> targets;
      for (StateId mid : bracket_closure(static_cast<StateId>(s), x)) {
        auto it = plain_[static_cast<std::size_t>(mid)].find(x);
        if (it != plain_[static_cast<std::size_t>(mid)].end()) targets.insert(it->second);
      }
      if (!targets.empty()) step_[s][x] = std::move(targets);
    }
  }
}

std::set<StateId> ApproxGraph::bracket(StateId p, SymbolId x) const {
  const auto& row = bracket_.at(static_cast<std::size_t>(p));
  auto it = row.find(x);
  return it == row.end() ? std::set<StateId>{} : it->second;
}

std::set<StateId> ApproxGraph::bracket_closure(StateId p, SymbolId x) const {
  std::set<StateId> seen{p};
  std::vector<StateId> work{p};
  while (!work.empty()) {
    StateId s = work.back();
    work.pop_back();
    for (StateId t : bracket(s, x))
      if (seen.insert(t).second) work.push_back(t);
  }
  return seen;
}

std::set<StateId> ApproxGraph::bracket_sources(StateId p, SymbolId x) const {
  std::set<StateId> out;
  for (std::size_t s = 0; s < state_count(); ++s)
    if (bracket_closure(static_cast<StateId>(s), x).count(p)) out.insert(static_cast<StateId>(s));
  return out;
}

const std::set<StateId>& ApproxGraph::step(StateId p, SymbolId x) const {
  static const std::set<StateId> kNone;
  const auto& row = step_.at(static_cast<std::size_t>(p));
  auto it = row.find(x);
  return it == row.end() ? kNone : it->second;
}

bool ApproxGraph::reaches(StateId from, const Word& w, StateId to) const {
  std::set<StateId> cur{from};
  for (SymbolId x : w) {
    std::set<StateId> next;
    for (StateId s : cur) {
      const auto& t = step(s, x);
      next.insert(t.begin(), t.end());
    }
    if (next.empty()) return false;
    cur = std::move(next);
  }
  return cur.count(to) > 0;
}

std::vector<bool> ApproxGraph::coreachable(StateId to) const {
  std::vector<std::vector<StateId>> reverse(state_count());
  for (std::size_t s = 0; s < state_count(); ++s)
    for (const auto& [x, targets] : step_[s])
      for (StateId t : targets) reverse[static_cast<std::size_t>(t)].push_back(static_cast<StateId>(s));
  std::vector<bool> co(state_count(), false);
  std::vector<StateId> work{to};
  co[static_cast<std::size_t>(to)] = true;
  while (!work.empty()) {
    StateId s = work.back();
    work.pop_back();
    for (StateId r : reverse[static_cast<std::size_t>(s)]) {
      if (!co[static_cast<std::size_t>(r)]) {
        co[static_cast<std::size_t>(r)] = true;
        work.push_back(r);
      }
    }
  }
  return co;
}

GuessResult guess(StateId from, StateId to, int bound, const ApproxGraph& graph, std::size_t max_words) {
  GuessResult result;
  const std::vector<bool> co = graph.coreachable(to);
  auto live = [&](StateId s) { return co[static_cast<std::size_t>(s)]; };

  // Finite iff nothing co-reachable survives `bound` steps.
  std::set<StateId> layer;
  if (live(from)) layer.insert(from);
  for (int k = 0; k < bound && !layer.empty(); ++k) {
    std::set<StateId> next;
    for (StateId s : layer)
      for (SymbolId x : graph.terminals())
        for (StateId t : graph.step(s, x))
          if (live(t)) next.insert(t);
    layer = std::move(next);
  }
  result.exhausted = layer.empty();

  // Breadth-first over (word, reachable state set), determinized on the fly.
  std::vector<std::pair<Word, std::set<StateId>>> level;
  if (live(from)) level.push_back({{}, {from}});
  std::size_t produced = 0;
  for (int len = 0; len < bound && !level.empty(); ++len) {
    std::vector<std::pair<Word, std::set<StateId>>> next;
    for (auto& [w, states] : level) {
      if (states.count(to)) result.words.push_back(w);
      if (len + 1 >= bound) continue;
      for (SymbolId x : graph.terminals()) {
        std::set<StateId> targets;
        for (StateId s : states)
          for (StateId t : graph.step(s, x))
            if (live(t)) targets.insert(t);
        if (targets.empty()) continue;
        if (++produced > max_words) {
          result.truncated = true;
          result.exhausted = false;
          return result;
        }
        Word nw = w;
        nw.push_back(x);
        next.push_back({std::move(nw), std::move(targets)});
      }
    }
    level = std::move(next);
  }
  return result;
}

SearchStats& SearchStats::operator+=(const SearchStats& o) {
  guess_calls += o.guess_calls;
  validate_calls += o.validate_calls;
  closure_calls += o.closure_calls;
  n3_builds += o.n3_builds;
  suffix_rounds += o.suffix_rounds;
  return *this;
}

const char* empty_stage_name(EmptyStage s) {
  switch (s) {
    case EmptyStage::none: return "none";
    case EmptyStage::n1: return "N1";
    case EmptyStage::n2: return "N2";
    case EmptyStage::n3: return "N3";
    case EmptyStage::guess: return "guess";
    case EmptyStage::validate: return "validate";
  }
  return "?";
}

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::ambiguous: return "AMBIGUOUS";
    case VerdictKind::unambiguous: return "UNAMBIGUOUS";
    case VerdictKind::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

const char* reason_name(UnambiguousReason r) {
  return r == UnambiguousReason::deterministic_table ? "deterministic-table" : "search-exhausted";
}

// ---------------------------------------------------------------------------
// analysis building blocks

std::vector<std::pair<Word, StateId>> prefix_guesses(const Conflict& conflict, int l1, const ApproxGraph& graph,
                                                      StateId initial, std::size_t max_words, bool* exhausted) {
  std::vector<std::pair<Word, StateId>> out;
  bool all = true;
  for (StateId r : graph.bracket_sources(conflict.state, conflict.symbol)) {
    GuessResult g = guess(initial, r, l1, graph, max_words);
    all = all && g.exhausted;
    for (auto& w : g.words) out.push_back({std::move(w), r});
  }
  if (exhausted) *exhausted = all;
  return out;
}

namespace {

using ConfigKey = std::pair<std::optional<SymbolId>, std::vector<StateId>>;

ConfigKey key_of(const Configuration& c) { return {c.pending, c.states}; }

}  // namespace

std::vector<Configuration> branch(const Configuration& at_conflict, const Conflict& conflict, Alternative alt,
                                  const SRAutomaton& sr, const ResolutionMask& mask, ExecutionBounds bounds,
                                  bool* budget_hit) {
  const SymbolId x = conflict.symbol;
  std::vector<Configuration> out;
  if (alt.is_shift()) {
    if (auto n = apply_shift(at_conflict, x, sr, mask)) out.push_back(std::move(*n));
    return out;
  }
  std::set<ConfigKey> seen;
  for (const auto& e : sr.prospective(at_conflict.top())) {
    if (e.x != x || e.production != *alt.reduce) continue;
    auto z = apply_reduce(at_conflict, e, sr, mask);
    if (!z) continue;
    ClosureResult closed = reduce_closure(*z, x, -1, sr, mask, bounds);
    if (closed.budget_exhausted && budget_hit) *budget_hit = true;
    for (const auto& c : closed.configs) {
      auto shifted = apply_shift(c, x, sr, mask);
      if (shifted && seen.insert(key_of(*shifted)).second) out.push_back(std::move(*shifted));
    }
  }
  return out;
}

namespace {

struct N3Entry {
  Configuration divergence;
  Configuration first;
  Configuration second;
};

std::vector<N3Entry> manipulate_entries(const Configuration& c, const Conflict& conflict, Alternative first,
                                        Alternative second, const SRAutomaton& sr, const ResolutionMask& mask,
                                        ExecutionBounds bounds, bool* budget_hit) {
  std::vector<N3Entry> out;
  ClosureResult at_p = reduce_closure(c, conflict.symbol, conflict.state, sr, mask, bounds);
  if (at_p.budget_exhausted && budget_hit) *budget_hit = true;
  for (const auto& cp : at_p.configs) {
    auto b1 = branch(cp, conflict, first, sr, mask, bounds, budget_hit);
    auto b2 = branch(cp, conflict, second, sr, mask, bounds, budget_hit);
    for (const auto& c1 : b1)
      for (const auto& c2 : b2) out.push_back({cp, c1, c2});
  }
  return out;
}

}  // namespace

std::vector<std::pair<Configuration, Configuration>> manipulate(const Configuration& c, const Conflict& conflict,
                                                                Alternative first, Alternative second,
                                                                const SRAutomaton& sr, const ResolutionMask& mask,
                                                                ExecutionBounds bounds, bool* budget_hit) {
  std::vector<std::pair<Configuration, Configuration>> pairs;
  for (auto& e : manipulate_entries(c, conflict, first, second, sr, mask, bounds, budget_hit))
    pairs.push_back({std::move(e.first), std::move(e.second)});
  return pairs;
}

// ---------------------------------------------------------------------------
// pair analysis

namespace {

struct PairState {
  Configuration c1;
  Configuration c2;
  Configuration divergence;
  int l2_done = 0;  // every w' shorter than this has been tried
  bool exhausted = false;
};

class PairAnalysis {
 public:
  PairAnalysis(const Conflict& conflict, Alternative first, Alternative second, const AnalysisContext& ctx)
      : conflict_(conflict),
        first_(first),
        second_(second),
        ctx_(ctx),
        graph_(ctx.sr, ctx.mask),
        bounds_{ctx.budget.reduce_chain},
        c0_(initial_configuration(ctx.sr)) {}

  AnalysisResult run() {
    const SearchBudget& b = ctx_.budget;
    const int growth = std::max(2, b.growth);
    for (int l1 = std::max(1, b.l1); l1 <= std::max(b.l1, b.l1_max); l1 *= growth) {
      if (cancelled()) {
        result_.cancelled = true;
        break;
      }
      result_.l1_reached = l1;
      if (round(l1)) break;
      if (finished_ || result_.work_exhausted) break;
    }
    if (!result_.witness && !result_.cancelled) {
      bool pairs_done = std::all_of(pairs_.begin(), pairs_.end(), [](const PairState& p) { return p.exhausted; });
      result_.exhausted = n1_exhausted_ && pairs_done && !result_.budget_exhausted && !result_.work_exhausted;
    }
    return result_;
  }

 private:
  // False once the shared work budget is spent.
  bool charge(std::size_t units) {
    if (!ctx_.work || ctx_.budget.max_work == 0) return true;
    *ctx_.work += units;
    if (*ctx_.work <= ctx_.budget.max_work) return true;
    result_.work_exhausted = true;
    return false;
  }

  bool cancelled() const {
    return ctx_.winner && ctx_.winner->load(std::memory_order_relaxed) < ctx_.conflict_index;
  }

  void record_segment(StateId from, StateId to, const Word& w, int bound) {
    if (ctx_.recorder) ctx_.recorder->segments.push_back({from, to, w, bound, ctx_.mask});
  }

  // One l1 round; true when a witness was found.
  bool round(int l1) {
    RoundRecord rec;
    rec.l1 = l1;
    const SymbolId x = conflict_.symbol;

    // Step 1.
    ++result_.stats.guess_calls;
    bool exhausted = false;
    auto n1 = prefix_guesses(conflict_, l1, graph_, ctx_.sr.initial(), ctx_.budget.max_guess_words, &exhausted);
    n1_exhausted_ = exhausted;
    rec.n1 = n1;
    if (!charge(n1.size())) {
      commit(std::move(rec));
      return false;
    }

    // Step 2, only for N1 entries not seen in earlier rounds.
    bool new_n2 = false;
    for (const auto& [w1, r] : n1) {
      if (!n1_done_.insert({w1, r}).second) continue;
      if (!charge(w1.size() + 1)) break;
      ++result_.stats.validate_calls;
      ValidateAllResult v = validate_all(c0_, w1, r, ctx_.sr, ctx_.mask, bounds_);
      if (v.budget_exhausted) result_.budget_exhausted = true;
      if (!v.configs.empty()) record_segment(ctx_.sr.initial(), r, w1, l1);
      for (auto& c : v.configs) {
        if (!n2_keys_.insert(key_of(c)).second) continue;
        new_n2 = true;
        n2_.push_back(c);
        ++result_.stats.closure_calls;
        bool hit = false;
        auto entries = manipulate_entries(c, conflict_, first_, second_, ctx_.sr, ctx_.mask, bounds_, &hit);
        if (hit) result_.budget_exhausted = true;
        if (entries.empty()) rec.manipulation_failed.push_back(c);
        for (auto& e : entries) {
          if (!pair_keys_.insert({key_of(e.first), key_of(e.second)}).second) continue;
          record_segment(c.top(), e.first.top(), {x}, 2);
          record_segment(c.top(), e.second.top(), {x}, 2);
          pairs_.push_back(PairState{std::move(e.first), std::move(e.second), std::move(e.divergence), 0, false});
        }
      }
    }
    if (new_n2) ++result_.stats.n3_builds;
    rec.n2 = n2_;
    for (const auto& p : pairs_) rec.n3.push_back({p.c1, p.c2});

    if (n1.empty()) {
      result_.last_empty = EmptyStage::n1;
    } else if (n2_.empty()) {
      result_.last_empty = EmptyStage::n2;
    } else if (pairs_.empty()) {
      result_.last_empty = EmptyStage::n3;
    }
    if (pairs_.empty()) {
      commit(std::move(rec));
      finished_ = n1_exhausted_;
      return false;
    }

    // Step 3 with l2 escalation; earlier pairs resume where they stopped.
    const SearchBudget& b = ctx_.budget;
    const int growth = std::max(2, b.growth);
    for (int l2 = std::max(l1, b.l2); l2 <= std::max(l2_start(l1), b.l2_max); l2 *= growth) {
      if (cancelled()) {
        result_.cancelled = true;
        commit(std::move(rec));
        return false;
      }
      result_.l2_reached = std::max(result_.l2_reached, l2);
      ++result_.stats.suffix_rounds;
      bool any_work = false;
      for (auto& ps : pairs_) {
        if (result_.work_exhausted) break;
        if (ps.exhausted || ps.l2_done >= l2) continue;
        any_work = true;
        if (suffix_step(ps, l2, rec)) {
          commit(std::move(rec));
          return true;
        }
      }
      if (!any_work || result_.work_exhausted) break;
    }
    commit(std::move(rec));
    bool pairs_done = std::all_of(pairs_.begin(), pairs_.end(), [](const PairState& p) { return p.exhausted; });
    finished_ = n1_exhausted_ && pairs_done;
    return false;
  }

  int l2_start(int l1) const { return std::max(l1, ctx_.budget.l2); }

  bool suffix_step(PairState& ps, int l2, RoundRecord& rec) {
    const StateId fin = ctx_.sr.final_state();
    const StateId q1 = ps.c1.top();
    const StateId q2 = ps.c2.top();
    auto cache_key = std::make_pair(q1, l2);
    auto cached = suffix_cache_.find(cache_key);
    if (cached == suffix_cache_.end()) {
      ++result_.stats.guess_calls;
      cached = suffix_cache_.emplace(cache_key, guess(q1, fin, l2, graph_, ctx_.budget.max_guess_words)).first;
    }
    const GuessResult& g = cached->second;
    rec.suffix_guesses[cache_key] = g.words;

    std::vector<Word> candidates;
    for (const auto& w : g.words)
      if (static_cast<int>(w.size()) >= ps.l2_done && graph_.reaches(q2, w, fin)) candidates.push_back(w);
    const bool any_matched = !candidates.empty();
    std::size_t units = g.words.size();
    for (const auto& w : candidates) units += 2 * (w.size() + 1);
    if (!charge(units)) return false;
    std::vector<bool> viable_1 = viable_suffixes(ps.c1, candidates, fin, ctx_.sr, ctx_.mask, bounds_);
    std::vector<bool> viable_2 = viable_suffixes(ps.c2, candidates, fin, ctx_.sr, ctx_.mask, bounds_);

    bool any_validated = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!viable_1[i] || !viable_2[i]) continue;
      const Word& w = candidates[i];
      if (!charge(2 * (w.size() + 1))) return false;
      ++result_.stats.validate_calls;
      ValidateResult v1 = validate(ps.c1, w, fin, ctx_.sr, ctx_.mask, bounds_);
      if (v1.status == SearchStatus::budget_exhausted) result_.budget_exhausted = true;
      if (!v1.config) continue;
      ++result_.stats.validate_calls;
      ValidateResult v2 = validate(ps.c2, w, fin, ctx_.sr, ctx_.mask, bounds_);
      if (v2.status == SearchStatus::budget_exhausted) result_.budget_exhausted = true;
      if (!v2.config) continue;
      any_validated = true;
      record_segment(q1, fin, w, l2);
      record_segment(q2, fin, w, l2);
      if (v1.config->productions == v2.config->productions) continue;
      if (make_witness(ps, *v1.config, *v2.config)) return true;
    }
    // A truncated guess only covers lengths below its longest word.
    ps.l2_done = g.truncated ? (g.words.empty() ? 0 : static_cast<int>(g.words.back().size())) : l2;
    ps.exhausted = g.exhausted;
    if (!any_matched)
      result_.last_empty = EmptyStage::guess;
    else if (!any_validated)
      result_.last_empty = EmptyStage::validate;
    return false;
  }

  // Both stacks must also replay without the mask.
  bool make_witness(const PairState& ps, const Configuration& f1, const Configuration& f2) {
    Witness w;
    w.word.assign(f1.word.begin(), f1.word.end() - 1);
    const SymbolId end = f1.word.back();
    if (!replay(ctx_.sr, w.word, end, f1.productions, {}, bounds_) ||
        !replay(ctx_.sr, w.word, end, f2.productions, {}, bounds_))
      return false;
    w.prefix = ps.divergence.word;
    w.pivot = conflict_.symbol;
    if (w.prefix.size() + 1 < f1.word.size())  // empty when the pivot is the endmarker
      w.suffix.assign(f1.word.begin() + static_cast<std::ptrdiff_t>(w.prefix.size()) + 1, f1.word.end() - 1);
    w.productions_1 = f1.productions;
    w.productions_2 = f2.productions;
    w.conflict = conflict_;
    w.branch_1 = first_;
    w.branch_2 = second_;
    w.divergence = ps.divergence;
    w.mask = ctx_.mask;
    result_.witness = std::move(w);
    result_.last_empty = EmptyStage::none;
    return true;
  }

  void commit(RoundRecord rec) {
    if (ctx_.recorder) ctx_.recorder->rounds.push_back(std::move(rec));
  }

  const Conflict& conflict_;
  Alternative first_;
  Alternative second_;
  const AnalysisContext& ctx_;
  ApproxGraph graph_;
  ExecutionBounds bounds_;
  Configuration c0_;

  AnalysisResult result_;
  bool n1_exhausted_ = false;
  bool finished_ = false;
  std::set<std::pair<Word, StateId>> n1_done_;
  std::set<ConfigKey> n2_keys_;
  std::vector<Configuration> n2_;
  std::set<std::pair<ConfigKey, ConfigKey>> pair_keys_;
  std::vector<PairState> pairs_;
  std::map<std::pair<StateId, int>, GuessResult> suffix_cache_;
};

// Folds pair results into one conflict-level result.
AnalysisResult combine(const std::vector<std::pair<Alternative, Alternative>>& pairs, const Conflict& conflict,
                       const AnalysisContext& ctx) {
  AnalysisResult total;
  total.exhausted = true;
  for (const auto& [a, b] : pairs) {
    AnalysisResult r = analyze_pair(conflict, a, b, ctx);
    total.stats += r.stats;
    total.l1_reached = std::max(total.l1_reached, r.l1_reached);
    total.l2_reached = std::max(total.l2_reached, r.l2_reached);
    total.budget_exhausted = total.budget_exhausted || r.budget_exhausted;
    total.work_exhausted = total.work_exhausted || r.work_exhausted;
    total.exhausted = total.exhausted && r.exhausted;
    total.cancelled = total.cancelled || r.cancelled;
    if (r.last_empty != EmptyStage::none) total.last_empty = r.last_empty;
    if (r.witness) {
      total.witness = std::move(r.witness);
      total.last_empty = EmptyStage::none;
      total.exhausted = false;
      break;
    }
    if (r.cancelled || r.work_exhausted) break;
  }
  if (total.cancelled || total.work_exhausted) total.exhausted = false;
  return total;
}

}  // namespace

AnalysisResult analyze_pair(const Conflict& conflict, Alternative first, Alternative second, const AnalysisContext& ctx) {
  return PairAnalysis(conflict, first, second, ctx).run();
}

AnalysisResult analyze_rr(const Conflict& conflict, const AnalysisContext& ctx) {
  std::vector<std::pair<Alternative, Alternative>> pairs;
  for (std::size_t i = 0; i < conflict.reductions.size(); ++i)
    for (std::size_t j = i + 1; j < conflict.reductions.size(); ++j)
      pairs.push_back({Alternative::reduction(conflict.reductions[i]), Alternative::reduction(conflict.reductions[j])});
  return combine(pairs, conflict, ctx);
}

AnalysisResult analyze_sr(const Conflict& conflict, const AnalysisContext& ctx) {
  std::vector<std::pair<Alternative, Alternative>> pairs;
  for (ProductionId p : conflict.reductions) pairs.push_back({Alternative::shift(), Alternative::reduction(p)});
  for (std::size_t i = 0; i < conflict.reductions.size(); ++i)
    for (std::size_t j = i + 1; j < conflict.reductions.size(); ++j)
      pairs.push_back({Alternative::reduction(conflict.reductions[i]), Alternative::reduction(conflict.reductions[j])});
  return combine(pairs, conflict, ctx);
}

// ---------------------------------------------------------------------------
// detection driver

std::vector<ResolutionMask> resolution_masks(const std::vector<Conflict>& conflicts, std::size_t index,
                                             std::size_t cap, bool* truncated) {
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < conflicts.size(); ++i)
    if (i != index) others.push_back(i);

  std::vector<ResolutionMask> masks;
  std::vector<std::size_t> digit(others.size(), 0);
  bool cut = false;
  for (;;) {
    if (masks.size() >= cap) {
      cut = true;
      break;
    }
    ResolutionMask m;
    for (std::size_t k = 0; k < others.size(); ++k) {
      const Conflict& c = conflicts[others[k]];
      m.resolve(c, alternatives(c)[digit[k]]);
    }
    masks.push_back(std::move(m));
    // Odometer, last conflict fastest.
    bool advanced = false;
    for (std::size_t k = others.size(); k-- > 0;) {
      if (++digit[k] < alternatives(conflicts[others[k]]).size()) {
        advanced = true;
        break;
      }
      digit[k] = 0;
    }
    if (!advanced) break;
  }
  if (!others.empty()) masks.push_back(ResolutionMask{});
  if (truncated) *truncated = cut;
  return masks;
}

namespace {

struct ConflictOutcome {
  ConflictStatus status;
  std::optional<Witness> witness;
  SearchStats stats;
  Recorder recorder;
};

ConflictOutcome run_conflict(const ParsingTable& table, const SRAutomaton& sr, std::size_t index,
                             const DetectOptions& options, const std::atomic<int>* winner) {
  ConflictOutcome out;
  const Conflict& conflict = table.conflicts[index];
  out.status.conflict = conflict;
  bool truncated = false;
  auto masks = resolution_masks(table.conflicts, index, options.budget.max_combinations, &truncated);
  out.status.combinations_truncated = truncated;

  for (const auto& mask : masks) {
    std::size_t work = 0;
    AnalysisContext ctx{sr, mask, options.budget, options.record ? &out.recorder : nullptr, winner,
                        static_cast<int>(index), &work};
    AnalysisResult r = conflict.kind == ConflictKind::reduce_reduce ? analyze_rr(conflict, ctx) : analyze_sr(conflict, ctx);
    ++out.status.combinations_tried;
    out.stats += r.stats;
    out.status.l1_reached = std::max(out.status.l1_reached, r.l1_reached);
    out.status.l2_reached = std::max(out.status.l2_reached, r.l2_reached);
    out.status.budget_exhausted = out.status.budget_exhausted || r.budget_exhausted;
    out.status.work_exhausted = out.status.work_exhausted || r.work_exhausted;
    out.status.last_empty = r.last_empty;
    // The last mask leaves every conflict open; only its exhaustion covers
    // all executions.
    if (&mask == &masks.back()) out.status.exhausted = r.exhausted;
    if (r.witness) {
      out.status.witness_found = true;
      out.status.exhausted = false;
      out.witness = std::move(r.witness);
      break;
    }
    if (r.cancelled) break;
  }
  return out;
}

}  // namespace

DetectResult detect(const ParsingTable& table, const DetectOptions& options) {
  DetectResult result;
  result.table = table;
  result.sr = SRAutomaton(result.table);
  const auto& conflicts = result.table.conflicts;

  if (conflicts.empty()) {
    result.verdict.kind = VerdictKind::unambiguous;
    result.verdict.reason = UnambiguousReason::deterministic_table;
    return result;
  }

  std::vector<ConflictOutcome> outcomes;
  if (options.parallel && conflicts.size() > 1) {
    std::atomic<int> winner{static_cast<int>(conflicts.size())};
    std::vector<std::future<ConflictOutcome>> futures;
    for (std::size_t i = 0; i < conflicts.size(); ++i) {
      futures.push_back(std::async(std::launch::async, [&, i] {
        ConflictOutcome o = run_conflict(result.table, result.sr, i, options, &winner);
        if (o.witness) {
          int cur = winner.load();
          while (static_cast<int>(i) < cur && !winner.compare_exchange_weak(cur, static_cast<int>(i))) {
          }
        }
        return o;
      }));
    }
    for (auto& f : futures) outcomes.push_back(f.get());
  } else {
    for (std::size_t i = 0; i < conflicts.size(); ++i) {
      outcomes.push_back(run_conflict(result.table, result.sr, i, options, nullptr));
      if (outcomes.back().witness) break;
    }
  }

  bool all_exhausted = outcomes.size() == conflicts.size();
  for (auto& o : outcomes) {
    result.stats += o.stats;
    if (options.record) {
      for (auto& r : o.recorder.rounds) result.recorder.rounds.push_back(std::move(r));
      for (auto& s : o.recorder.segments) result.recorder.segments.push_back(std::move(s));
    }
    if (o.witness && !result.verdict.witness) result.verdict.witness = o.witness;
    all_exhausted = all_exhausted && o.status.exhausted;
    result.verdict.conflicts.push_back(o.status);
    // Parallel runs may carry statuses past the winning conflict.
    if (o.witness) break;
  }

  if (result.verdict.witness) {
    result.verdict.kind = VerdictKind::ambiguous;
  } else if (all_exhausted) {
    result.verdict.kind = VerdictKind::unambiguous;
    result.verdict.reason = UnambiguousReason::search_exhausted;
  } else {
    result.verdict.kind = VerdictKind::inconclusive;
  }
  return result;
}

DetectResult detect(const Grammar& g, Flavor flavor, const DetectOptions& options) {
  return detect(build_parsing_table(g, flavor), options);
}

}  // namespace lrambig
