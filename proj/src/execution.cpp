#include "lrambig/execution.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace lrambig {

std::vector<Alternative> alternatives(const Conflict& c) {
  std::vector<Alternative> out;
  if (c.shift_target) out.push_back(Alternative::shift());
  for (ProductionId p : c.reductions) out.push_back(Alternative::reduction(p));
  return out;
}

bool ResolutionMask::allows_shift(StateId state, SymbolId x) const {
  auto it = choices_.find({state, x});
  return it == choices_.end() || it->second.is_shift();
}

bool ResolutionMask::allows_reduce(StateId state, SymbolId x, ProductionId p) const {
  auto it = choices_.find({state, x});
  return it == choices_.end() || it->second.reduce == p;
}

Configuration initial_configuration(const SRAutomaton& sr) { return Configuration{std::nullopt, {sr.initial()}, {}, {}}; }

std::size_t ExecutionBounds::resolve(const SRAutomaton& sr) const {
  if (reduce_chain > 0) return reduce_chain;
  return sr.state_count() * (1 + sr.max_rhs_length());
}

const char* search_status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::absent: return "absent";
    case SearchStatus::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

std::optional<Configuration> apply_shift(const Configuration& c, SymbolId x, const SRAutomaton& sr,
                                         const ResolutionMask& mask) {
  if (c.pending && *c.pending != x) return std::nullopt;
  const auto& row = sr.plain(c.top());
  auto it = row.find(x);
  if (it == row.end() || !mask.allows_shift(c.top(), x)) return std::nullopt;
  Configuration next = c;
  next.pending.reset();
  next.states.push_back(it->second);
  next.word.push_back(x);
  return next;
}

std::optional<Configuration> apply_reduce(const Configuration& c, const ProspectiveEdge& e, const SRAutomaton& sr,
                                          const ResolutionMask& mask) {
  if (c.pending && *c.pending != e.x) return std::nullopt;
  if (!mask.allows_reduce(c.top(), e.x, e.production)) return std::nullopt;
  std::size_t len = sr.rhs_length(e.production);
  if (c.states.size() <= len) return std::nullopt;
  if (c.states[c.states.size() - 1 - len] != e.opening) return std::nullopt;
  Configuration next = c;
  next.states.resize(c.states.size() - len);
  next.states.push_back(e.target);
  next.productions.push_back(e.production);
  next.pending = e.x;
  return next;
}

std::vector<std::pair<Step, Configuration>> successors(const Configuration& c, const SRAutomaton& sr,
                                                       const ResolutionMask& mask) {
  std::vector<std::pair<Step, Configuration>> out;
  for (const auto& [x, to] : sr.plain(c.top()))
    if (auto n = apply_shift(c, x, sr, mask)) out.push_back({Step{SRLabel::plain(x), to}, std::move(*n)});
  for (const auto& e : sr.prospective(c.top()))
    if (auto n = apply_reduce(c, e, sr, mask))
      out.push_back({Step{SRLabel::reduce(e.x, e.opening, e.production), e.target}, std::move(*n)});
  return out;
}

namespace {

// Depth-first search over executions consuming `suffix`. Reductions are
// always taken under the prospective version of the next suffix symbol,
// which the h-discipline forces anyway.
class SuffixSearch {
 public:
  using Visit = std::function<bool(const Configuration&, const std::vector<TraceEntry>&)>;

  SuffixSearch(const SRAutomaton& sr, const ResolutionMask& mask, const std::vector<SymbolId>& suffix,
               std::size_t chain, bool memo)
      : sr_(sr), mask_(mask), suffix_(suffix), chain_(chain), memo_(memo) {}

  // `at_end` is called for every configuration that consumed the whole
  // suffix with its last step a shift; returning true stops the search.
  bool run(const Configuration& c, const Visit& at_end) {
    at_end_ = &at_end;
    if (suffix_.empty()) return at_end(c, trace_);
    return dfs(c, 0, 0);
  }

  bool budget_hit() const { return budget_hit_; }

  // Optional filter on the next reduction; used by replay.
  std::function<bool(const Configuration&, ProductionId)> reduce_filter;

 private:
  bool dfs(const Configuration& c, std::size_t pos, std::size_t chain) {
    if (memo_) {
      auto key = std::make_tuple(c.pending, c.states, pos);
      auto it = seen_.find(key);
      if (it != seen_.end() && it->second <= chain) return false;
      seen_[key] = chain;
    }
    SymbolId x = suffix_[pos];

    if (auto n = apply_shift(c, x, sr_, mask_)) {
      trace_.push_back({Step{SRLabel::plain(x), n->top()}, *n});
      bool stop = pos + 1 == suffix_.size() ? (*at_end_)(*n, trace_) : dfs(*n, pos + 1, 0);
      trace_.pop_back();
      if (stop) return true;
    }
    for (const auto& e : sr_.prospective(c.top())) {
      if (e.x != x) continue;
      if (reduce_filter && !reduce_filter(c, e.production)) continue;
      auto n = apply_reduce(c, e, sr_, mask_);
      if (!n) continue;
      if (chain + 1 > chain_) {
        budget_hit_ = true;
        continue;
      }
      trace_.push_back({Step{SRLabel::reduce(e.x, e.opening, e.production), e.target}, *n});
      bool stop = dfs(*n, pos, chain + 1);
      trace_.pop_back();
      if (stop) return true;
    }
    return false;
  }

  const SRAutomaton& sr_;
  const ResolutionMask& mask_;
  const std::vector<SymbolId>& suffix_;
  std::size_t chain_;
  bool memo_;
  bool budget_hit_ = false;
  const Visit* at_end_ = nullptr;
  std::vector<TraceEntry> trace_;
  std::map<std::tuple<std::optional<SymbolId>, std::vector<StateId>, std::size_t>, std::size_t> seen_;
};

std::vector<SymbolId> with_endmarker(std::vector<SymbolId> word, SymbolId endmarker) {
  word.push_back(endmarker);
  return word;
}

}  // namespace

ValidateResult validate(const Configuration& c, const std::vector<SymbolId>& suffix, StateId target,
                        const SRAutomaton& sr, const ResolutionMask& mask, ExecutionBounds bounds) {
  ValidateResult result;
  SuffixSearch search(sr, mask, suffix, bounds.resolve(sr), true);
  bool found = search.run(c, [&](const Configuration& end, const std::vector<TraceEntry>& trace) {
    if (end.top() != target) return false;
    result.config = end;
    result.trace = trace;
    return true;
  });
  if (found)
    result.status = SearchStatus::found;
  else
    result.status = search.budget_hit() ? SearchStatus::budget_exhausted : SearchStatus::absent;
  return result;
}

ValidateAllResult validate_all(const Configuration& c, const std::vector<SymbolId>& suffix, StateId target,
                               const SRAutomaton& sr, const ResolutionMask& mask, ExecutionBounds bounds) {
  ValidateAllResult result;
  std::set<std::pair<std::optional<SymbolId>, std::vector<StateId>>> keys;
  SuffixSearch search(sr, mask, suffix, bounds.resolve(sr), true);
  search.run(c, [&](const Configuration& end, const std::vector<TraceEntry>&) {
    if (end.top() == target && keys.insert({end.pending, end.states}).second) result.configs.push_back(end);
    return false;
  });
  result.budget_exhausted = search.budget_hit();
  return result;
}

ClosureResult reduce_closure(const Configuration& c, SymbolId x, StateId target, const SRAutomaton& sr,
                             const ResolutionMask& mask, ExecutionBounds bounds) {
  ClosureResult result;
  if (c.pending && *c.pending != x) return result;
  const std::size_t chain = bounds.resolve(sr);

  std::set<std::pair<std::optional<SymbolId>, std::vector<StateId>>> seen{{c.pending, c.states}};
  std::deque<std::pair<Configuration, std::size_t>> work{{c, 0}};
  while (!work.empty()) {
    auto [cur, depth] = std::move(work.front());
    work.pop_front();
    for (const auto& e : sr.prospective(cur.top())) {
      if (e.x != x) continue;
      auto n = apply_reduce(cur, e, sr, mask);
      if (!n) continue;
      if (depth + 1 > chain) {
        result.budget_exhausted = true;
        continue;
      }
      if (seen.insert({n->pending, n->states}).second) work.push_back({std::move(*n), depth + 1});
    }
    if (target < 0 || cur.top() == target) result.configs.push_back(std::move(cur));
  }
  return result;
}

namespace {

class ViabilityWalk {
 public:
  ViabilityWalk(const std::vector<std::vector<SymbolId>>& suffixes, StateId target, const SRAutomaton& sr,
                const ResolutionMask& mask, ExecutionBounds bounds)
      : suffixes_(suffixes), target_(target), sr_(sr), mask_(mask), bounds_(bounds), viable(suffixes.size(), false) {}

  // `order[lo, hi)` share their first `depth` symbols; `frontier` holds the
  // configurations reached after shifting them.
  void run(const std::vector<Configuration>& frontier, std::vector<std::size_t>& order, std::size_t lo,
           std::size_t hi, std::size_t depth, bool uncertain) {
    while (lo < hi && suffixes_[order[lo]].size() == depth) {
      bool hit = std::any_of(frontier.begin(), frontier.end(), [&](const Configuration& f) { return f.top() == target_; });
      viable[order[lo]] = hit || uncertain;
      ++lo;
    }
    while (lo < hi) {
      SymbolId x = suffixes_[order[lo]][depth];
      std::size_t end = lo;
      while (end < hi && suffixes_[order[end]][depth] == x) ++end;

      std::vector<Configuration> next;
      std::set<std::pair<std::optional<SymbolId>, std::vector<StateId>>> seen;
      bool hit_bound = uncertain;
      for (const auto& f : frontier) {
        ClosureResult cl = reduce_closure(f, x, -1, sr_, mask_, bounds_);
        hit_bound = hit_bound || cl.budget_exhausted;
        for (const auto& cc : cl.configs) {
          auto n = apply_shift(cc, x, sr_, mask_);
          if (!n || !seen.insert({n->pending, n->states}).second) continue;
          n->word.clear();
          n->productions.clear();
          next.push_back(std::move(*n));
        }
      }
      if (!next.empty() || hit_bound) run(next, order, lo, end, depth + 1, hit_bound);
      lo = end;
    }
  }

 private:
  const std::vector<std::vector<SymbolId>>& suffixes_;
  StateId target_;
  const SRAutomaton& sr_;
  const ResolutionMask& mask_;
  ExecutionBounds bounds_;

 public:
  std::vector<bool> viable;
};

}  // namespace

std::vector<bool> viable_suffixes(const Configuration& c, const std::vector<std::vector<SymbolId>>& suffixes,
                                  StateId target, const SRAutomaton& sr, const ResolutionMask& mask,
                                  ExecutionBounds bounds) {
  std::vector<std::size_t> order(suffixes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return suffixes[a] < suffixes[b]; });
  Configuration start = c;
  start.word.clear();
  start.productions.clear();
  ViabilityWalk walk(suffixes, target, sr, mask, bounds);
  walk.run({start}, order, 0, order.size(), 0, false);
  return std::move(walk.viable);
}

AcceptResult accepts(const SRAutomaton& sr, const std::vector<SymbolId>& word, SymbolId endmarker,
                     const ResolutionMask& mask, ExecutionBounds bounds) {
  ValidateResult v = validate(initial_configuration(sr), with_endmarker(word, endmarker), sr.final_state(), sr, mask, bounds);
  AcceptResult out;
  out.status = v.status;
  if (v.config) out.productions = v.config->productions;
  out.trace = std::move(v.trace);
  return out;
}

ParsesResult all_parses(const SRAutomaton& sr, const std::vector<SymbolId>& word, SymbolId endmarker,
                        const ResolutionMask& mask, ExecutionBounds bounds) {
  std::set<std::vector<ProductionId>> found;
  std::vector<SymbolId> input = with_endmarker(word, endmarker);
  SuffixSearch search(sr, mask, input, bounds.resolve(sr), false);
  search.run(initial_configuration(sr), [&](const Configuration& end, const std::vector<TraceEntry>&) {
    if (end.top() == sr.final_state()) found.insert(end.productions);
    return false;
  });
  return ParsesResult{{found.begin(), found.end()}, search.budget_hit()};
}

std::optional<std::vector<TraceEntry>> replay(const SRAutomaton& sr, const std::vector<SymbolId>& word,
                                              SymbolId endmarker, const std::vector<ProductionId>& productions,
                                              const ResolutionMask& mask, ExecutionBounds bounds) {
  std::vector<SymbolId> input = with_endmarker(word, endmarker);
  SuffixSearch search(sr, mask, input, bounds.resolve(sr), false);
  search.reduce_filter = [&](const Configuration& c, ProductionId p) {
    return c.productions.size() < productions.size() && productions[c.productions.size()] == p;
  };
  std::optional<std::vector<TraceEntry>> out;
  search.run(initial_configuration(sr), [&](const Configuration& end, const std::vector<TraceEntry>& trace) {
    if (end.top() != sr.final_state() || end.productions != productions) return false;
    out = trace;
    return true;
  });
  return out;
}

ParseRun shift_reduce_parse(const ParsingTable& table, const std::vector<SymbolId>& word,
                            const ResolutionMask& mask, std::size_t reduce_chain) {
  const auto& ca = table.automaton;
  const auto& g = table.grammar;
  std::vector<SymbolId> input = with_endmarker(word, g.endmarker);

  ParseRun run;
  std::vector<StateId> stack{ca.initial};
  std::size_t pos = 0;
  std::size_t chain = 0;
  while (pos < input.size()) {
    SymbolId x = input[pos];
    StateId top = stack.back();
    auto shift = ca.go(top, x);
    std::vector<ProductionId> reduces = table.reductions(top, x);

    std::optional<Alternative> action;
    if (static_cast<std::size_t>(shift.has_value()) + reduces.size() > 1) {
      auto it = mask.choices().find({top, x});
      if (it == mask.choices().end())
        throw std::invalid_argument("unresolved conflict at state " + std::to_string(top) + " on " + g.name(x));
      action = it->second;
    } else if (shift) {
      action = Alternative::shift();
    } else if (!reduces.empty()) {
      action = Alternative::reduction(reduces.front());
    }

    if (!action) {
      run.error = "no action at state " + std::to_string(top) + " on " + g.name(x);
      return run;
    }
    if (action->is_shift()) {
      stack.push_back(*shift);
      ++pos;
      chain = 0;
    } else {
      if (++chain > reduce_chain) {
        run.error = "reduce-chain bound exceeded";
        return run;
      }
      const Production& p = g.production(*action->reduce);
      stack.resize(stack.size() - p.rhs.size());
      auto target = ca.go(stack.back(), p.lhs);
      if (!target) {
        run.error = "missing goto";
        return run;
      }
      stack.push_back(*target);
      run.productions.push_back(p.id);
    }
    run.stacks.push_back(stack);
  }
  run.accepted = stack.back() == ca.final_state;
  return run;
}

std::string format_configuration(const Configuration& c, const AugmentedGrammar& g) {
  std::ostringstream out;
  out << '<' << (c.pending ? "[" + g.name(*c.pending) + "]" : std::string("eps")) << ", [";
  for (std::size_t i = 0; i < c.states.size(); ++i) out << (i ? "," : "") << c.states[i];
  out << "], " << (c.word.empty() ? std::string("eps") : g.format_word(c.word)) << ", [";
  for (std::size_t i = 0; i < c.productions.size(); ++i) out << (i ? "," : "") << 'p' << c.productions[i];
  out << "]>";
  return out.str();
}

std::string format_step(const Step& s, const AugmentedGrammar& g) {
  return std::string(s.is_shift() ? "(S " : "(R ") + format_label(s.label, g) + ")";
}

}  // namespace lrambig
