#include "lrambig/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "lrambig/oracle.hpp"

namespace lrambig {

namespace {

using nlohmann::json;

json tokens_json(const AugmentedGrammar& g, const Word& w) {
  json arr = json::array();
  for (SymbolId s : w) arr.push_back(g.name(s));
  return arr;
}

json conflict_json(const AugmentedGrammar& g, const Conflict& c) {
  json j;
  j["state"] = c.state;
  j["symbol"] = g.name(c.symbol);
  j["kind"] = conflict_kind_name(c.kind);
  j["shift"] = c.shift_target ? json(*c.shift_target) : json(nullptr);
  j["reductions"] = c.reductions;
  return j;
}

std::string alternative_name(const Alternative& a) {
  return a.is_shift() ? std::string("shift") : "reduce p" + std::to_string(*a.reduce);
}

struct Derivation {
  std::vector<ProductionId> productions;
  std::vector<TraceEntry> trace;
  bool replayed = false;
};

Derivation derive(const DetectResult& r, const std::vector<ProductionId>& prods) {
  Derivation d;
  d.productions = prods;
  const auto& w = *r.verdict.witness;
  if (auto t = replay(r.sr, w.word, r.table.grammar.endmarker, prods)) {
    d.trace = std::move(*t);
    d.replayed = true;
  }
  return d;
}

json derivation_json(const DetectResult& r, const Derivation& d, const Alternative& branch) {
  const auto& g = r.table.grammar;
  json j;
  j["branch"] = alternative_name(branch);
  j["productions"] = d.productions;
  json rules = json::array();
  for (ProductionId p : d.productions) rules.push_back("p" + std::to_string(p) + ": " + g.format_production(p));
  j["rules"] = rules;
  json steps = json::array();
  for (const auto& e : d.trace) steps.push_back(format_step(e.step, g) + " " + format_configuration(e.after, g));
  j["steps"] = steps;
  j["tree"] = d.replayed ? json(derivation_tree(g, d.trace)) : json(nullptr);
  return j;
}

std::string escape_dot(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string item_text(const AugmentedGrammar& g, const Item& it) {
  const Production& p = g.production(it.production);
  std::string out = g.name(p.lhs) + " ->";
  for (std::size_t i = 0; i <= p.rhs.size(); ++i) {
    if (static_cast<int>(i) == it.dot) out += " \xC2\xB7";
    if (i < p.rhs.size()) out += " " + g.name(p.rhs[i]);
  }
  return out;
}

}  // namespace

std::string derivation_tree(const AugmentedGrammar& g, const std::vector<TraceEntry>& trace) {
  std::vector<std::string> nodes;
  for (const auto& e : trace) {
    if (e.step.is_shift()) {
      if (e.step.label.x != g.endmarker) nodes.push_back(g.name(e.step.label.x));
      continue;
    }
    const Production& p = g.production(e.step.label.production);
    std::string node = g.name(p.lhs) + "[";
    std::size_t first = nodes.size() - p.rhs.size();
    for (std::size_t i = first; i < nodes.size(); ++i) node += (i == first ? "" : " ") + nodes[i];
    node += "]";
    nodes.resize(first);
    nodes.push_back(std::move(node));
  }
  return nodes.empty() ? std::string() : nodes.back();
}

json report_json(const DetectResult& r, const ReportOptions& options) {
  const auto& g = r.table.grammar;
  json j;
  j["verdict"] = verdict_name(r.verdict.kind);
  j["reason"] = r.verdict.reason ? json(reason_name(*r.verdict.reason)) : json(nullptr);
  j["flavor"] = flavor_name(r.table.lookahead.flavor);
  j["states"] = r.table.automaton.size();

  json conflicts = json::array();
  for (const auto& c : r.table.conflicts) conflicts.push_back(conflict_json(g, c));
  j["conflicts"] = conflicts;

  json search = json::array();
  for (const auto& s : r.verdict.conflicts) {
    json e = conflict_json(g, s.conflict);
    e["l1_reached"] = s.l1_reached;
    e["l2_reached"] = s.l2_reached;
    e["last_empty"] = empty_stage_name(s.last_empty);
    e["combinations_tried"] = s.combinations_tried;
    e["combinations_truncated"] = s.combinations_truncated;
    e["budget_exhausted"] = s.budget_exhausted;
    e["work_exhausted"] = s.work_exhausted;
    e["exhausted"] = s.exhausted;
    e["witness_found"] = s.witness_found;
    search.push_back(e);
  }
  j["search"] = search;

  if (r.verdict.witness) {
    const Witness& w = *r.verdict.witness;
    json wj;
    wj["word"] = g.format_word(w.word);
    wj["tokens"] = tokens_json(g, w.word);
    wj["prefix"] = tokens_json(g, w.prefix);
    wj["pivot"] = g.name(w.pivot);
    wj["suffix"] = tokens_json(g, w.suffix);
    wj["conflict"] = conflict_json(g, w.conflict);
    wj["derivations"] = json::array({derivation_json(r, derive(r, w.productions_1), w.branch_1),
                                     derivation_json(r, derive(r, w.productions_2), w.branch_2)});
    if (options.confirm) {
      Confirmation c = confirm_witness(g.base, w);
      wj["oracle"] = {{"status", confirm_status_name(c.status)}, {"derivations", c.derivations}, {"reason", c.reason}};
    }
    j["witness"] = wj;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

std::string report_text(const DetectResult& r, const ReportOptions& options) {
  const auto& g = r.table.grammar;
  std::ostringstream out;
  out << "table: " << flavor_name(r.table.lookahead.flavor) << ", " << r.table.automaton.size() << " states, "
      << r.table.conflicts.size() << " conflict" << (r.table.conflicts.size() == 1 ? "" : "s") << "\n";
  for (const auto& c : r.table.conflicts) {
    out << "  state " << c.state << " on '" << g.name(c.symbol) << "': " << conflict_kind_name(c.kind) << " (";
    bool first = true;
    if (c.shift_target) {
      out << "shift " << *c.shift_target;
      first = false;
    }
    for (ProductionId p : c.reductions) {
      out << (first ? "" : ", ") << "reduce p" << p << " " << g.format_production(p);
      first = false;
    }
    out << ")\n";
  }

  out << "verdict: " << verdict_name(r.verdict.kind);
  if (r.verdict.reason) out << " (" << reason_name(*r.verdict.reason) << ")";
  out << "\n";

  if (r.verdict.witness) {
    const Witness& w = *r.verdict.witness;
    out << "witness: " << g.format_word(w.word) << "\n";
    out << "  diverges at state " << w.conflict.state << " on '" << g.name(w.pivot) << "' after '"
        << g.format_word(w.prefix) << "'\n";
    int n = 1;
    for (const auto& [prods, alt] : {std::pair{w.productions_1, w.branch_1}, std::pair{w.productions_2, w.branch_2}}) {
      Derivation d = derive(r, prods);
      out << "  derivation " << n++ << " (" << alternative_name(alt) << "):";
      for (ProductionId p : prods) out << " p" << p;
      out << "\n";
      if (d.replayed) out << "    tree: " << derivation_tree(g, d.trace) << "\n";
      if (options.trace)
        for (const auto& e : d.trace)
          out << "    " << format_step(e.step, g) << " " << format_configuration(e.after, g) << "\n";
    }
    if (options.confirm) {
      Confirmation c = confirm_witness(g.base, w);
      out << "  oracle: " << confirm_status_name(c.status);
      if (c.derivations) out << " (" << c.derivations << " leftmost derivations)";
      if (!c.reason.empty()) out << " - " << c.reason;
      out << "\n";
    }
  } else if (r.verdict.kind == VerdictKind::inconclusive) {
    for (const auto& s : r.verdict.conflicts) {
      out << "  state " << s.conflict.state << " on '" << g.name(s.conflict.symbol) << "': l1=" << s.l1_reached
          << " l2=" << s.l2_reached << " last empty: " << empty_stage_name(s.last_empty);
      if (s.combinations_truncated) out << ", combinations truncated";
      if (s.budget_exhausted) out << ", reduce-chain bound hit";
      if (s.work_exhausted) out << ", work budget spent";
      out << "\n";
    }
  }
  return out.str();
}

std::string characteristic_dot(const ParsingTable& table) {
  const auto& g = table.grammar;
  const auto& ca = table.automaton;
  std::ostringstream out;
  out << "digraph characteristic {\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& s : ca.states) {
    std::string label = std::to_string(s.id);
    for (const auto& it : s.items) label += "\\n" + escape_dot(item_text(g, it));
    out << "  " << s.id << " [label=\"" << label << "\"" << (s.id == ca.final_state ? ", peripheries=2" : "")
        << "];\n";
  }
  for (std::size_t from = 0; from < ca.size(); ++from)
    for (const auto& [x, to] : ca.transitions[from])
      out << "  " << from << " -> " << to << " [label=\"" << escape_dot(g.name(x)) << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string sr_dot(const SRAutomaton& sr, const ParsingTable& table) {
  const auto& g = table.grammar;
  std::ostringstream out;
  out << "digraph sr {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::size_t s = 0; s < sr.state_count(); ++s)
    out << "  " << s << (static_cast<StateId>(s) == sr.final_state() ? " [shape=doublecircle]" : "") << ";\n";
  for (std::size_t s = 0; s < sr.state_count(); ++s) {
    auto p = static_cast<StateId>(s);
    for (const auto& [x, to] : sr.plain(p))
      out << "  " << s << " -> " << to << " [label=\"" << escape_dot(g.name(x)) << "\"];\n";
    std::map<std::tuple<StateId, StateId, ProductionId>, std::vector<SymbolId>> grouped;
    for (const auto& e : sr.prospective(p)) grouped[{e.target, e.opening, e.production}].push_back(e.x);
    for (auto& [key, xs] : grouped) {
      const auto& [target, r, prod] = key;
      std::sort(xs.begin(), xs.end());
      std::string label = "[";
      for (std::size_t i = 0; i < xs.size(); ++i) label += (i ? "," : "") + g.name(xs[i]);
      label += "]:" + std::to_string(r) + ":p" + std::to_string(prod);
      out << "  " << s << " -> " << target << " [label=\"" << escape_dot(label) << "\", style=dashed];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace lrambig
