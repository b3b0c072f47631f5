#include "lrambig/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace lrambig {

namespace {

constexpr std::string_view kArrow = "->";
constexpr std::string_view kEpsilon = "%eps";
constexpr std::string_view kEndmarker = "$";

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    tokens.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

struct RawAlternative {
  int line;
  std::string lhs;
  std::vector<std::string> rhs;
};

void check_rhs_token(const std::string& tok, int line) {
  if (tok == kEndmarker) throw GrammarError("reserved symbol '$' cannot be used in a grammar", line);
  if (tok == kArrow) throw GrammarError("unexpected '->' in right-hand side", line);
}

// Splits `tokens` on `|` and appends one alternative per piece.
void add_alternatives(std::vector<RawAlternative>& out, const std::string& lhs,
                      const std::vector<std::string>& tokens, std::size_t from, int line) {
  std::vector<std::string> current;
  auto flush = [&] {
    bool has_eps = std::find(current.begin(), current.end(), kEpsilon) != current.end();
    if (has_eps && current.size() != 1)
      throw GrammarError("'%eps' must be the only symbol of its alternative", line);
    if (current.empty()) throw GrammarError("empty alternative (use %eps)", line);
    if (has_eps) current.clear();
    out.push_back({line, lhs, current});
    current.clear();
  };
  for (std::size_t i = from; i < tokens.size(); ++i) {
    if (tokens[i] == "|") {
      flush();
      continue;
    }
    check_rhs_token(tokens[i], line);
    current.push_back(tokens[i]);
  }
  flush();
}

}  // namespace

std::optional<SymbolId> Grammar::find(std::string_view n) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].name == n) return static_cast<SymbolId>(i);
  return std::nullopt;
}

std::vector<SymbolId> Grammar::terminals() const {
  std::vector<SymbolId> out;
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].kind == SymbolKind::terminal) out.push_back(static_cast<SymbolId>(i));
  return out;
}

std::vector<SymbolId> Grammar::nonterminals() const {
  std::vector<SymbolId> out;
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].kind == SymbolKind::nonterminal) out.push_back(static_cast<SymbolId>(i));
  return out;
}

std::vector<SymbolId> AugmentedGrammar::terminals() const {
  std::vector<SymbolId> out;
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].kind != SymbolKind::nonterminal) out.push_back(static_cast<SymbolId>(i));
  return out;
}

std::vector<SymbolId> AugmentedGrammar::nonterminals() const {
  std::vector<SymbolId> out;
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].kind == SymbolKind::nonterminal) out.push_back(static_cast<SymbolId>(i));
  return out;
}

bool AugmentedGrammar::symbol_less(SymbolId a, SymbolId b) const {
  bool na = is_nonterminal(a), nb = is_nonterminal(b);
  if (na != nb) return nb;
  return name(a) < name(b);
}

std::string AugmentedGrammar::format_production(ProductionId id) const {
  const Production& p = production(id);
  std::string out = name(p.lhs) + " ->";
  if (p.rhs.empty()) out += " %eps";
  for (SymbolId s : p.rhs) out += " " + name(s);
  return out;
}

std::string AugmentedGrammar::format_word(const std::vector<SymbolId>& word) const {
  std::string out;
  for (SymbolId s : word) {
    if (!out.empty()) out += ' ';
    out += name(s);
  }
  return out;
}

Grammar parse_grammar(std::string_view text) {
  std::vector<RawAlternative> alternatives;
  std::string last_lhs;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "|") {
      if (last_lhs.empty()) throw GrammarError("'|' continuation without a preceding rule", line_no);
      add_alternatives(alternatives, last_lhs, tokens, 1, line_no);
      continue;
    }
    if (tokens.size() < 2 || tokens[1] != kArrow) throw GrammarError("expected 'LHS -> symbols'", line_no);
    const std::string& lhs = tokens[0];
    if (lhs == kEndmarker) throw GrammarError("reserved symbol '$' cannot be used in a grammar", line_no);
    if (lhs == kEpsilon || lhs == kArrow) throw GrammarError("invalid left-hand side '" + lhs + "'", line_no);
    last_lhs = lhs;
    add_alternatives(alternatives, lhs, tokens, 2, line_no);
  }
  if (alternatives.empty()) throw GrammarError("grammar has no productions", 0);

  std::set<std::string> lhs_names;
  for (const auto& alt : alternatives) lhs_names.insert(alt.lhs);

  Grammar g;
  std::map<std::string, SymbolId> ids;
  auto intern = [&](const std::string& n) {
    auto [it, inserted] = ids.try_emplace(n, static_cast<SymbolId>(g.symbols.size()));
    if (inserted)
      g.symbols.push_back({n, lhs_names.count(n) ? SymbolKind::nonterminal : SymbolKind::terminal});
    return it->second;
  };
  for (const auto& alt : alternatives) {
    Production p;
    p.id = static_cast<ProductionId>(g.productions.size() + 1);
    p.lhs = intern(alt.lhs);
    for (const auto& s : alt.rhs) p.rhs.push_back(intern(s));
    g.productions.push_back(std::move(p));
  }
  g.start = g.productions.front().lhs;
  return g;
}

std::string print_grammar(const Grammar& g) {
  std::ostringstream out;
  for (const auto& p : g.productions) {
    out << g.name(p.lhs) << " ->";
    if (p.rhs.empty()) out << ' ' << kEpsilon;
    for (SymbolId s : p.rhs) out << ' ' << g.name(s);
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> check_reduced(const Grammar& g) {
  const std::size_t n = g.symbols.size();

  std::vector<bool> productive(n, false);
  for (std::size_t i = 0; i < n; ++i) productive[i] = g.symbols[i].kind != SymbolKind::nonterminal;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (productive[static_cast<std::size_t>(p.lhs)]) continue;
      bool all = std::all_of(p.rhs.begin(), p.rhs.end(),
                             [&](SymbolId s) { return productive[static_cast<std::size_t>(s)]; });
      if (all) productive[static_cast<std::size_t>(p.lhs)] = changed = true;
    }
  }

  std::vector<bool> reachable(n, false);
  std::vector<SymbolId> work{g.start};
  reachable[static_cast<std::size_t>(g.start)] = true;
  while (!work.empty()) {
    SymbolId a = work.back();
    work.pop_back();
    for (const auto& p : g.productions) {
      if (p.lhs != a) continue;
      for (SymbolId s : p.rhs) {
        if (!reachable[static_cast<std::size_t>(s)]) {
          reachable[static_cast<std::size_t>(s)] = true;
          work.push_back(s);
        }
      }
    }
  }

  std::vector<std::string> offending;
  for (SymbolId a : g.nonterminals()) {
    auto i = static_cast<std::size_t>(a);
    if (!productive[i] || !reachable[i]) offending.push_back(g.symbols[i].name);
  }
  std::sort(offending.begin(), offending.end());
  return offending;
}

AugmentedGrammar augment(const Grammar& g) {
  std::vector<std::string> bad = check_reduced(g);
  if (!bad.empty()) {
    std::string list;
    for (const auto& s : bad) list += (list.empty() ? "" : ", ") + s;
    throw std::invalid_argument("grammar is not reduced; offending symbols: " + list);
  }

  AugmentedGrammar a;
  a.base = g;
  a.symbols = g.symbols;
  a.endmarker = static_cast<SymbolId>(a.symbols.size());
  a.symbols.push_back({std::string(kEndmarker), SymbolKind::endmarker});

  std::string fresh = "S'";
  while (g.find(fresh)) fresh += '\'';
  a.start_prime = static_cast<SymbolId>(a.symbols.size());
  a.symbols.push_back({fresh, SymbolKind::nonterminal});

  a.productions.push_back({0, a.start_prime, {g.start, a.endmarker}});
  for (const auto& p : g.productions) a.productions.push_back(p);
  return a;
}

std::vector<SymbolId> parse_word(const AugmentedGrammar& g, std::string_view text) {
  std::vector<SymbolId> word;
  for (const auto& tok : tokenize(text)) {
    auto id = g.base.find(tok);
    if (!id || g.base.is_nonterminal(*id)) throw std::invalid_argument("'" + tok + "' is not a terminal of the grammar");
    word.push_back(*id);
  }
  return word;
}

}  // namespace lrambig
