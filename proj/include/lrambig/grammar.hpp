#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lrambig {

using SymbolId = int;
using ProductionId = int;
using StateId = int;

enum class SymbolKind { terminal, nonterminal, endmarker };

struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::terminal;

  bool operator==(const Symbol&) const = default;
};

// An ε-production has an empty rhs.
struct Production {
  ProductionId id = 0;
  SymbolId lhs = 0;
  std::vector<SymbolId> rhs;

  bool operator==(const Production&) const = default;
};

/// Raised by the grammar reader. `line()` is 1-based, 0 when the error is
/// not tied to a line (e.g. an empty file).
class GrammarError : public std::runtime_error {
 public:
  GrammarError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A context-free grammar. Symbol ids are assigned in order of first
/// appearance in the source text; production ids start at 1 and follow
/// file order (id 0 is reserved for the augmenting production).
struct Grammar {
  std::vector<Symbol> symbols;
  std::vector<Production> productions;
  SymbolId start = 0;

  const Production& production(ProductionId id) const { return productions.at(static_cast<std::size_t>(id - 1)); }
  const std::string& name(SymbolId s) const { return symbols.at(static_cast<std::size_t>(s)).name; }
  bool is_nonterminal(SymbolId s) const { return symbols.at(static_cast<std::size_t>(s)).kind == SymbolKind::nonterminal; }
  std::optional<SymbolId> find(std::string_view name) const;
  std::vector<SymbolId> terminals() const;
  std::vector<SymbolId> nonterminals() const;

  bool operator==(const Grammar&) const = default;
};

/// The grammar extended with a fresh start symbol S' and the production
/// S' -> S $ (id 0). Base symbol and production ids are unchanged; the
/// endmarker and S' are appended after the base symbols.
struct AugmentedGrammar {
  Grammar base;
  std::vector<Symbol> symbols;
  std::vector<Production> productions;  // indexed by production id
  SymbolId start_prime = 0;
  SymbolId endmarker = 0;

  const Production& production(ProductionId id) const { return productions.at(static_cast<std::size_t>(id)); }
  const std::string& name(SymbolId s) const { return symbols.at(static_cast<std::size_t>(s)).name; }
  SymbolKind kind(SymbolId s) const { return symbols.at(static_cast<std::size_t>(s)).kind; }
  bool is_nonterminal(SymbolId s) const { return kind(s) == SymbolKind::nonterminal; }
  std::size_t symbol_count() const { return symbols.size(); }
  std::size_t production_count() const { return productions.size(); }

  /// Terminals plus the endmarker, in id order.
  std::vector<SymbolId> terminals() const;
  std::vector<SymbolId> nonterminals() const;

  /// Order used wherever edges or symbols are enumerated: terminals (and
  /// `$`) before nonterminals, then by name.
  bool symbol_less(SymbolId a, SymbolId b) const;

  std::string format_production(ProductionId id) const;
  std::string format_word(const std::vector<SymbolId>& word) const;
};

Grammar parse_grammar(std::string_view text);

/// Canonical text form: one `LHS -> rhs` line per production, `%eps` for
/// empty right-hand sides.
std::string print_grammar(const Grammar& g);

/// Unreachable and nonproductive nonterminals, sorted by name. Empty iff
/// the grammar is reduced.
std::vector<std::string> check_reduced(const Grammar& g);

/// Throws std::invalid_argument when `g` is not reduced.
AugmentedGrammar augment(const Grammar& g);

/// Splits a whitespace-separated sentence into symbol ids of `g`.
/// Throws std::invalid_argument on unknown or nonterminal tokens.
std::vector<SymbolId> parse_word(const AugmentedGrammar& g, std::string_view text);

}  // namespace lrambig
