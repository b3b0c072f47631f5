#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrambig/grammar.hpp"

namespace lrambig {

// Brute-force ground truth over the plain grammar. Nothing here touches the
// LR machinery.

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kOracleMaxLength = 12;

struct ParseTreeCount {
  std::vector<SymbolId> word;
  std::size_t count = 0;  // distinct leftmost derivations
};

/// Every sentence of length <= max_len with its number of leftmost
/// derivations. Throws OracleError when a derivation exceeds the depth cap
/// (cyclic ε/unit structure) or max_len is out of range.
std::map<std::vector<SymbolId>, std::size_t> enumerate_sentences(const Grammar& g, int max_len);

/// Number of leftmost derivations of one word.
std::size_t count_derivations(const Grammar& g, const std::vector<SymbolId>& word);

/// Whether `productions` (bottom to top, i.e. in reduction order) read top
/// to bottom is a rightmost derivation of `word`.
bool is_rightmost_derivation(const Grammar& g, const std::vector<SymbolId>& word,
                             const std::vector<ProductionId>& productions);

enum class ConfirmStatus { confirmed, refuted, unverified };

const char* confirm_status_name(ConfirmStatus s);

struct Confirmation {
  ConfirmStatus status = ConfirmStatus::unverified;
  std::size_t derivations = 0;
  std::string reason;
};

/// Confirmed iff the word has at least two leftmost derivations and both
/// stacks are distinct rightmost derivations of it.
Confirmation confirm_witness(const Grammar& g, const std::vector<SymbolId>& word,
                             const std::vector<ProductionId>& first, const std::vector<ProductionId>& second);

struct Witness;
Confirmation confirm_witness(const Grammar& g, const Witness& w);

}  // namespace lrambig
