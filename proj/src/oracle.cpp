#include "lrambig/oracle.hpp"

#include "lrambig/detector.hpp"

#include <algorithm>
#include <limits>
#include <optional>

namespace lrambig {

namespace {

std::vector<std::size_t> min_yields(const Grammar& g) {
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;
  std::vector<std::size_t> len(g.symbols.size(), kInf);
  for (SymbolId t : g.terminals()) len[static_cast<std::size_t>(t)] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      std::size_t sum = 0;
      for (SymbolId s : p.rhs) sum = std::min(kInf, sum + len[static_cast<std::size_t>(s)]);
      if (sum < len[static_cast<std::size_t>(p.lhs)]) {
        len[static_cast<std::size_t>(p.lhs)] = sum;
        changed = true;
      }
    }
  }
  return len;
}

// Leftmost-derivation enumerator. `rest` holds the unexpanded suffix of the
// sentential form with its leftmost symbol at the back.
class Enumerator {
 public:
  Enumerator(const Grammar& g, std::size_t max_len, const std::vector<SymbolId>* target)
      : g_(g), max_len_(max_len), target_(target), min_(min_yields(g)) {
    std::size_t n = std::max<std::size_t>(1, g.nonterminals().size());
    depth_cap_ = 4 * (max_len + 1) * n;
    for (const auto& p : g.productions) by_lhs_[p.lhs].push_back(&p);
  }

  void run() {
    std::vector<SymbolId> rest{g_.start};
    dfs(rest, min_[static_cast<std::size_t>(g_.start)], 0);
  }

  std::map<std::vector<SymbolId>, std::size_t> counts;

 private:
  void dfs(std::vector<SymbolId>& rest, std::size_t rest_min, std::size_t depth) {
    // Move leading terminals into the prefix.
    std::size_t moved = 0;
    while (!rest.empty() && !g_.is_nonterminal(rest.back())) {
      SymbolId t = rest.back();
      if (target_ && (prefix_.size() >= target_->size() || (*target_)[prefix_.size()] != t)) break;
      prefix_.push_back(t);
      rest.pop_back();
      ++moved;
    }
    bool blocked = !rest.empty() && !g_.is_nonterminal(rest.back());
    if (!blocked) {
      if (rest.empty()) {
        if (!target_ || prefix_.size() == target_->size()) ++counts[prefix_];
      } else {
        if (depth >= depth_cap_) throw OracleError("derivation-depth safety cap exceeded (cyclic grammar?)");
        SymbolId a = rest.back();
        rest.pop_back();
        std::size_t base_min = rest_min - moved - min_[static_cast<std::size_t>(a)];
        for (const Production* p : by_lhs_[a]) {
          std::size_t add = 0;
          for (SymbolId s : p->rhs) add += min_[static_cast<std::size_t>(s)];
          if (prefix_.size() + base_min + add <= max_len_) {
            rest.insert(rest.end(), p->rhs.rbegin(), p->rhs.rend());
            dfs(rest, base_min + add, depth + 1);
            rest.resize(rest.size() - p->rhs.size());
          }
        }
        rest.push_back(a);
      }
    }
    for (std::size_t i = 0; i < moved; ++i) {
      rest.push_back(prefix_.back());
      prefix_.pop_back();
    }
  }

  const Grammar& g_;
  std::size_t max_len_;
  const std::vector<SymbolId>* target_;
  std::vector<std::size_t> min_;
  std::size_t depth_cap_ = 0;
  std::map<SymbolId, std::vector<const Production*>> by_lhs_;
  std::vector<SymbolId> prefix_;
};

}  // namespace

std::map<std::vector<SymbolId>, std::size_t> enumerate_sentences(const Grammar& g, int max_len) {
  if (max_len < 0 || max_len > kOracleMaxLength)
    throw OracleError("oracle length bound must be in [0, " + std::to_string(kOracleMaxLength) + "]");
  Enumerator e(g, static_cast<std::size_t>(max_len), nullptr);
  e.run();
  return std::move(e.counts);
}

std::size_t count_derivations(const Grammar& g, const std::vector<SymbolId>& word) {
  Enumerator e(g, word.size(), &word);
  e.run();
  auto it = e.counts.find(word);
  return it == e.counts.end() ? 0 : it->second;
}

bool is_rightmost_derivation(const Grammar& g, const std::vector<SymbolId>& word,
                             const std::vector<ProductionId>& productions) {
  std::vector<SymbolId> form{g.start};
  for (auto it = productions.rbegin(); it != productions.rend(); ++it) {
    if (*it < 1 || *it > static_cast<ProductionId>(g.productions.size())) return false;
    const Production& p = g.production(*it);
    auto pos = std::find_if(form.rbegin(), form.rend(), [&](SymbolId s) { return g.is_nonterminal(s); });
    if (pos == form.rend() || *pos != p.lhs) return false;
    auto at = form.erase(std::next(pos).base());
    form.insert(at, p.rhs.begin(), p.rhs.end());
  }
  return form == word;
}

const char* confirm_status_name(ConfirmStatus s) {
  switch (s) {
    case ConfirmStatus::confirmed: return "confirmed";
    case ConfirmStatus::refuted: return "refuted";
    case ConfirmStatus::unverified: return "unverified";
  }
  return "?";
}

Confirmation confirm_witness(const Grammar& g, const std::vector<SymbolId>& word,
                             const std::vector<ProductionId>& first, const std::vector<ProductionId>& second) {
  Confirmation c;
  if (first == second) {
    c.status = ConfirmStatus::refuted;
    c.reason = "production-stacks are equal";
    return c;
  }
  if (!is_rightmost_derivation(g, word, first) || !is_rightmost_derivation(g, word, second)) {
    c.status = ConfirmStatus::refuted;
    c.reason = "a production-stack is not a rightmost derivation of the word";
    return c;
  }
  if (word.size() > static_cast<std::size_t>(kOracleMaxLength)) {
    c.status = ConfirmStatus::unverified;
    c.reason = "word longer than the oracle bound";
    return c;
  }
  try {
    c.derivations = count_derivations(g, word);
  } catch (const OracleError& e) {
    c.status = ConfirmStatus::unverified;
    c.reason = e.what();
    return c;
  }
  c.status = c.derivations >= 2 ? ConfirmStatus::confirmed : ConfirmStatus::refuted;
  if (c.derivations < 2) c.reason = "word has fewer than two leftmost derivations";
  return c;
}

Confirmation confirm_witness(const Grammar& g, const Witness& w) {
  return confirm_witness(g, w.word, w.productions_1, w.productions_2);
}

}  // namespace lrambig
