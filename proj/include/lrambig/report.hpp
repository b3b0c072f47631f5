#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lrambig/detector.hpp"

namespace lrambig {

struct ReportOptions {
  bool trace = false;    // include per-step configurations in the text report
  bool confirm = false;  // run the oracle on the witness
};

/// Keys are emitted in sorted order, so parse/dump round-trips exactly.
nlohmann::json report_json(const DetectResult& result, const ReportOptions& options = {});
std::string report_text(const DetectResult& result, const ReportOptions& options = {});

/// Bracketed tree rebuilt from an execution trace, e.g. `E[E[a] + E[a]]`.
std::string derivation_tree(const AugmentedGrammar& g, const std::vector<TraceEntry>& trace);

std::string characteristic_dot(const ParsingTable& table);
/// Reduce edges sharing source, target, R and p are merged into one
/// `[x1,x2]:R:p` label.
std::string sr_dot(const SRAutomaton& sr, const ParsingTable& table);

}  // namespace lrambig
