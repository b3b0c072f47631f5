#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "lrambig/oracle.hpp"
#include "lrambig/report.hpp"

namespace lrambig {

namespace {

constexpr int kExitError = 3;

struct RunOptions {
  std::string grammar_path;
  Flavor flavor = Flavor::lalr1;
  SearchBudget budget;
  std::string format = "text";
  std::string export_dot;
  std::string output;
  bool trace = false;
  bool confirm = false;
  bool parallel = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Grammar load(const std::string& path) {
  Grammar g = parse_grammar(read_file(path));
  std::vector<std::string> bad = check_reduced(g);
  if (!bad.empty()) {
    std::string list;
    for (const auto& s : bad) list += (list.empty() ? "" : ", ") + s;
    throw std::runtime_error("grammar is not reduced; offending symbols: " + list);
  }
  return g;
}

int run_detect(const RunOptions& opts, std::ostream& out) {
  Grammar g = load(opts.grammar_path);
  ParsingTable table = build_parsing_table(g, opts.flavor);

  if (!opts.export_dot.empty()) {
    std::string dot = opts.export_dot == "sr" ? sr_dot(SRAutomaton(table), table) : characteristic_dot(table);
    if (opts.output.empty()) {
      out << dot;
      return 0;
    }
    std::ofstream f(opts.output, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + opts.output + "'");
    f << dot;
  }

  DetectOptions d;
  d.budget = opts.budget;
  d.parallel = opts.parallel;
  DetectResult r = detect(table, d);

  ReportOptions ro;
  ro.trace = opts.trace;
  ro.confirm = opts.confirm;
  if (opts.format == "json")
    out << report_json(r, ro).dump(2) << "\n";
  else
    out << report_text(r, ro);

  switch (r.verdict.kind) {
    case VerdictKind::unambiguous: return 0;
    case VerdictKind::ambiguous: return 1;
    case VerdictKind::inconclusive: return 2;
  }
  return kExitError;
}

int run_oracle(const std::string& path, int max_len, std::ostream& out) {
  Grammar g = load(path);
  for (const auto& [word, count] : enumerate_sentences(g, max_len)) {
    out << count << "\t";
    for (std::size_t i = 0; i < word.size(); ++i) out << (i ? " " : "") << g.name(word[i]);
    out << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"LR-based context-free grammar ambiguity detector", "lrambig"};
  app.require_subcommand(1);

  RunOptions opts;
  auto* det = app.add_subcommand("detect", "Search a grammar for an ambiguous word");
  det->add_option("grammar", opts.grammar_path, "Grammar file")->required();
  det->add_option("--flavor", opts.flavor, "Lookahead flavor")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Flavor>{{"slr", Flavor::slr1}, {"lalr", Flavor::lalr1}}))
      ->default_str("lalr");
  det->add_option("--format", opts.format, "Report format")->check(CLI::IsMember({"text", "json"}))->default_str("text");
  det->add_option("--l1", opts.budget.l1, "Initial prefix bound")->check(CLI::PositiveNumber);
  det->add_option("--l2", opts.budget.l2, "Initial suffix bound (default: the prefix bound)")
      ->check(CLI::PositiveNumber);
  det->add_option("--l1-max", opts.budget.l1_max, "Maximum prefix bound")->check(CLI::PositiveNumber);
  det->add_option("--l2-max", opts.budget.l2_max, "Maximum suffix bound")->check(CLI::PositiveNumber);
  det->add_option("--combinations", opts.budget.max_combinations, "Resolution combinations per conflict")
      ->check(CLI::PositiveNumber);
  det->add_option("--reduce-bound", opts.budget.reduce_chain, "Consecutive reductions allowed during validation")
      ->check(CLI::PositiveNumber);
  det->add_option("--max-work", opts.budget.max_work, "Search work per conflict and resolution (0: unlimited)");
  det->add_option("--export-dot", opts.export_dot, "Write an automaton as DOT")
      ->check(CLI::IsMember({"characteristic", "sr"}));
  det->add_option("-o,--output", opts.output, "DOT output file (default: stdout, detection skipped)");
  det->add_flag("--trace", opts.trace, "Print every step of both witness executions");
  det->add_flag("--confirm", opts.confirm, "Confirm the witness with the brute-force oracle");
  det->add_flag("--parallel", opts.parallel, "Analyze conflicts concurrently");

  std::string oracle_path;
  int max_len = 6;
  auto* orc = app.add_subcommand("oracle", "List sentences with their leftmost-derivation counts");
  orc->group("");
  orc->add_option("grammar", oracle_path)->required();
  orc->add_option("--max-len", max_len)->check(CLI::Range(0, kOracleMaxLength));

  // CLI11 consumes the argument vector from the back.
  std::vector<std::string> rest(args.empty() ? args.end() : args.begin() + 1, args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (det->parsed() ? det->help() : app.help());
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  if (opts.budget.l1 > opts.budget.l1_max || opts.budget.l2 > opts.budget.l2_max) {
    err << "error: initial bounds must not exceed their maxima\n";
    return kExitError;
  }

  try {
    if (orc->parsed()) return run_oracle(oracle_path, max_len, out);
    return run_detect(opts, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace lrambig
