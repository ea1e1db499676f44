#pragma once

/**
 * @file
 * End-to-end analysis pipeline shared by the command-line tool:
 * tree -> cut sets (MOCUS or BDD) -> quantification -> report.
 */

#include <optional>
#include <string>
#include <vector>

#include "ftkit/bdd.hpp"
#include "ftkit/fault_tree.hpp"
#include "ftkit/normalize.hpp"
#include "ftkit/qualitative.hpp"
#include "ftkit/quantify.hpp"
#include "ftkit/report.hpp"

namespace ftkit {

enum class CutSetMethod { kMocus, kBdd };

struct CutSetOptions {
  CutSetMethod method = CutSetMethod::kMocus;
  bool coherent_approx = false;  ///< BDD only: strip negations from PIs.
  std::optional<std::vector<EventId>> order;  ///< Default: declaration order.
  std::size_t node_budget = kDefaultNodeBudget;
};

inline std::string Describe(const CutSetOptions& opts) {
  if (opts.method == CutSetMethod::kMocus) return "mocus";
  return opts.coherent_approx ? "bdd+coherent-approx" : "bdd";
}

inline ImplicantSet ComputeCutSets(const FaultTree& tree,
                                   const CutSetOptions& opts) {
  auto normalized = Normalize(tree);
  if (opts.method == CutSetMethod::kMocus) return Minimize(Mocus(normalized));
  auto bdd = BuildBdd(normalized, opts.order.value_or(tree.EventIds()),
                      opts.node_budget);
  auto primes = PrimeImplicants(bdd, opts.node_budget);
  return opts.coherent_approx ? CoherentMcsFromPrimes(primes) : primes;
}

inline std::string_view ToString(NotFrequencyPolicy p) {
  return p == NotFrequencyPolicy::kZero ? "zero" : "mirror";
}

struct ReportOptions {
  CutSetOptions cutsets;
  QuantConfig quant;
  std::vector<QMethod> methods{std::begin(kAllQMethods), std::end(kAllQMethods)};
  bool per_year = false;
  std::size_t coherence_event_limit = kDefaultCoherenceEventLimit;
};

inline AnalysisReport Analyze(const FaultTree& tree, const ReportOptions& opts) {
  AnalysisReport report;
  report.tree_name = tree.name;
  report.diagnostics = Validate(tree);

  auto sets = ComputeCutSets(tree, opts.cutsets);
  LiteralRanking ranking(opts.cutsets.order.value_or(tree.EventIds()));
  ranking.Sort(sets.members);
  report.prime_implicants = sets.kind == ImplicantKind::kPrime;

  auto mission = opts.quant.mission_time ? opts.quant.mission_time
                                         : tree.mission_time;
  auto measures = EventMeasures(tree, mission);
  auto result = Quantify(sets, measures, opts.quant, opts.methods);
  for (const auto& ps : result.per_set)
    report.sets.push_back({ranking.Arrange(ps.set), ps.q, ps.w});
  for (const auto& [method, value] : result.top_q)
    report.top_q[std::string(ToString(method))] = value;
  report.w_top = result.top_w;
  report.warnings = result.warnings;

  if (tree.events.size() <= opts.coherence_event_limit) {
    auto coherence = CoherenceCheck(tree, opts.coherence_event_limit);
    report.coherence.checked = true;
    report.coherence.coherent = coherence.coherent;
    report.coherence.findings = DescribeCoherence(coherence);
  }

  report.config.cutset_method = Describe(opts.cutsets);
  for (auto m : opts.methods)
    report.config.q_methods.emplace_back(ToString(m));
  report.config.not_frequency = std::string(ToString(opts.quant.not_frequency_policy));
  report.config.mission_time_hours = mission;
  report.config.per_year = opts.per_year;
  return report;
}

}  // namespace ftkit
