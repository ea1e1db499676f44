// ftkit: fault-tree analysis from the command line.
//
//   ftkit validate  <file>
//   ftkit cutsets   <file> [--method mocus|bdd] [--coherent-approx] [--order A,B,...]
//   ftkit quantify  <file> [--q-method exact|ep-common|ep|rare-event|all] ...
//   ftkit coherence <file> [--limit N]
//
// Exit status: 0 success, 1 analysis or validation failure, 2 I/O or usage.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ftkit/analysis.hpp"
#include "ftkit/document.hpp"
#include "ftkit/ftkit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct IoError {
  std::string message;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError{"cannot read '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    auto first = item.find_first_not_of(" \t");
    auto last = item.find_last_not_of(" \t");
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

std::size_t NodeBudget() {
  const char* env = std::getenv("FTKIT_NODE_BUDGET");
  if (!env || !*env) return ftkit::kDefaultNodeBudget;
  char* end = nullptr;
  unsigned long long value = std::strtoull(env, &end, 10);
  if (*end != '\0' || value == 0)
    throw IoError{"FTKIT_NODE_BUDGET must be a positive integer"};
  return static_cast<std::size_t>(value);
}

void WriteBddGraph(const ftkit::BddGraph& bdd, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["order"] = bdd.order();
  doc["root"] = bdd.root();
  auto nodes = nlohmann::ordered_json::array();
  for (std::size_t i = 2; i < bdd.nodes().size(); ++i) {
    const auto& n = bdd.nodes()[i];
    nodes.push_back({{"id", i},
                     {"var", bdd.order()[n.var]},
                     {"low", n.low},
                     {"high", n.high}});
  }
  doc["nodes"] = nodes;
  std::ofstream out(path);
  if (!out) throw IoError{"cannot write '" + path + "'"};
  out << doc.dump(2) << "\n";
}

struct CutSetFlags {
  std::string method = "mocus";
  bool coherent_approx = false;
  std::string order;

  void Register(CLI::App* cmd) {
    cmd->add_option("--method", method, "Cut-set derivation")
        ->check(CLI::IsMember({"mocus", "bdd"}));
    cmd->add_flag("--coherent-approx", coherent_approx,
                  "Drop negated literals from BDD prime implicants");
    cmd->add_option("--order", order,
                    "Comma-separated BDD variable order (default: declaration)");
  }

  ftkit::CutSetOptions Options() const {
    ftkit::CutSetOptions opts;
    opts.method = method == "bdd" ? ftkit::CutSetMethod::kBdd
                                  : ftkit::CutSetMethod::kMocus;
    opts.coherent_approx = coherent_approx;
    if (!order.empty()) opts.order = SplitList(order);
    opts.node_budget = NodeBudget();
    return opts;
  }
};

int RunValidate(const std::string& path) {
  auto text = ReadFile(path);
  try {
    auto tree = ftkit::ParseTree(text);
    for (const auto& d : ftkit::Validate(tree))
      std::cout << "warning: " << d.location << ": " << d.message << "\n";
    std::cout << "ok: " << tree.gates.size() << " gates, "
              << tree.events.size() << " events, top " << tree.top << "\n";
    return kExitOk;
  } catch (const ftkit::ValidityError& e) {
    for (const auto& d : e.diagnostics()) {
      std::cout << (d.severity == ftkit::Severity::kError ? "error" : "warning")
                << ": " << d.location << ": " << d.message << "\n";
    }
    return kExitFailure;
  }
}

int RunCutsets(const std::string& path, const CutSetFlags& flags,
               const std::string& format, const std::string& graph_path) {
  auto tree = ftkit::ParseTree(ReadFile(path));
  auto opts = flags.Options();
  if (opts.coherent_approx && opts.method != ftkit::CutSetMethod::kBdd)
    throw ftkit::DomainError("--coherent-approx requires --method bdd");
  if (!graph_path.empty()) {
    if (opts.method != ftkit::CutSetMethod::kBdd)
      throw ftkit::DomainError("--bdd-graph requires --method bdd");
    WriteBddGraph(ftkit::BuildBdd(ftkit::Normalize(tree),
                                  opts.order.value_or(tree.EventIds()),
                                  opts.node_budget),
                  graph_path);
  }
  auto sets = ftkit::ComputeCutSets(tree, opts);
  ftkit::LiteralRanking ranking(opts.order.value_or(tree.EventIds()));
  ranking.Sort(sets.members);
  bool primes = sets.kind == ftkit::ImplicantKind::kPrime;
  if (format == "machine") {
    nlohmann::ordered_json doc;
    doc["tree"] = tree.name;
    doc["cutset_method"] = ftkit::Describe(opts);
    auto list = nlohmann::ordered_json::array();
    for (const auto& s : sets.members) {
      auto lits = nlohmann::ordered_json::array();
      for (const auto& l : ranking.Arrange(s)) lits.push_back(ftkit::ToString(l));
      list.push_back(lits);
    }
    doc[primes ? "pi" : "mcs"] = list;
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
  }
  std::cout << (primes ? "Prime implicants" : "Minimal cut sets") << " ("
            << ftkit::Describe(opts) << ", " << sets.members.size() << "):\n";
  for (const auto& s : sets.members) std::cout << "  " << ranking.Render(s) << "\n";
  return kExitOk;
}

struct QuantifyFlags {
  std::string q_method = "all";
  double time_hours = 0;
  std::string not_frequency = "zero";
  std::string format = "table";
  bool per_year = false;
  std::size_t ie_order = 0;
};

int RunQuantify(const std::string& path, const CutSetFlags& cut_flags,
                const QuantifyFlags& flags) {
  auto tree = ftkit::ParseTree(ReadFile(path));
  ftkit::ReportOptions opts;
  opts.cutsets = cut_flags.Options();
  if (opts.cutsets.coherent_approx && opts.cutsets.method != ftkit::CutSetMethod::kBdd)
    throw ftkit::DomainError("--coherent-approx requires --method bdd");
  if (flags.time_hours > 0) opts.quant.mission_time = flags.time_hours;
  if (flags.ie_order > 0) opts.quant.ie_max_order = flags.ie_order;
  opts.quant.not_frequency_policy = flags.not_frequency == "mirror"
                                        ? ftkit::NotFrequencyPolicy::kMirror
                                        : ftkit::NotFrequencyPolicy::kZero;
  if (flags.q_method != "all") {
    static const std::map<std::string, ftkit::QMethod> kByName{
        {"exact", ftkit::QMethod::kExactIe},
        {"ep-common", ftkit::QMethod::kEpCommon},
        {"ep", ftkit::QMethod::kEp},
        {"rare-event", ftkit::QMethod::kRareEvent}};
    opts.methods = {kByName.at(flags.q_method)};
  }
  opts.quant.q_method = opts.methods.front();
  opts.per_year = flags.per_year;
  auto report = ftkit::Analyze(tree, opts);
  if (flags.format == "machine")
    std::cout << ftkit::ToJson(report).dump(2) << "\n";
  else
    std::cout << ftkit::RenderTable(report);
  return kExitOk;
}

int RunCoherence(const std::string& path, std::size_t limit) {
  auto tree = ftkit::ParseTree(ReadFile(path));
  ftkit::CoherenceReport report;
  try {
    report = ftkit::CoherenceCheck(tree, limit);
  } catch (const ftkit::CapacityError& e) {
    std::cerr << "error: " << e.what() << " (raise it with --limit)\n";
    return kExitFailure;
  }
  ftkit::AnalysisReport::Coherence summary{true, report.coherent,
                                           ftkit::DescribeCoherence(report)};
  std::cout << ftkit::CoherenceVerdict(summary) << "\n";
  for (const auto& line : summary.findings) std::cout << "  " << line << "\n";
  if (!report.irrelevant_events.empty()) {
    std::cout << "  irrelevant events:";
    for (const auto& id : report.irrelevant_events) std::cout << " " << id;
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault-tree analysis: cut sets, prime implicants, and "
               "top-event quantification"};
  app.require_subcommand(1);

  std::string path;
  auto* validate = app.add_subcommand("validate", "Check a fault-tree document");
  validate->add_option("file", path, "Fault-tree document")->required();

  CutSetFlags cut_flags;
  std::string cut_format = "table";
  std::string graph_path;
  auto* cutsets = app.add_subcommand("cutsets", "List minimal cut sets or prime implicants");
  cutsets->add_option("file", path, "Fault-tree document")->required();
  cut_flags.Register(cutsets);
  cutsets->add_option("--format", cut_format, "Output format")
      ->check(CLI::IsMember({"table", "machine"}));
  cutsets->add_option("--bdd-graph", graph_path,
                      "Write the BDD node list (JSON) to this file");

  CutSetFlags quant_cut_flags;
  QuantifyFlags quant_flags;
  auto* quantify = app.add_subcommand("quantify", "Top-event unavailability and frequency");
  quantify->add_option("file", path, "Fault-tree document")->required();
  quant_cut_flags.Register(quantify);
  quantify->add_option("--q-method", quant_flags.q_method, "Unavailability method")
      ->check(CLI::IsMember({"exact", "ep-common", "ep", "rare-event", "all"}));
  quantify->add_option("--time-hours", quant_flags.time_hours,
                       "Mission time in hours (overrides the document)")
      ->check(CLI::PositiveNumber);
  quantify->add_option("--not-frequency", quant_flags.not_frequency,
                       "Frequency of negated literals")
      ->check(CLI::IsMember({"zero", "mirror"}));
  quantify->add_option("--format", quant_flags.format, "Output format")
      ->check(CLI::IsMember({"table", "machine"}));
  quantify->add_flag("--per-year", quant_flags.per_year,
                     "Display frequencies per year (8760 h)");
  quantify->add_option("--ie-order", quant_flags.ie_order,
                       "Truncate inclusion-exclusion at this order")
      ->check(CLI::PositiveNumber);

  std::size_t limit = ftkit::kDefaultCoherenceEventLimit;
  auto* coherence = app.add_subcommand("coherence", "Exhaustive coherence check");
  coherence->add_option("file", path, "Fault-tree document")->required();
  coherence->add_option("--limit", limit, "Maximum number of events")
      ->check(CLI::Range(1, 30));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*validate) return RunValidate(path);
    if (*cutsets) return RunCutsets(path, cut_flags, cut_format, graph_path);
    if (*quantify) return RunQuantify(path, quant_cut_flags, quant_flags);
    if (*coherence) return RunCoherence(path, limit);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const ftkit::ValidityError& e) {
    for (const auto& d : e.diagnostics())
      std::cerr << "error: " << d.location << ": " << d.message << "\n";
    return kExitFailure;
  } catch (const ftkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
