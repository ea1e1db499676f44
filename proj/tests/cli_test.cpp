#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int status;
  std::string out;
};

// Runs the command-line tool and captures stdout; stderr is discarded.
Run Cli(const std::string& args) {
  std::string cmd = std::string(FTKIT_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string SamplePath(const std::string& name) {
  return std::string(FTKIT_SAMPLES_DIR) + "/" + name;
}

class TempDocument {
 public:
  explicit TempDocument(const std::string& text) {
    path_ = std::filesystem::temp_directory_path() /
            ("ftkit_cli_test_" + std::to_string(getpid()) + "_" +
             std::to_string(counter_++) + ".json");
    std::ofstream(path_) << text;
  }
  ~TempDocument() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

TEST(CliTest, ValidateSample) {
  auto r = Cli("validate " + SamplePath("sif_example.json"));
  EXPECT_EQ(0, r.status);
  EXPECT_NE(std::string::npos, r.out.find("ok:"));
}

TEST(CliTest, ValidateCycle) {
  TempDocument doc(R"({"top": "G1",
    "events": {"A": {"model": "fixed", "p": 0.1}},
    "gates": {"G1": {"type": "and", "inputs": ["A", "G2"]},
              "G2": {"type": "or", "inputs": ["A", "G1"]}}})");
  auto r = Cli("validate " + doc.path());
  EXPECT_EQ(1, r.status);
  EXPECT_NE(std::string::npos, r.out.find("cyclic reference"));
}

TEST(CliTest, MissingFile) {
  EXPECT_EQ(2, Cli("validate /nonexistent/tree.json").status);
  EXPECT_EQ(2, Cli("quantify /nonexistent/tree.json").status);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(2, Cli("").status);
  EXPECT_EQ(2, Cli("frobnicate x").status);
  EXPECT_EQ(2, Cli("quantify " + SamplePath("sif_example.json") + " --q-method bogus").status);
}

TEST(CliTest, SyntaxError) {
  TempDocument doc("{\"top\": ");
  EXPECT_EQ(1, Cli("validate " + doc.path()).status);
}

TEST(CliTest, CutsetsMocus) {
  auto r = Cli("cutsets " + SamplePath("sif_example.json"));
  EXPECT_EQ(0, r.status);
  EXPECT_EQ(
      "Minimal cut sets (mocus, 7):\n"
      "  {S1, S3}\n  {S1, R1}\n  {S2, S3}\n  {S2, R1}\n"
      "  {L1, S3}\n  {L1, R1}\n  {V1, V2}\n",
      r.out);
}

TEST(CliTest, CutsetsBdd) {
  auto r = Cli("cutsets " + SamplePath("gas_leakage.json") + " --method bdd");
  EXPECT_EQ(0, r.status);
  EXPECT_NE(std::string::npos, r.out.find("{L, !V, R}"));
  EXPECT_NE(std::string::npos, r.out.find("{L, I, R}"));
  EXPECT_NE(std::string::npos, r.out.find("{L, V, I}"));
}

TEST(CliTest, CutsetsCoherentApproximation) {
  auto r = Cli("cutsets " + SamplePath("gas_leakage.json") +
               " --method bdd --coherent-approx --format machine");
  ASSERT_EQ(0, r.status);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(nlohmann::json::parse(R"([["L","R"],["L","V","I"]])"), doc["mcs"]);
  EXPECT_EQ(1, Cli("cutsets " + SamplePath("gas_leakage.json") + " --coherent-approx").status);
}

TEST(CliTest, CutsetsOrderErrors) {
  EXPECT_EQ(1, Cli("cutsets " + SamplePath("gas_leakage.json") +
                   " --method bdd --order L,V,I").status);
  EXPECT_EQ(0, Cli("cutsets " + SamplePath("gas_leakage.json") +
                   " --method bdd --order R,I,V,L").status);
}

TEST(CliTest, BddGraphExport) {
  auto path = (std::filesystem::temp_directory_path() /
               ("ftkit_cli_graph_" + std::to_string(getpid()) + ".json"))
                  .string();
  ASSERT_EQ(0, Cli("cutsets " + SamplePath("gas_leakage.json") +
                   " --method bdd --order L,V,I,R --bdd-graph " + path).status);
  std::ifstream in(path);
  auto doc = nlohmann::json::parse(in);
  EXPECT_EQ(4u, doc["nodes"].size());
  std::filesystem::remove(path);
}

TEST(CliTest, NodeBudgetEnvironment) {
  auto args = " cutsets " + SamplePath("sif_example.json") + " --method bdd >/dev/null 2>&1";
  int raw = std::system(("env FTKIT_NODE_BUDGET=3 " + std::string(FTKIT_CLI) + args).c_str());
  EXPECT_EQ(1, WEXITSTATUS(raw));
  raw = std::system(("env FTKIT_NODE_BUDGET=1000 " + std::string(FTKIT_CLI) + args).c_str());
  EXPECT_EQ(0, WEXITSTATUS(raw));
}

TEST(CliTest, QuantifyMachine) {
  auto r = Cli("quantify " + SamplePath("sif_example.json") + " --format machine");
  ASSERT_EQ(0, r.status);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(7u, doc["mcs"].size());
  EXPECT_NEAR(4.497E-5, doc["q_ep"].get<double>(), 0.5E-8);
  EXPECT_NEAR(1.987E-8, doc["w_top"].get<double>(), 0.5E-11);
}

TEST(CliTest, QuantifyTableRow) {
  auto r = Cli("quantify " + SamplePath("gas_leakage.json"));
  ASSERT_EQ(0, r.status);
  EXPECT_NE(std::string::npos,
            r.out.find("2.500000E-03   2.494063E-03   2.499703E-03   2.500000E-03"));
  r = Cli("quantify " + SamplePath("gas_leakage.json") + " --method bdd");
  EXPECT_NE(std::string::npos,
            r.out.find("2.500000E-03   2.612827E-03   2.624391E-03   2.625000E-03"));
  r = Cli("quantify " + SamplePath("gas_leakage.json") + " --method bdd --coherent-approx");
  EXPECT_NE(std::string::npos,
            r.out.find("2.618750E-03   2.618750E-03   2.624688E-03   2.625000E-03"));
}

TEST(CliTest, QuantifySingleMethod) {
  auto r = Cli("quantify " + SamplePath("sif_example.json") +
               " --q-method ep --format machine");
  ASSERT_EQ(0, r.status);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_TRUE(doc.contains("q_ep"));
  EXPECT_FALSE(doc.contains("q_rare_event"));
}

TEST(CliTest, QuantifyZeroRates) {
  TempDocument doc(R"({"top": "T", "mission_time_hours": 1000,
    "events": {"A": {"model": "rate", "lambda_per_hour": 0, "mttr_hours": 8},
               "B": {"model": "dormant", "lambda_per_hour": 0, "tau_hours": 100, "mttr_hours": 8}},
    "gates": {"T": {"type": "and", "inputs": ["A", "B"]}}})");
  auto r = Cli("quantify " + doc.path() + " --format machine");
  ASSERT_EQ(0, r.status);
  auto report = nlohmann::json::parse(r.out);
  for (const char* key : {"q_exact_ie", "q_ep_common", "q_ep", "q_rare_event", "w_top"})
    EXPECT_EQ(0.0, report[key].get<double>()) << key;
}

TEST(CliTest, QuantifyMissingMissionTime) {
  TempDocument doc(R"({"top": "T",
    "events": {"A": {"model": "rate", "lambda_per_hour": 1e-6, "mttr_hours": 8},
               "B": {"model": "fixed", "p": 0.1}},
    "gates": {"T": {"type": "and", "inputs": ["A", "B"]}}})");
  EXPECT_EQ(1, Cli("quantify " + doc.path()).status);
  EXPECT_EQ(0, Cli("quantify " + doc.path() + " --time-hours 100").status);
}

TEST(CliTest, Coherence) {
  auto r = Cli("coherence " + SamplePath("sif_example.json"));
  EXPECT_EQ(0, r.status);
  EXPECT_EQ("coherent\n", r.out);
  r = Cli("coherence " + SamplePath("gas_leakage.json"));
  EXPECT_EQ(0, r.status);
  EXPECT_EQ(0u, r.out.find("non-coherent (monotonicity violated at V)\n"));
  EXPECT_EQ(1, Cli("coherence " + SamplePath("sif_example.json") + " --limit 3").status);
}

TEST(CliTest, CoherenceUnusedEvent) {
  TempDocument doc(R"({"top": "T",
    "events": {"A": {"model": "fixed", "p": 0.1}, "B": {"model": "fixed", "p": 0.1},
               "C": {"model": "fixed", "p": 0.1}},
    "gates": {"T": {"type": "or", "inputs": ["A", "B"]}}})");
  auto r = Cli("coherence " + doc.path());
  EXPECT_EQ(0, r.status);
  EXPECT_NE(std::string::npos, r.out.find("relevance violated at C"));
}

}  // namespace
