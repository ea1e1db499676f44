#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "ftkit/analysis.hpp"
#include "ftkit/document.hpp"
#include "ftkit/report.hpp"

namespace ftkit::test {
namespace {

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FaultTree Sample(const std::string& name) {
  return ParseTree(ReadText(std::string(FTKIT_SAMPLES_DIR) + "/" + name));
}

TEST(FormatNumberTest, Layout) {
  EXPECT_EQ("2.494063E-03", FormatNumber(2.4940625E-3));
  EXPECT_EQ("2.624391E-03", FormatNumber(2.62439140625E-3));
  EXPECT_EQ("1.000000E00", FormatNumber(1.0));
  EXPECT_EQ("0.000000E00", FormatNumber(0.0));
  EXPECT_EQ("3.504000E04", FormatNumber(35040));
  EXPECT_EQ("-1.500000E-07", FormatNumber(-1.5E-7));
  EXPECT_EQ("1.000000E01", FormatNumber(9.9999996));
  EXPECT_EQ("1.234568E123", FormatNumber(1.2345675E123));
  EXPECT_EQ("NaN", FormatNumber(std::nan("")));
}

TEST(FormatNumberTest, IndependentOfExponentSign) {
  EXPECT_EQ("5.000000E-01", FormatNumber(0.5));
  EXPECT_EQ("5.000000E02", FormatNumber(500));
}

ReportOptions Options(CutSetMethod method, bool approx) {
  ReportOptions opts;
  opts.cutsets.method = method;
  opts.cutsets.coherent_approx = approx;
  return opts;
}

TEST(ReportTest, JsonRoundTrip) {
  for (const char* name : {"sif_example.json", "gas_leakage.json", "consensus.json",
                           "two_out_of_three.json"}) {
    for (auto method : {CutSetMethod::kMocus, CutSetMethod::kBdd}) {
      auto opts = Options(method, false);
      opts.per_year = method == CutSetMethod::kBdd;
      auto report = Analyze(Sample(name), opts);
      auto text = ToJson(report).dump(2);
      auto back = ReportFromJson(nlohmann::ordered_json::parse(text));
      EXPECT_EQ(report, back) << name;
      EXPECT_EQ(text, ToJson(back).dump(2)) << name;
    }
  }
}

TEST(ReportTest, MachineKeys) {
  auto doc = ToJson(Analyze(Sample("gas_leakage.json"), Options(CutSetMethod::kBdd, false)));
  for (const char* key : {"pi", "q_exact_ie", "q_ep_common", "q_ep", "q_rare_event",
                          "w_top", "per_set", "units", "config", "coherence"})
    EXPECT_TRUE(doc.contains(key)) << key;
  EXPECT_FALSE(doc.contains("mcs"));
  EXPECT_EQ(3u, doc["pi"].size());
}

TEST(ReportTest, MalformedReport) {
  EXPECT_THROW(ReportFromJson(nlohmann::ordered_json::parse("{}")), Error);
}

TEST(ReportTest, SetsAreSortedBySizeThenDeclaration) {
  auto report = Analyze(Sample("gas_leakage.json"), Options(CutSetMethod::kBdd, true));
  ASSERT_EQ(2u, report.sets.size());
  EXPECT_EQ((std::vector<Literal>{{"L", false}, {"R", false}}), report.sets[0].literals);
  EXPECT_EQ((std::vector<Literal>{{"L", false}, {"V", false}, {"I", false}}),
            report.sets[1].literals);
}

TEST(ReportTest, CoherenceSummary) {
  auto report = Analyze(Sample("gas_leakage.json"), Options(CutSetMethod::kMocus, false));
  EXPECT_EQ("non-coherent (monotonicity violated at V)", CoherenceVerdict(report.coherence));
  auto opts = Options(CutSetMethod::kMocus, false);
  opts.coherence_event_limit = 2;
  EXPECT_EQ("not checked",
            CoherenceVerdict(Analyze(Sample("gas_leakage.json"), opts).coherence));
}

struct GoldenCase {
  const char* sample;
  CutSetMethod method;
  bool approx;
  bool per_year;
  const char* golden;
};

TEST(ReportTest, GoldenTables) {
  const GoldenCase cases[] = {
      {"sif_example.json", CutSetMethod::kMocus, false, false, "sif_example.txt"},
      {"gas_leakage.json", CutSetMethod::kMocus, false, false, "gas_leakage_mocus.txt"},
      {"gas_leakage.json", CutSetMethod::kBdd, true, false, "gas_leakage_approx.txt"},
      {"gas_leakage.json", CutSetMethod::kBdd, false, false, "gas_leakage_bdd.txt"},
      {"consensus.json", CutSetMethod::kBdd, false, false, "consensus.txt"},
      {"two_out_of_three.json", CutSetMethod::kMocus, false, true, "two_out_of_three.txt"},
  };
  for (const auto& c : cases) {
    auto opts = Options(c.method, c.approx);
    opts.per_year = c.per_year;
    auto table = RenderTable(Analyze(Sample(c.sample), opts));
    EXPECT_EQ(ReadText(std::string(FTKIT_GOLDEN_DIR) + "/" + c.golden), table)
        << c.golden;
  }
}

}  // namespace
}  // namespace ftkit::test
