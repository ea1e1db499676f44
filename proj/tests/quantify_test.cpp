#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "ftkit/bdd.hpp"
#include "ftkit/document.hpp"
#include "ftkit/normalize.hpp"
#include "ftkit/qualitative.hpp"
#include "ftkit/quantify.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace ftkit::test {
namespace {

FaultTree Sample(const std::string& name) {
  std::ifstream in(std::string(FTKIT_SAMPLES_DIR) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseTree(buf.str());
}

CutSet Set(std::initializer_list<const char*> names) {
  CutSet s;
  for (std::string n : names) {
    bool neg = n.front() == '!';
    s.insert({neg ? n.substr(1) : n, neg});
  }
  return s;
}

ImplicantSet Sets(ImplicantKind kind, std::vector<CutSet> members) {
  return {kind, std::move(members)};
}

double Top(const ImplicantSet& sets, const ProbabilityMap& q, QMethod method,
           std::optional<std::size_t> order = std::nullopt) {
  QuantConfig cfg;
  cfg.q_method = method;
  cfg.ie_max_order = order;
  return TopQ(sets, q, cfg);
}

struct SifFixture {
  SifFixture() {
    auto tree = Sample("sif_example.json");
    for (const auto& [id, m] : EventMeasures(tree)) {
      q[id] = m.q;
      w[id] = m.w;
    }
    sets = Minimize(Mocus(Normalize(tree)));
  }
  ProbabilityMap q;
  FrequencyMap w;
  ImplicantSet sets;
};

const ProbabilityMap kGasQ{{"L", 0.05}, {"V", 0.05}, {"I", 0.05}, {"R", 0.05}};

TEST(McsQTest, Examples) {
  EXPECT_PRINTS_AS(McsQ(Set({"V1", "V2"}), {{"V1", 6.553E-3}, {"V2", 6.553E-3}}),
                   4.29E-5, 3);
  EXPECT_NEAR(2.375E-3, McsQ(Set({"L", "!V", "R"}), kGasQ), 1e-17);
  EXPECT_EQ(1.0, McsQ(CutSet{}, {}));
  EXPECT_EQ(0.3, McsQ(Set({"A"}), {{"A", 0.3}}));
  EXPECT_THROW(McsQ(Set({"A"}), {}), DomainError);
}

TEST(McsWTest, SifSets) {
  SifFixture f;
  EXPECT_PRINTS_AS(McsQ(Set({"S1", "S3"}), f.q), 7.67E-7, 3);
  EXPECT_PRINTS_AS(McsW(Set({"S1", "S3"}), f.q, f.w), 8.75E-11, 3);
  EXPECT_PRINTS_AS(McsW(Set({"L1", "R1"}), f.q, f.w), 3.36E-11, 3);
}

TEST(McsWTest, SingleLiteral) {
  EXPECT_EQ(0.02, McsW(Set({"A"}), {{"A", 0.3}}, {{"A", 0.02}}));
}

TEST(McsWTest, NegatedLiteralPolicy) {
  ProbabilityMap q{{"A", 0.1}, {"B", 0.2}};
  FrequencyMap w{{"A", 1e-3}, {"B", 2e-3}};
  auto set = Set({"A", "!B"});
  EXPECT_DOUBLE_EQ(1e-3 * 0.8, McsW(set, q, w, NotFrequencyPolicy::kZero));
  EXPECT_DOUBLE_EQ(1e-3 * 0.8 + 2e-3 * 0.1,
                   McsW(set, q, w, NotFrequencyPolicy::kMirror));
}

TEST(McsWTest, LinearInFrequency) {
  std::mt19937_64 rng(41);
  std::vector<EventId> ids{"A", "B", "C", "D"};
  for (int trial = 0; trial < 100; ++trial) {
    auto q = ByName(ids, RandomProbabilities(rng, 4, 0, 1));
    auto w = ByName(ids, RandomProbabilities(rng, 4, 0, 1e-3));
    FrequencyMap doubled;
    for (const auto& [id, v] : w) doubled[id] = 2 * v;
    auto set = Set({"A", "!B", "C", "D"});
    for (auto policy : {NotFrequencyPolicy::kZero, NotFrequencyPolicy::kMirror}) {
      EXPECT_NEAR(2 * McsW(set, q, w, policy), McsW(set, q, doubled, policy), 1e-18);
    }
  }
}

TEST(McsWTest, AgreesWithAndFrequency) {
  ProbabilityMap q{{"A", 0.1}, {"B", 0.2}};
  FrequencyMap w{{"A", 1e-3}, {"B", 2e-3}};
  EXPECT_DOUBLE_EQ(AndFrequency(1e-3, 0.1, 2e-3, 0.2), McsW(Set({"A", "B"}), q, w));
}

TEST(TopQTest, SifEsaryProschan) {
  SifFixture f;
  EXPECT_PRINTS_AS(Top(f.sets, f.q, QMethod::kEp), 4.497E-5, 4);
}

TEST(TopQTest, GasLeakageBooleanRow) {
  auto sets = Sets(ImplicantKind::kMinimal, {Set({"L", "V", "I"}), Set({"L", "!V", "R"})});
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kExactIe), 2.500000E-3, 7);
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kEpCommon), 2.494063E-3, 7);
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kEp), 2.499703E-3, 7);
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kRareEvent), 2.500000E-3, 7);
}

TEST(TopQTest, GasLeakageCoherentApproximationRow) {
  auto sets = Sets(ImplicantKind::kMinimal, {Set({"L", "V", "I"}), Set({"L", "R"})});
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kExactIe), 2.618750E-3, 7);
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kEpCommon), 2.618750E-3, 7);
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kEp), 2.624688E-3, 7);
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kRareEvent), 2.625000E-3, 7);
}

TEST(TopQTest, GasLeakagePrimeImplicantRow) {
  auto sets = Sets(ImplicantKind::kPrime, {Set({"L", "V", "I"}), Set({"L", "!V", "R"}),
                                           Set({"L", "R", "I"})});
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kExactIe), 2.500000E-3, 7);
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kEpCommon), 2.612827E-3, 7);
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kEp), 2.624391E-3, 7);
  EXPECT_PRINTS_AS(Top(sets, kGasQ, QMethod::kRareEvent), 2.625000E-3, 7);
}

TEST(TopQTest, NonCoherentInputBreaksBoundChain) {
  auto sets = Sets(ImplicantKind::kMinimal, {Set({"L", "V", "I"}), Set({"L", "!V", "R"})});
  EXPECT_GT(Top(sets, kGasQ, QMethod::kExactIe), Top(sets, kGasQ, QMethod::kEpCommon));
}

TEST(TopQTest, EmptyListWarns) {
  std::vector<std::string> warnings;
  QuantConfig cfg;
  for (auto method : kAllQMethods) {
    cfg.q_method = method;
    EXPECT_EQ(0.0, TopQ(ImplicantSet{}, {}, cfg, &warnings));
  }
  EXPECT_EQ(4u, warnings.size());
}

TEST(TopQTest, EpCommonWithoutCommonLiteralEqualsEp) {
  auto sets = Sets(ImplicantKind::kMinimal, {Set({"A", "B"}), Set({"C"})});
  ProbabilityMap q{{"A", 0.1}, {"B", 0.2}, {"C", 0.3}};
  EXPECT_EQ(Top(sets, q, QMethod::kEp), Top(sets, q, QMethod::kEpCommon));
}

TEST(TopQTest, InclusionExclusionOrder) {
  auto sets = Sets(ImplicantKind::kMinimal, {Set({"A"}), Set({"B"})});
  ProbabilityMap q{{"A", 0.1}, {"B", 0.2}};
  EXPECT_NEAR(0.3, Top(sets, q, QMethod::kExactIe, 1), 1e-16);
  EXPECT_NEAR(0.28, Top(sets, q, QMethod::kExactIe), 1e-16);
  EXPECT_THROW(Top(sets, q, QMethod::kExactIe, 0), DomainError);
}

TEST(TopQTest, AutomaticTruncationAboveLimit) {
  ImplicantSet sets{ImplicantKind::kMinimal, {}};
  ProbabilityMap q;
  for (int i = 0; i < 25; ++i) {
    auto id = "E" + std::to_string(i);
    q[id] = 0.01;
    sets.members.push_back(CutSet{{id, false}});
  }
  std::vector<std::string> warnings;
  QuantConfig cfg;
  cfg.q_method = QMethod::kExactIe;
  double truncated = TopQ(sets, q, cfg, &warnings);
  ASSERT_EQ(1u, warnings.size());
  EXPECT_NE(std::string::npos, warnings[0].find("order 3"));
  cfg.ie_max_order = 3;
  EXPECT_EQ(truncated, TopQ(sets, q, cfg));
}

TEST(TopQTest, BoundChainOnPositiveTrees) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    auto tree = RandomTree(rng, {});
    auto sets = Minimize(Mocus(Normalize(tree)));
    auto qv = RandomProbabilities(rng, tree.events.size(), 1e-6, 0.2);
    auto q = ByName(tree.EventIds(), qv);
    double exact = Top(sets, q, QMethod::kExactIe, kUnlimitedOrder);
    double common = Top(sets, q, QMethod::kEpCommon);
    double ep = Top(sets, q, QMethod::kEp);
    double rare = Top(sets, q, QMethod::kRareEvent);
    EXPECT_LE(exact, common + 1e-12);
    EXPECT_LE(common, ep + 1e-12);
    EXPECT_LE(ep, rare + 1e-12);
    EXPECT_NEAR(MintermProbability(TruthTable(tree), qv), exact, 1e-12);
  }
}

TEST(TopQTest, ExactMatchesBddProbability) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    auto tree = RandomTree(rng, {.max_events = 10, .allow_negation = trial % 2 == 1});
    auto bdd = BuildBdd(Normalize(tree), tree.EventIds());
    auto primes = PrimeImplicants(bdd);
    auto q = ByName(tree.EventIds(),
                    RandomProbabilities(rng, tree.events.size(), 0, 1));
    if (primes.members.empty()) continue;
    EXPECT_NEAR(BddProbability(bdd, q),
                Top(primes, q, QMethod::kExactIe, kUnlimitedOrder), 1e-12);
  }
}

TEST(TopQTest, BonferroniAlternation) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    auto tree = RandomTree(rng, {.max_events = 10});
    auto sets = Minimize(Mocus(Normalize(tree)));
    auto q = ByName(tree.EventIds(),
                    RandomProbabilities(rng, tree.events.size(), 0, 0.5));
    double exact = Top(sets, q, QMethod::kExactIe, kUnlimitedOrder);
    for (std::size_t order = 1; order <= 5; ++order) {
      double partial = Top(sets, q, QMethod::kExactIe, order);
      if (order % 2 == 0)
        EXPECT_LE(partial, exact + 1e-12) << "order " << order;
      else
        EXPECT_GE(partial, exact - 1e-12) << "order " << order;
    }
  }
}

TEST(TopWTest, SifExample) {
  SifFixture f;
  EXPECT_PRINTS_AS(TopW(f.sets, f.q, f.w), 1.987E-8, 4);
}

TEST(TopWTest, SingleSet) {
  auto sets = Sets(ImplicantKind::kMinimal, {Set({"A"})});
  EXPECT_DOUBLE_EQ(0.02, TopW(sets, {{"A", 0.3}}, {{"A", 0.02}}));
}

TEST(TopWTest, DisjointSingletonsMatchOrFrequency) {
  auto sets = Sets(ImplicantKind::kMinimal, {Set({"A"}), Set({"B"})});
  EXPECT_DOUBLE_EQ(OrFrequency(0.02, 0.3, 0.05, 0.1),
                   TopW(sets, {{"A", 0.3}, {"B", 0.1}}, {{"A", 0.02}, {"B", 0.05}}));
}

TEST(TopWTest, CertainSetIsAnError) {
  auto sets = Sets(ImplicantKind::kMinimal, {Set({"A"}), Set({"B"})});
  EXPECT_THROW(TopW(sets, {{"A", 1.0}, {"B", 0.1}}, {{"A", 0.0}, {"B", 0.05}}),
               DomainError);
}

TEST(FrequencyAlgebraTest, AndFrequency) {
  EXPECT_PRINTS_AS(AndFrequency(0.01, 5.7E-6, 0.01, 5.7E-6), 1.14E-7, 3);
  EXPECT_PRINTS_AS(AndFrequencyFromDurations(1.14E-6, 5, 1.14E-6, 5), 1.3E-11, 2);
  EXPECT_PRINTS_AS(AndFrequencyFromDurations(1.14E-6, 5, 1.14E-6, 5) * kHoursPerYear,
                   1.14E-7, 3);
  EXPECT_EQ(0.0, AndFrequency(0.01, 0, 0.02, 0));
}

TEST(FrequencyAlgebraTest, OrFrequency) {
  // 0.02 (1 - 5.7E-6) = 0.02 - 1.14E-7.
  EXPECT_NEAR(1.9999886E-2, OrFrequency(0.01, 5.7E-6, 0.01, 5.7E-6), 1e-17);
  EXPECT_EQ(0.03, OrFrequency(0.01, 0, 0.02, 0));
}

TEST(FrequencyAlgebraTest, OrIdentity) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    double wa = u(rng), qa = u(rng), wb = u(rng), qb = u(rng);
    EXPECT_NEAR(wa + wb - AndFrequency(wa, qa, wb, qb), OrFrequency(wa, qa, wb, qb),
                1e-15);
  }
}

TEST(QuantifyTest, SifPerSetValues) {
  auto tree = Sample("sif_example.json");
  auto sets = Minimize(Mocus(Normalize(tree)));
  auto result = Quantify(sets, EventMeasures(tree), {},
                         {std::begin(kAllQMethods), std::end(kAllQMethods)});
  ASSERT_EQ(7u, result.per_set.size());
  std::map<CutSet, std::pair<double, double>> expected{
      {Set({"S1", "S3"}), {7.67E-7, 8.75E-11}}, {Set({"S1", "R1"}), {4.20E-10, 5.26E-11}},
      {Set({"S2", "S3"}), {7.67E-7, 8.75E-11}}, {Set({"S2", "R1"}), {4.20E-10, 5.26E-11}},
      {Set({"L1", "S3"}), {4.90E-7, 2.80E-11}}, {Set({"L1", "R1"}), {2.69E-10, 3.36E-11}},
      {Set({"V1", "V2"}), {4.29E-5, 1.95E-8}}};
  for (const auto& ps : result.per_set) {
    auto [q, w] = expected.at(ps.set);
    EXPECT_PRINTS_AS(ps.q, q, 3) << ToString(ps.set);
    EXPECT_PRINTS_AS(ps.w, w, 3) << ToString(ps.set);
  }
  EXPECT_PRINTS_AS(result.top_q.at(QMethod::kEp), 4.497E-5, 4);
  EXPECT_PRINTS_AS(result.top_w, 1.987E-8, 4);
  EXPECT_TRUE(result.warnings.empty());
}

TEST(QuantifyTest, NegationWarning) {
  auto sets = Sets(ImplicantKind::kMinimal, {Set({"L", "V", "I"}), Set({"L", "!V", "R"})});
  std::map<EventId, Measure> m;
  for (const auto& [id, q] : kGasQ) m[id] = {q, 0};
  auto result = Quantify(sets, m, {}, {QMethod::kEp});
  ASSERT_EQ(1u, result.warnings.size());
  EXPECT_NE(std::string::npos, result.warnings[0].find("non-coherent"));
}

TEST(QuantifyTest, ZeroRateEventsGiveZeroMeasures) {
  auto tree = Sample("sif_example.json");
  OrderedMap<BasicEventModel> events;
  for (auto [id, model] : tree.events) {
    if (auto* d = std::get_if<DormantModel>(&model)) d->lambda = 0;
    if (auto* r = std::get_if<RateModel>(&model)) r->lambda = 0;
    if (auto* f = std::get_if<FixedModel>(&model)) f->p = 0;
    events.Insert(id, model);
  }
  tree.events = events;
  auto sets = Minimize(Mocus(Normalize(tree)));
  auto result = Quantify(sets, EventMeasures(tree), {},
                         {std::begin(kAllQMethods), std::end(kAllQMethods)});
  for (const auto& ps : result.per_set) {
    EXPECT_EQ(0.0, ps.q);
    EXPECT_EQ(0.0, ps.w);
  }
  for (const auto& [method, value] : result.top_q) EXPECT_EQ(0.0, value);
  EXPECT_EQ(0.0, result.top_w);
}

TEST(QuantifyTest, MissionTimeOverride) {
  auto tree = Sample("sif_example.json");
  auto base = EventMeasures(tree);
  auto shorter = EventMeasures(tree, 1.0);
  EXPECT_LT(shorter.at("R1").q, base.at("R1").q);
  EXPECT_EQ(shorter.at("S1").q, base.at("S1").q);
  tree.mission_time.reset();
  EXPECT_THROW(EventMeasures(tree), DomainError);
}

}  // namespace
}  // namespace ftkit::test
