// Copyright 2026 The FusionBench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fusionbench/pipeline.h"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "fusionbench/datagen.h"
#include "fusionbench/error.h"

namespace fusionbench {
namespace {

ScoreSet SmallScores(std::uint64_t seed = 4) {
  SynthConfig c;
  c.n_subjects = 20;
  c.samples_per_subject = 4;
  c.seed = seed;
  c.score_model = DefaultScoreModel();
  return synth_scores(c);
}

TEST(SplitScoreSetTest, DropsStraddlingComparisons) {
  const ScoreSet scores = SmallScores();
  const SplitScores split = SplitScoreSet(scores);
  EXPECT_EQ(split.train_subjects.size(), 10u);
  EXPECT_EQ(split.test_subjects.size(), 10u);
  const std::set<std::string> train(split.train_subjects.begin(),
                                    split.train_subjects.end());
  for (const auto& r : split.train) {
    EXPECT_TRUE(train.count(r.probe_subject) && train.count(r.gallery_subject));
  }
  for (const auto& r : split.test) {
    EXPECT_FALSE(train.count(r.probe_subject) || train.count(r.gallery_subject));
  }
  // Per half: 10 subjects x 6 genuine pairs, C(10,2) imposters, 4 matchers.
  EXPECT_EQ(split.train.size(), (60u + 45u) * 4u);
  EXPECT_EQ(split.test.size(), (60u + 45u) * 4u);
}

TEST(GroupByComparisonTest, GathersScoresInModalityOrder) {
  const ScoreSet scores = SmallScores();
  const ProbeTable table = GroupByComparison(scores, DefaultModalities());
  ASSERT_EQ(table.comparisons.size(), scores.size() / 4);
  EXPECT_EQ(table.scores[0].per_modality[0][1], scores[1].score);  // jaccard
  EXPECT_EQ(table.scores[0].per_modality[1][0], scores[2].score);  // dice
  EXPECT_EQ(table.scores[0].claimed_subject, scores[0].gallery_subject);

  ScoreSet missing = scores;
  missing.erase(missing.begin() + 2);
  EXPECT_THROW(GroupByComparison(missing, DefaultModalities()), LookupError);
}

TEST(PipelineTest, ReportsEveryStage) {
  const PipelineResult r = run_pipeline(SmallScores(), PipelineOptions{});
  std::vector<std::string> names;
  for (const auto& rep : r.reports) names.push_back(rep.name);
  EXPECT_EQ(names, (std::vector<std::string>{"hamming", "jaccard", "dice",
                                             "cosine", "mcw:iris",
                                             "mcw:fingerprint", "hybrid"}));
  EXPECT_EQ(r.rocs.size(), r.reports.size());
  for (const auto& rep : r.reports) {
    EXPECT_EQ(rep.genuine_count, 60u);
    EXPECT_EQ(rep.imposter_count, 45u);
  }
  EXPECT_EQ(r.mass_trace.size(), 105u);
  EXPECT_EQ(r.rates.size(), 2u);
  EXPECT_EQ(r.conflicts, 0u);
  for (const auto& row : r.mass_trace) {
    EXPECT_NEAR(row.m_gen + row.m_imp + row.m_theta, 1.0, 1e-9);
    EXPECT_EQ(row.decision, row.m_gen > r.threshold ? "accept" : "reject");
  }
}

TEST(PipelineTest, SingleMatcherModalitiesHaveUnitWeights) {
  PipelineOptions options;
  options.modalities = {{"iris", {"hamming"}}, {"fingerprint", {"dice"}}};
  const PipelineResult r = run_pipeline(SmallScores(), options);
  ASSERT_FALSE(r.weights.empty());
  for (const auto& w : r.weights) EXPECT_EQ(w.weight, 1.0);
}

TEST(PipelineTest, WeightsSumToOnePerModality) {
  const PipelineResult r = run_pipeline(SmallScores(), PipelineOptions{});
  ASSERT_EQ(r.weights.size() % 2, 0u);
  for (std::size_t i = 0; i < r.weights.size(); i += 2) {
    EXPECT_EQ(r.weights[i].modality, r.weights[i + 1].modality);
    EXPECT_NEAR(r.weights[i].weight + r.weights[i + 1].weight, 1.0, 1e-9);
  }
}

TEST(PipelineTest, SerialAndParallelAgree) {
  PipelineOptions serial;
  serial.parallel = false;
  const auto a = run_pipeline(SmallScores(), serial);
  const auto b = run_pipeline(SmallScores(), PipelineOptions{});
  EXPECT_EQ(PipelineReportJson(a, serial), PipelineReportJson(b, serial));
  std::ostringstream ta, tb;
  WriteMassTrace(ta, a.mass_trace);
  WriteMassTrace(tb, b.mass_trace);
  EXPECT_EQ(ta.str(), tb.str());
}

TEST(PipelineTest, FixedThresholdAndFourMassVariant) {
  PipelineOptions options;
  options.threshold = 0.5;
  options.variant = DsVariant::kFourMass;
  const PipelineResult r = run_pipeline(SmallScores(), options);
  EXPECT_EQ(r.threshold, 0.5);
  const auto j = PipelineReportJson(r, options);
  EXPECT_EQ(j.at("hybrid").at("ds_masses"), 4);
  EXPECT_EQ(j.at("hybrid").at("threshold"), 0.5);
}

TEST(PipelineTest, ConfigAndDataErrors) {
  PipelineOptions options;
  options.modalities = {{"iris", {"hamming"}}, {"iris", {"dice"}}};
  EXPECT_THROW(run_pipeline(SmallScores(), options), ConfigError);
  options.modalities = {{"iris", {"hamming"}}, {"fp", {"hamming"}}};
  EXPECT_THROW(run_pipeline(SmallScores(), options), ConfigError);
  options.modalities = {{"iris", {"hamming"}}, {"fp", {"minutiae"}}};
  EXPECT_THROW(run_pipeline(SmallScores(), options), LookupError);
}

TEST(TrainPredictiveRatesTest, SeparableTrainingIsPerfect) {
  const std::vector<double> fused = {0.9, 0.8, 0.2, 0.1};
  const std::vector<Label> truth = {Label::kGenuine, Label::kGenuine,
                                    Label::kImposter, Label::kImposter};
  const PredictiveRates r = TrainPredictiveRates(fused, truth);
  EXPECT_EQ(r.genuine.rate, 1.0);
  EXPECT_EQ(r.imposter.rate, 1.0);
}

}  // namespace
}  // namespace fusionbench
