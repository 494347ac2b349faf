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

// End-to-end hybrid verification: train-half statistics, test-half
// evaluation of every matcher, every MCW-fused modality and the evidential
// (hybrid) output.
//
// Comparisons are assigned to the training half when both subjects are
// training subjects and to the test half when both are test subjects;
// comparisons straddling the split are dropped.

#ifndef FUSIONBENCH_PIPELINE_H_
#define FUSIONBENCH_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fusionbench/ds_fusion.h"
#include "fusionbench/evaluation.h"
#include "fusionbench/io.h"
#include "fusionbench/kernels.h"
#include "fusionbench/scores.h"

namespace fusionbench {

std::vector<ModalitySpec> DefaultModalities();

struct PipelineOptions {
  std::vector<ModalitySpec> modalities = DefaultModalities();
  DsVariant variant = DsVariant::kTwoMass;
  EvalOptions eval;
  std::optional<std::uint64_t> split_seed;
  // Fixed decision threshold on m_final(Gen); the training EER threshold of
  // the hybrid score when unset.
  std::optional<double> threshold;
  bool parallel = true;
};

// Splits a score set into training and test comparisons.
struct SplitScores {
  ScoreSet train;
  ScoreSet test;
  std::vector<std::string> train_subjects;
  std::vector<std::string> test_subjects;
};
SplitScores SplitScoreSet(const ScoreSet& scores,
                          std::optional<std::uint64_t> seed = {});

// Comparisons of a score set with the scores of every matcher in
// `modalities` gathered per probe. DataError (LookupError) when a comparison
// lacks one of the matchers.
struct ProbeTable {
  std::vector<Comparison> comparisons;
  std::vector<ProbeScores> scores;
};
ProbeTable GroupByComparison(const ScoreSet& scores,
                             const std::vector<ModalitySpec>& modalities);

struct WeightTraceRow {
  Comparison comparison;
  std::string modality;
  std::string matcher;
  double weight = 0.0;
};

// Result of fusing scores within each modality (MCW only).
struct McwResult {
  MatcherStats stats;      // pooled, from the training half
  ScoreSet fused;          // matcher = "mcw:<modality>", train + test records
  std::vector<WeightTraceRow> weights;
};
McwResult RunMcw(const SplitScores& split, const PipelineOptions& options);

struct PipelineResult {
  std::vector<EvalReport> reports;  // matchers, mcw:<modality>, hybrid
  std::vector<RocCurve> rocs;       // parallel to reports
  std::vector<MassTraceRow> mass_trace;
  std::vector<WeightTraceRow> weights;
  ScoreSet fused_scores;
  std::map<std::string, PredictiveRates> rates;  // per modality
  double threshold = 0.0;
  std::size_t conflicts = 0;
  std::size_t train_subjects = 0;
  std::size_t test_subjects = 0;
};

// Throws TotalConflictError when every test probe hits total conflict.
PipelineResult run_pipeline(const ScoreSet& scores,
                            const PipelineOptions& options);

// Training EER threshold of each modality's fused score, then
// predictive_rate of the resulting decisions.
PredictiveRates TrainPredictiveRates(std::span<const double> fused,
                                     std::span<const Label> truth);

nlohmann::json PipelineReportJson(const PipelineResult& result,
                                  const PipelineOptions& options);
void WriteWeightTrace(std::ostream& out,
                      const std::vector<WeightTraceRow>& rows);

}  // namespace fusionbench

#endif  // FUSIONBENCH_PIPELINE_H_
