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

// Batch kernels. Each has a serial reference and an OpenMP version; the two
// must produce identical output for identical input. Parallel versions write
// into preallocated slots indexed by input position, so output order never
// depends on scheduling. An exception thrown by any item is rethrown after the
// loop, choosing the lowest failing index.

#ifndef FUSIONBENCH_KERNELS_H_
#define FUSIONBENCH_KERNELS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fusionbench/dataset.h"
#include "fusionbench/ds_fusion.h"
#include "fusionbench/evaluation.h"
#include "fusionbench/score_fusion.h"
#include "fusionbench/scores.h"

namespace fusionbench {

enum class Matcher { kHamming, kJaccard, kDice, kCosine };

inline constexpr Matcher kAllMatchers[] = {Matcher::kHamming, Matcher::kJaccard,
                                           Matcher::kDice, Matcher::kCosine};

std::string_view MatcherName(Matcher matcher);
std::string_view MatcherModality(Matcher matcher);  // "iris" / "fingerprint"
std::optional<Matcher> ParseMatcher(std::string_view name);

// Score of one comparison: gallery sample is the enrolled template, probe
// sample the query.
double ScoreComparison(const TemplateLookup& lookup, const Comparison& pair,
                       Matcher matcher);

// One record per (comparison, matcher), comparison-major.
ScoreSet match_comparisons_serial(const TemplateDataset& dataset,
                                  std::span<const Comparison> comparisons,
                                  std::span<const Matcher> matchers);
ScoreSet match_comparisons_parallel(const TemplateDataset& dataset,
                                    std::span<const Comparison> comparisons,
                                    std::span<const Matcher> matchers);

// ---------------------------------------------------------------------------
// Per-probe hybrid fusion: MCW within each modality, induced BBAs, Dempster
// combination across modalities.

struct ModalitySpec {
  std::string name;
  std::vector<std::string> matchers;
};

enum class DsVariant {
  kTwoMass,   // one induced BBA per modality
  kFourMass,  // separate belief and disbelief BBAs per modality
};

struct FusionModel {
  std::vector<ModalitySpec> modalities;
  MatcherStats stats;
  // Stats key used for every probe; kPooledUser for pooled statistics.
  // Empty means "use the probe's claimed identity" (gallery subject).
  std::string stats_user = std::string(kPooledUser);
  // One entry per modality, same order. Empty when only MCW is wanted.
  std::vector<PredictiveRates> rates;
  DsVariant variant = DsVariant::kTwoMass;
};

// Scores of one comparison grouped like FusionModel::modalities.
struct ProbeScores {
  std::string claimed_subject;
  std::vector<std::vector<double>> per_modality;
};

struct ProbeFusion {
  std::vector<double> fused;                 // MCW score per modality
  std::vector<std::vector<double>> weights;  // MCW weights per modality
  // Hybrid outputs; zero masses with conflict 1 when total_conflict is set.
  double m_gen = 0.0;
  double m_imp = 0.0;
  double m_theta = 0.0;
  double conflict = 0.0;
  bool total_conflict = false;
};

// MCW step only (FusionModel::rates ignored).
ProbeFusion fuse_probe_scores(const FusionModel& model,
                              const ProbeScores& probe);
// MCW followed by the evidential combination.
ProbeFusion fuse_probe(const FusionModel& model, const ProbeScores& probe);

std::vector<ProbeFusion> fuse_probes_serial(const FusionModel& model,
                                            std::span<const ProbeScores> probes);
std::vector<ProbeFusion> fuse_probes_parallel(
    const FusionModel& model, std::span<const ProbeScores> probes);

}  // namespace fusionbench

#endif  // FUSIONBENCH_KERNELS_H_
