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

// Seeded synthetic multimodal data: iris-like bit templates, fingerprint-like
// descriptor matrices and raw matcher scores. Modalities of one virtual
// subject are generated from independent random streams and share nothing
// but the subject id.

#ifndef FUSIONBENCH_DATAGEN_H_
#define FUSIONBENCH_DATAGEN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fusionbench/dataset.h"
#include "fusionbench/evaluation.h"
#include "fusionbench/scores.h"

namespace fusionbench {

// Score distribution of one matcher. Genuine and imposter scores are normal
// draws truncated to [0,1] by rejection. Matchers of the same modality share
// a latent factor: latent = sqrt(rho) * z_shared + sqrt(1 - rho) * z_own.
struct MatcherScoreModel {
  std::string matcher;
  std::string modality;
  double gen_mean = 0.0;
  double gen_std = 0.0;
  double imp_mean = 0.0;
  double imp_std = 0.0;
  double correlation = 0.0;  // rho in [0,1]
};

struct SynthConfig {
  std::size_t n_subjects = 50;
  std::size_t samples_per_subject = 7;

  std::size_t iris_bits = 1024;
  double intra_flip_rate = 0.25;  // in [0, 0.5)

  std::size_t fp_minutiae_min = 20;
  std::size_t fp_minutiae_max = 40;
  std::size_t descriptor_dim = 16;
  double descriptor_noise = 0.5;

  std::optional<std::vector<MatcherScoreModel>> score_model;
  std::uint64_t seed = 1;
};

// Throws ConfigError naming the offending field.
void ValidateSynthConfig(const SynthConfig& config);

// Zero-padded ids so lexicographic order equals numeric order.
std::string SyntheticSubjectId(std::size_t index);
std::string SyntheticSampleId(std::size_t index);
SubjectIndex SyntheticSubjectIndex(const SynthConfig& config);

TemplateDataset synth_templates(const SynthConfig& config);

// One record per (comparison, matcher), comparison-major, for the pairs of
// generate_comparisons over all subjects. ConfigError without score_model.
ScoreSet synth_scores(const SynthConfig& config,
                      Protocol protocol = Protocol::kAllPairs);

// Default score models for two matchers per modality; per-matcher
// decidability between 2.2 and 2.8.
std::vector<MatcherScoreModel> DefaultScoreModel();

}  // namespace fusionbench

#endif  // FUSIONBENCH_DATAGEN_H_
