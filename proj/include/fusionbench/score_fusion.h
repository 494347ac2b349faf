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

// Mean-closure weighting (MCW): fuses the scores of several matchers of one
// modality. Each matcher's weight for a probe is proportional to
//
//   mc = ((mu_gen - s) / (mu_imp - s))^2
//
// where mu_gen / mu_imp are that user's genuine / imposter training means for
// the matcher and s is the matcher's probe score. Weights are normalized over
// the matchers of the modality and the fused score is their weighted sum.

#ifndef FUSIONBENCH_SCORE_FUSION_H_
#define FUSIONBENCH_SCORE_FUSION_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fusionbench/scores.h"

namespace fusionbench {

// Denominator floor for mean_closure when s sits on the imposter mean.
inline constexpr double kMeanClosureEpsilon = 1e-6;

// Key used by pooled statistics in place of a subject id.
inline constexpr std::string_view kPooledUser = "*";

struct UserMatcherStats {
  double mu_gen = 0.0;
  double mu_imp = 0.0;
  std::size_t n_gen = 0;
  std::size_t n_imp = 0;
};

// Immutable per-(user, matcher) training means.
class MatcherStats {
 public:
  using Key = std::pair<std::string, std::string>;  // (user, matcher)

  MatcherStats() = default;
  explicit MatcherStats(std::map<Key, UserMatcherStats> entries);

  // Throws LookupError for an unknown pair.
  const UserMatcherStats& at(std::string_view user,
                             std::string_view matcher) const;
  bool contains(std::string_view user, std::string_view matcher) const;
  const std::map<Key, UserMatcherStats>& entries() const { return entries_; }

 private:
  std::map<Key, UserMatcherStats> entries_;
};

// Per-user means. A record counts toward every subject taking part in it: a
// genuine record toward its one subject, an imposter record toward both the
// probe and the gallery subject. Throws InsufficientTrainingError naming the
// first (user, matcher) pair lacking either class.
MatcherStats matcher_statistics(const ScoreSet& training);

// Means over all training records per matcher, stored under kPooledUser.
// Used when probes come from subjects absent from training.
MatcherStats pooled_matcher_statistics(const ScoreSet& training);

double mean_closure(const UserMatcherStats& stats, double score);
double mean_closure(const MatcherStats& stats, std::string_view user,
                    std::string_view matcher, double score);

// mc / sum(mc); uniform when every mc is zero.
std::vector<double> mcw_weights(std::span<const double> mean_closures);

// Weighted sum. Throws DimensionError on a length mismatch.
double fuse_scores(std::span<const double> scores,
                   std::span<const double> weights);

struct FusedScore {
  double score = 0.0;
  std::vector<double> weights;
};

// Full MCW step for one probe: scores[k] belongs to matchers[k].
FusedScore mcw_fuse(const MatcherStats& stats, std::string_view user,
                    std::span<const std::string> matchers,
                    std::span<const double> scores);

}  // namespace fusionbench

#endif  // FUSIONBENCH_SCORE_FUSION_H_
