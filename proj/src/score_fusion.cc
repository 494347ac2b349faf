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

#include "fusionbench/score_fusion.h"

#include <algorithm>
#include <cmath>

#include "fusionbench/error.h"

namespace fusionbench {

namespace {

struct Accumulator {
  double sum_gen = 0.0;
  double sum_imp = 0.0;
  std::size_t n_gen = 0;
  std::size_t n_imp = 0;

  void Add(const ScoreRecord& r) {
    if (r.label == Label::kGenuine) {
      sum_gen += r.score;
      ++n_gen;
    } else {
      sum_imp += r.score;
      ++n_imp;
    }
  }
};

MatcherStats Finish(const std::map<MatcherStats::Key, Accumulator>& acc) {
  std::map<MatcherStats::Key, UserMatcherStats> entries;
  for (const auto& [key, a] : acc) {
    if (a.n_gen == 0 || a.n_imp == 0) {
      throw InsufficientTrainingError(
          "no " + std::string(a.n_gen == 0 ? "genuine" : "imposter") +
          " training scores for user " + key.first + ", matcher " +
          key.second);
    }
    entries[key] = {a.sum_gen / static_cast<double>(a.n_gen),
                    a.sum_imp / static_cast<double>(a.n_imp), a.n_gen,
                    a.n_imp};
  }
  return MatcherStats(std::move(entries));
}

void CheckScore(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw RangeError("score " + std::to_string(s) + " outside [0,1]");
  }
}

}  // namespace

MatcherStats::MatcherStats(std::map<Key, UserMatcherStats> entries)
    : entries_(std::move(entries)) {}

const UserMatcherStats& MatcherStats::at(std::string_view user,
                                         std::string_view matcher) const {
  auto it = entries_.find(Key(user, matcher));
  if (it == entries_.end()) {
    throw LookupError("no training statistics for user " + std::string(user) +
                      ", matcher " + std::string(matcher));
  }
  return it->second;
}

bool MatcherStats::contains(std::string_view user,
                            std::string_view matcher) const {
  return entries_.count(Key(user, matcher)) > 0;
}

MatcherStats matcher_statistics(const ScoreSet& training) {
  std::map<MatcherStats::Key, Accumulator> acc;
  for (const auto& r : training) {
    CheckScore(r.score);
    acc[{r.gallery_subject, r.matcher}].Add(r);
    if (r.probe_subject != r.gallery_subject) {
      acc[{r.probe_subject, r.matcher}].Add(r);
    }
  }
  return Finish(acc);
}

MatcherStats pooled_matcher_statistics(const ScoreSet& training) {
  std::map<MatcherStats::Key, Accumulator> acc;
  for (const auto& r : training) {
    CheckScore(r.score);
    acc[{std::string(kPooledUser), r.matcher}].Add(r);
  }
  return Finish(acc);
}

double mean_closure(const UserMatcherStats& stats, double score) {
  CheckScore(score);
  double denominator = stats.mu_imp - score;
  if (std::abs(denominator) < kMeanClosureEpsilon) {
    denominator = kMeanClosureEpsilon;
  }
  const double ratio = (stats.mu_gen - score) / denominator;
  return ratio * ratio;
}

double mean_closure(const MatcherStats& stats, std::string_view user,
                    std::string_view matcher, double score) {
  return mean_closure(stats.at(user, matcher), score);
}

std::vector<double> mcw_weights(std::span<const double> mean_closures) {
  if (mean_closures.empty()) throw DimensionError("no matchers to weight");
  double total = 0.0;
  for (double mc : mean_closures) {
    if (!(mc >= 0.0) || !std::isfinite(mc)) {
      throw RangeError("mean-closure values must be finite and nonnegative");
    }
    total += mc;
  }
  const std::size_t m = mean_closures.size();
  std::vector<double> weights(m, 1.0 / static_cast<double>(m));
  if (total > 0.0) {
    for (std::size_t k = 0; k < m; ++k) weights[k] = mean_closures[k] / total;
  }
  return weights;
}

double fuse_scores(std::span<const double> scores,
                   std::span<const double> weights) {
  if (scores.size() != weights.size()) {
    throw DimensionError("fuse_scores: " + std::to_string(scores.size()) +
                         " scores but " + std::to_string(weights.size()) +
                         " weights");
  }
  if (scores.empty()) return 0.0;
  double fused = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) fused += weights[k] * scores[k];
  // A convex combination leaves [min, max] of its inputs only by rounding.
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  return std::clamp(fused, *lo, *hi);
}

FusedScore mcw_fuse(const MatcherStats& stats, std::string_view user,
                    std::span<const std::string> matchers,
                    std::span<const double> scores) {
  if (matchers.size() != scores.size()) {
    throw DimensionError("mcw_fuse: matcher and score counts differ");
  }
  std::vector<double> mc(scores.size());
  for (std::size_t k = 0; k < scores.size(); ++k) {
    mc[k] = mean_closure(stats, user, matchers[k], scores[k]);
  }
  FusedScore out;
  out.weights = mcw_weights(mc);
  out.score = fuse_scores(scores, out.weights);
  return out;
}

}  // namespace fusionbench
