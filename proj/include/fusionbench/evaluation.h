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

// Verification protocol and metrics.
//
// Scores are similarities: a comparison is accepted when score > threshold.
// FMR(t) is the fraction of imposter scores above t and FNMR(t) the fraction
// of genuine scores at or below t. Rates inside RocCurve are fractions;
// functions returning "percent" say so in their name or comment.

#ifndef FUSIONBENCH_EVALUATION_H_
#define FUSIONBENCH_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fusionbench/scores.h"

namespace fusionbench {

// ---------------------------------------------------------------------------
// Comparison protocol

enum class Protocol {
  kAllPairs,     // genuine: every unordered pair of a subject's samples
  kFirstVsRest,  // genuine: first sample against each remaining sample
};

// Imposter pairs are the same for both protocols: first sample of each
// subject against the first sample of every later subject.

struct SubjectSamples {
  std::string subject;
  std::vector<std::string> samples;  // first entry is the "first sample"
  friend bool operator==(const SubjectSamples&,
                         const SubjectSamples&) = default;
};
using SubjectIndex = std::vector<SubjectSamples>;

struct Comparison {
  std::string probe_subject;
  std::string probe_sample;
  std::string gallery_subject;
  std::string gallery_sample;
  Label label = Label::kGenuine;

  friend bool operator==(const Comparison&, const Comparison&) = default;
};

// Genuine pairs first (subject order, then sample order), then imposters.
// Throws ProtocolError when fewer than two subjects are given or a subject
// has fewer than two samples.
std::vector<Comparison> generate_comparisons(const SubjectIndex& dataset,
                                             Protocol protocol);

enum class Split { kTrain, kTest };

struct SubjectSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

// Subjects sorted lexicographically (or shuffled with `shuffle_seed`); the
// first floor(U/2) go to training, the rest to test.
SubjectSplit split_subjects(std::vector<std::string> subjects,
                            std::optional<std::uint64_t> shuffle_seed = {});

// Restricts `dataset` to one half of split_subjects before generating pairs.
std::vector<Comparison> generate_comparisons(
    const SubjectIndex& dataset, Split split, Protocol protocol,
    std::optional<std::uint64_t> shuffle_seed = {});

// ---------------------------------------------------------------------------
// ROC and derived operating points

struct RocPoint {
  double threshold = 0.0;
  double fmr = 0.0;
  double fnmr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // thresholds strictly increasing
  std::size_t genuine_count = 0;
  std::size_t imposter_count = 0;
};

// Sweeps every distinct observed score plus the endpoints 0 and 1. Throws
// InsufficientDataError when either class is empty.
RocCurve roc_curve(std::span<const double> genuine,
                   std::span<const double> imposter);

struct EerPoint {
  double eer_percent = 0.0;
  double threshold = 0.0;
};

// Crossing of FMR and FNMR, linearly interpolated between the two sweep
// points bracketing the sign change of FMR - FNMR.
EerPoint eer_point(const RocCurve& roc);
double eer(const RocCurve& roc);  // percent

struct OperatingPoint {
  double threshold = 0.0;
  double fmr = 0.0;
  double fnmr = 0.0;
  bool clamped = false;  // the requested FMR was outside [0, 100] percent
};

// Smallest sweep threshold whose FMR <= target (target in percent).
OperatingPoint operating_point_at_fmr(const RocCurve& roc,
                                      double target_fmr_percent);
// 100 * (1 - FNMR) at operating_point_at_fmr.
double gmr_at_fmr(const RocCurve& roc, double target_fmr_percent);

// |mu_gen - mu_imp| / sqrt((var_gen + var_imp) / 2), population variances.
double decidability(std::span<const double> genuine,
                    std::span<const double> imposter);

// Two-sided normal quantile for a 90/95/99 percent interval.
double z_value(int level_percent);

struct HterCi {
  double hter = 0.0;
  double margin = 0.0;
};

// Rates are fractions; so are the outputs.
HterCi hter_ci(double fmr, double fnmr, std::size_t imposter_count,
               std::size_t genuine_count, int level_percent);

// ---------------------------------------------------------------------------
// Report

struct GmrEntry {
  double target_fmr_percent = 0.0;
  double gmr_percent = 0.0;
  double threshold = 0.0;
};

struct EvalOptions {
  std::vector<double> fmr_targets_percent = {0.01, 0.1, 1.0};
  std::vector<int> ci_levels = {90, 95, 99};
};

struct EvalReport {
  std::string name;
  double eer_percent = 0.0;
  double eer_threshold = 0.0;
  std::vector<GmrEntry> gmr;
  double d_prime = 0.0;
  // HTER and its CI margins are taken at the first FMR target.
  double hter_percent = 0.0;
  double hter_threshold = 0.0;
  std::map<int, double> ci_margin_percent;
  std::size_t genuine_count = 0;
  std::size_t imposter_count = 0;
};

EvalReport evaluate(const std::string& name, std::span<const double> genuine,
                    std::span<const double> imposter,
                    const EvalOptions& options = {},
                    RocCurve* roc_out = nullptr);

}  // namespace fusionbench

#endif  // FUSIONBENCH_EVALUATION_H_
