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

#include "fusionbench/evaluation.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fusionbench/error.h"

namespace fusionbench {

std::vector<Comparison> generate_comparisons(const SubjectIndex& dataset,
                                             Protocol protocol) {
  if (dataset.size() < 2) {
    throw ProtocolError("protocol needs at least two subjects, got " +
                        std::to_string(dataset.size()));
  }
  std::set<std::string> seen;
  for (const auto& s : dataset) {
    if (s.samples.size() < 2) {
      throw ProtocolError("subject " + s.subject + " has " +
                          std::to_string(s.samples.size()) +
                          " sample(s); at least two are required");
    }
    if (!seen.insert(s.subject).second) {
      throw ProtocolError("subject " + s.subject + " listed twice");
    }
  }

  std::vector<Comparison> out;
  for (const auto& s : dataset) {
    const std::size_t n = s.samples.size();
    const std::size_t galleries = protocol == Protocol::kAllPairs ? n - 1 : 1;
    for (std::size_t g = 0; g < galleries; ++g) {
      for (std::size_t p = g + 1; p < n; ++p) {
        out.push_back({s.subject, s.samples[p], s.subject, s.samples[g],
                       Label::kGenuine});
      }
    }
  }
  for (std::size_t g = 0; g < dataset.size(); ++g) {
    for (std::size_t p = g + 1; p < dataset.size(); ++p) {
      out.push_back({dataset[p].subject, dataset[p].samples.front(),
                     dataset[g].subject, dataset[g].samples.front(),
                     Label::kImposter});
    }
  }
  return out;
}

SubjectSplit split_subjects(std::vector<std::string> subjects,
                            std::optional<std::uint64_t> shuffle_seed) {
  std::sort(subjects.begin(), subjects.end());
  subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
  if (shuffle_seed) {
    std::mt19937_64 rng(*shuffle_seed);
    std::shuffle(subjects.begin(), subjects.end(), rng);
  }
  const std::size_t half = subjects.size() / 2;
  SubjectSplit split;
  split.train.assign(subjects.begin(), subjects.begin() + half);
  split.test.assign(subjects.begin() + half, subjects.end());
  return split;
}

std::vector<Comparison> generate_comparisons(
    const SubjectIndex& dataset, Split split, Protocol protocol,
    std::optional<std::uint64_t> shuffle_seed) {
  std::vector<std::string> names;
  for (const auto& s : dataset) names.push_back(s.subject);
  const SubjectSplit halves = split_subjects(std::move(names), shuffle_seed);
  const auto& keep = split == Split::kTrain ? halves.train : halves.test;
  const std::set<std::string> wanted(keep.begin(), keep.end());
  SubjectIndex subset;
  for (const auto& s : dataset) {
    if (wanted.count(s.subject)) subset.push_back(s);
  }
  return generate_comparisons(subset, protocol);
}

RocCurve roc_curve(std::span<const double> genuine,
                   std::span<const double> imposter) {
  if (genuine.empty() || imposter.empty()) {
    throw InsufficientDataError(
        "ROC needs at least one genuine and one imposter score");
  }
  std::vector<double> gen(genuine.begin(), genuine.end());
  std::vector<double> imp(imposter.begin(), imposter.end());
  std::sort(gen.begin(), gen.end());
  std::sort(imp.begin(), imp.end());

  std::vector<double> thresholds;
  thresholds.reserve(gen.size() + imp.size() + 2);
  thresholds.push_back(0.0);
  thresholds.insert(thresholds.end(), gen.begin(), gen.end());
  thresholds.insert(thresholds.end(), imp.begin(), imp.end());
  thresholds.push_back(1.0);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  RocCurve roc;
  roc.genuine_count = gen.size();
  roc.imposter_count = imp.size();
  roc.points.reserve(thresholds.size());
  const double ng = static_cast<double>(gen.size());
  const double ni = static_cast<double>(imp.size());
  for (double t : thresholds) {
    const auto imp_at_or_below =
        std::upper_bound(imp.begin(), imp.end(), t) - imp.begin();
    const auto gen_at_or_below =
        std::upper_bound(gen.begin(), gen.end(), t) - gen.begin();
    roc.points.push_back(
        {t, (ni - static_cast<double>(imp_at_or_below)) / ni,
         static_cast<double>(gen_at_or_below) / ng});
  }
  return roc;
}

EerPoint eer_point(const RocCurve& roc) {
  const auto& pts = roc.points;
  if (pts.empty()) throw InsufficientDataError("empty ROC curve");
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double d = pts[k].fmr - pts[k].fnmr;
    if (d > 0.0) continue;
    if (d == 0.0) return {100.0 * pts[k].fmr, pts[k].threshold};
    if (k == 0) {
      // FNMR already exceeds FMR at the lowest threshold.
      return {100.0 * 0.5 * (pts[0].fmr + pts[0].fnmr), pts[0].threshold};
    }
    const RocPoint& a = pts[k - 1];
    const RocPoint& b = pts[k];
    const double da = a.fmr - a.fnmr;
    const double alpha = da / (da - d);
    return {100.0 * (a.fmr + alpha * (b.fmr - a.fmr)),
            a.threshold + alpha * (b.threshold - a.threshold)};
  }
  // FMR - FNMR never turned non-positive; cannot happen when the sweep ends
  // at threshold 1 but keep the last point as the answer.
  const RocPoint& last = pts.back();
  return {100.0 * 0.5 * (last.fmr + last.fnmr), last.threshold};
}

double eer(const RocCurve& roc) { return eer_point(roc).eer_percent; }

OperatingPoint operating_point_at_fmr(const RocCurve& roc,
                                      double target_fmr_percent) {
  if (roc.points.empty()) throw InsufficientDataError("empty ROC curve");
  OperatingPoint op;
  double target = target_fmr_percent;
  if (!(target >= 0.0) || target > 100.0) {
    op.clamped = true;
    target = std::clamp(std::isnan(target) ? 0.0 : target, 0.0, 100.0);
  }
  const double limit = target / 100.0;
  const RocPoint* chosen = &roc.points.back();
  for (const auto& p : roc.points) {
    if (p.fmr <= limit) {
      chosen = &p;
      break;
    }
  }
  op.threshold = chosen->threshold;
  op.fmr = chosen->fmr;
  op.fnmr = chosen->fnmr;
  return op;
}

double gmr_at_fmr(const RocCurve& roc, double target_fmr_percent) {
  return 100.0 * (1.0 - operating_point_at_fmr(roc, target_fmr_percent).fnmr);
}

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // population
};

Moments PopulationMoments(std::span<const double> xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / static_cast<double>(xs.size())};
}

}  // namespace

double decidability(std::span<const double> genuine,
                    std::span<const double> imposter) {
  if (genuine.size() < 2 || imposter.size() < 2) {
    throw InsufficientDataError(
        "decidability needs at least two scores per class");
  }
  const Moments g = PopulationMoments(genuine);
  const Moments i = PopulationMoments(imposter);
  const double pooled = (g.variance + i.variance) / 2.0;
  if (pooled <= 0.0) {
    throw DegenerateDistributionError(
        "decidability undefined: both score distributions have zero variance");
  }
  return std::abs(g.mean - i.mean) / std::sqrt(pooled);
}

double z_value(int level_percent) {
  switch (level_percent) {
    case 90:
      return 1.645;
    case 95:
      return 1.960;
    case 99:
      return 2.576;
    default:
      throw DomainError("unsupported confidence level " +
                        std::to_string(level_percent) +
                        " (expected 90, 95 or 99)");
  }
}

HterCi hter_ci(double fmr, double fnmr, std::size_t imposter_count,
               std::size_t genuine_count, int level_percent) {
  const double z = z_value(level_percent);
  if (!(fmr >= 0.0 && fmr <= 1.0 && fnmr >= 0.0 && fnmr <= 1.0)) {
    throw RangeError("error rates must lie in [0,1]");
  }
  if (imposter_count == 0 || genuine_count == 0) {
    throw InsufficientDataError("HTER needs NI >= 1 and NG >= 1");
  }
  const double sigma =
      std::sqrt(fmr * (1.0 - fmr) / (4.0 * static_cast<double>(imposter_count)) +
                fnmr * (1.0 - fnmr) / (4.0 * static_cast<double>(genuine_count)));
  return {(fmr + fnmr) / 2.0, sigma * z};
}

EvalReport evaluate(const std::string& name, std::span<const double> genuine,
                    std::span<const double> imposter,
                    const EvalOptions& options, RocCurve* roc_out) {
  if (options.fmr_targets_percent.empty()) {
    throw ConfigError("evaluation needs at least one FMR target");
  }
  RocCurve roc = roc_curve(genuine, imposter);
  EvalReport report;
  report.name = name;
  report.genuine_count = roc.genuine_count;
  report.imposter_count = roc.imposter_count;

  const EerPoint e = eer_point(roc);
  report.eer_percent = e.eer_percent;
  report.eer_threshold = e.threshold;

  for (double target : options.fmr_targets_percent) {
    const OperatingPoint op = operating_point_at_fmr(roc, target);
    report.gmr.push_back({target, 100.0 * (1.0 - op.fnmr), op.threshold});
  }
  report.d_prime = decidability(genuine, imposter);

  const OperatingPoint hter_op =
      operating_point_at_fmr(roc, options.fmr_targets_percent.front());
  report.hter_threshold = hter_op.threshold;
  for (int level : options.ci_levels) {
    const HterCi ci = hter_ci(hter_op.fmr, hter_op.fnmr, roc.imposter_count,
                              roc.genuine_count, level);
    report.hter_percent = 100.0 * ci.hter;
    report.ci_margin_percent[level] = 100.0 * ci.margin;
  }
  if (options.ci_levels.empty()) {
    report.hter_percent = 100.0 * (hter_op.fmr + hter_op.fnmr) / 2.0;
  }
  if (roc_out != nullptr) *roc_out = std::move(roc);
  return report;
}

}  // namespace fusionbench
