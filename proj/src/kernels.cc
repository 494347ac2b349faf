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

#include "fusionbench/kernels.h"

#include <cstdint>
#include <exception>

#include "fusionbench/error.h"

namespace fusionbench {

namespace {

// Runs body(i) for i in [0, n) across OpenMP threads. The exception of the
// lowest failing index wins, matching what a serial loop would throw first.
template <typename Body>
void ParallelFor(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ScoreRecord MakeRecord(const Comparison& c, Matcher m, double score) {
  return {c.probe_subject,   c.probe_sample,
          c.gallery_subject, c.gallery_sample,
          std::string(MatcherName(m)), score, c.label};
}

}  // namespace

std::string_view MatcherName(Matcher matcher) {
  switch (matcher) {
    case Matcher::kHamming:
      return "hamming";
    case Matcher::kJaccard:
      return "jaccard";
    case Matcher::kDice:
      return "dice";
    case Matcher::kCosine:
      return "cosine";
  }
  return "unknown";
}

std::string_view MatcherModality(Matcher matcher) {
  return matcher == Matcher::kHamming || matcher == Matcher::kJaccard
             ? "iris"
             : "fingerprint";
}

std::optional<Matcher> ParseMatcher(std::string_view name) {
  for (Matcher m : kAllMatchers) {
    if (MatcherName(m) == name) return m;
  }
  return std::nullopt;
}

double ScoreComparison(const TemplateLookup& lookup, const Comparison& pair,
                       Matcher matcher) {
  switch (matcher) {
    case Matcher::kHamming:
      return hamming_similarity(
          lookup.iris(pair.gallery_subject, pair.gallery_sample),
          lookup.iris(pair.probe_subject, pair.probe_sample));
    case Matcher::kJaccard:
      return jaccard_similarity(
          lookup.iris(pair.gallery_subject, pair.gallery_sample),
          lookup.iris(pair.probe_subject, pair.probe_sample));
    case Matcher::kDice:
      return fingerprint_similarity(
          lookup.fingerprint(pair.gallery_subject, pair.gallery_sample),
          lookup.fingerprint(pair.probe_subject, pair.probe_sample),
          LocalMeasure::kDice);
    case Matcher::kCosine:
      return fingerprint_similarity(
          lookup.fingerprint(pair.gallery_subject, pair.gallery_sample),
          lookup.fingerprint(pair.probe_subject, pair.probe_sample),
          LocalMeasure::kCosine);
  }
  throw DomainError("unknown matcher");
}

ScoreSet match_comparisons_serial(const TemplateDataset& dataset,
                                  std::span<const Comparison> comparisons,
                                  std::span<const Matcher> matchers) {
  const TemplateLookup lookup(dataset);
  ScoreSet out;
  out.reserve(comparisons.size() * matchers.size());
  for (const auto& c : comparisons) {
    for (Matcher m : matchers) {
      out.push_back(MakeRecord(c, m, ScoreComparison(lookup, c, m)));
    }
  }
  return out;
}

ScoreSet match_comparisons_parallel(const TemplateDataset& dataset,
                                    std::span<const Comparison> comparisons,
                                    std::span<const Matcher> matchers) {
  const TemplateLookup lookup(dataset);
  const std::size_t m = matchers.size();
  std::vector<double> scores(comparisons.size() * m);
  ParallelFor(comparisons.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < m; ++k) {
      scores[i * m + k] = ScoreComparison(lookup, comparisons[i], matchers[k]);
    }
  });
  ScoreSet out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < comparisons.size(); ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      out.push_back(MakeRecord(comparisons[i], matchers[k], scores[i * m + k]));
    }
  }
  return out;
}

ProbeFusion fuse_probe_scores(const FusionModel& model,
                              const ProbeScores& probe) {
  if (probe.per_modality.size() != model.modalities.size()) {
    throw DimensionError("probe has " +
                         std::to_string(probe.per_modality.size()) +
                         " modalities, model has " +
                         std::to_string(model.modalities.size()));
  }
  const std::string& user =
      model.stats_user.empty() ? probe.claimed_subject : model.stats_user;
  ProbeFusion out;
  out.fused.reserve(model.modalities.size());
  out.weights.reserve(model.modalities.size());
  for (std::size_t j = 0; j < model.modalities.size(); ++j) {
    FusedScore f = mcw_fuse(model.stats, user, model.modalities[j].matchers,
                            probe.per_modality[j]);
    out.fused.push_back(f.score);
    out.weights.push_back(std::move(f.weights));
  }
  return out;
}

ProbeFusion fuse_probe(const FusionModel& model, const ProbeScores& probe) {
  ProbeFusion out = fuse_probe_scores(model, probe);
  if (model.rates.size() != model.modalities.size()) {
    throw DimensionError("fusion model needs predictive rates per modality");
  }
  std::vector<MassFunction> masses;
  for (std::size_t j = 0; j < out.fused.size(); ++j) {
    if (model.variant == DsVariant::kTwoMass) {
      masses.push_back(induced_bba(out.fused[j], model.rates[j]));
    } else {
      masses.push_back(induced_belief_bba(out.fused[j], model.rates[j]));
      masses.push_back(induced_disbelief_bba(out.fused[j], model.rates[j]));
    }
  }
  try {
    const Combination c = combine_all_with_conflict(masses);
    out.m_gen = c.mass[kGen];
    out.m_imp = c.mass[kImp];
    out.m_theta = c.mass[kTheta];
    out.conflict = c.conflict;
  } catch (const TotalConflictError&) {
    out.total_conflict = true;
    out.conflict = 1.0;
  }
  return out;
}

std::vector<ProbeFusion> fuse_probes_serial(
    const FusionModel& model, std::span<const ProbeScores> probes) {
  std::vector<ProbeFusion> out;
  out.reserve(probes.size());
  for (const auto& p : probes) out.push_back(fuse_probe(model, p));
  return out;
}

std::vector<ProbeFusion> fuse_probes_parallel(
    const FusionModel& model, std::span<const ProbeScores> probes) {
  std::vector<ProbeFusion> out(probes.size());
  ParallelFor(probes.size(),
              [&](std::size_t i) { out[i] = fuse_probe(model, probes[i]); });
  return out;
}

}  // namespace fusionbench
