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

#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <tuple>

#include "fusionbench/error.h"

namespace fusionbench {

namespace {

std::string FusedName(const ModalitySpec& modality) {
  return "mcw:" + modality.name;
}

std::set<std::string> ModalityMatchers(
    const std::vector<ModalitySpec>& modalities) {
  std::set<std::string> names;
  for (const auto& m : modalities) names.insert(m.matchers.begin(), m.matchers.end());
  return names;
}

void CheckModalities(const std::vector<ModalitySpec>& modalities) {
  if (modalities.empty()) throw ConfigError("no modalities configured");
  std::set<std::string> seen_modality;
  std::set<std::string> seen_matcher;
  for (const auto& m : modalities) {
    if (m.name.empty() || !seen_modality.insert(m.name).second) {
      throw ConfigError("modality names must be unique and non-empty");
    }
    if (m.matchers.empty()) {
      throw ConfigError("modality " + m.name + " lists no matchers");
    }
    for (const auto& name : m.matchers) {
      if (!seen_matcher.insert(name).second) {
        throw ConfigError("matcher " + name + " assigned to two modalities");
      }
    }
  }
}

ScoreSet OnlyMatchers(const ScoreSet& scores, const std::set<std::string>& keep) {
  ScoreSet out;
  for (const auto& r : scores) {
    if (keep.count(r.matcher)) out.push_back(r);
  }
  return out;
}

std::vector<ProbeFusion> FuseAll(const FusionModel& model,
                                 std::span<const ProbeScores> probes,
                                 bool parallel) {
  return parallel ? fuse_probes_parallel(model, probes)
                  : fuse_probes_serial(model, probes);
}

}  // namespace

std::vector<ModalitySpec> DefaultModalities() {
  return {{"iris", {"hamming", "jaccard"}},
          {"fingerprint", {"dice", "cosine"}}};
}

SplitScores SplitScoreSet(const ScoreSet& scores,
                          std::optional<std::uint64_t> seed) {
  std::set<std::string> subjects;
  for (const auto& r : scores) {
    subjects.insert(r.probe_subject);
    subjects.insert(r.gallery_subject);
  }
  SubjectSplit halves =
      split_subjects({subjects.begin(), subjects.end()}, seed);
  const std::set<std::string> train(halves.train.begin(), halves.train.end());
  SplitScores out;
  for (const auto& r : scores) {
    const bool probe_train = train.count(r.probe_subject) > 0;
    const bool gallery_train = train.count(r.gallery_subject) > 0;
    if (probe_train && gallery_train) {
      out.train.push_back(r);
    } else if (!probe_train && !gallery_train) {
      out.test.push_back(r);
    }
  }
  out.train_subjects = std::move(halves.train);
  out.test_subjects = std::move(halves.test);
  return out;
}

ProbeTable GroupByComparison(const ScoreSet& scores,
                             const std::vector<ModalitySpec>& modalities) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> slot;
  for (std::size_t j = 0; j < modalities.size(); ++j) {
    for (std::size_t k = 0; k < modalities[j].matchers.size(); ++k) {
      slot[modalities[j].matchers[k]] = {j, k};
    }
  }
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::map<Key, std::size_t> row_of;
  ProbeTable table;
  constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : scores) {
    auto s = slot.find(r.matcher);
    if (s == slot.end()) continue;
    const Key key{r.probe_subject, r.probe_sample, r.gallery_subject,
                  r.gallery_sample};
    auto [it, inserted] = row_of.emplace(key, table.comparisons.size());
    if (inserted) {
      table.comparisons.push_back({r.probe_subject, r.probe_sample,
                                   r.gallery_subject, r.gallery_sample,
                                   r.label});
      ProbeScores probe;
      probe.claimed_subject = r.gallery_subject;
      for (const auto& m : modalities) {
        probe.per_modality.emplace_back(m.matchers.size(), kMissing);
      }
      table.scores.push_back(std::move(probe));
    }
    const auto [j, k] = s->second;
    table.scores[it->second].per_modality[j][k] = r.score;
  }
  for (std::size_t i = 0; i < table.scores.size(); ++i) {
    for (std::size_t j = 0; j < modalities.size(); ++j) {
      for (std::size_t k = 0; k < modalities[j].matchers.size(); ++k) {
        if (std::isnan(table.scores[i].per_modality[j][k])) {
          const auto& c = table.comparisons[i];
          throw LookupError("comparison " + c.probe_subject + "/" +
                            c.probe_sample + " vs " + c.gallery_subject + "/" +
                            c.gallery_sample + " has no score for matcher " +
                            modalities[j].matchers[k]);
        }
      }
    }
  }
  return table;
}

McwResult RunMcw(const SplitScores& split, const PipelineOptions& options) {
  CheckModalities(options.modalities);
  const auto keep = ModalityMatchers(options.modalities);
  McwResult out;
  out.stats = pooled_matcher_statistics(OnlyMatchers(split.train, keep));
  FusionModel model{options.modalities, out.stats, std::string(kPooledUser),
                    {}, options.variant};
  for (const ScoreSet* half : {&split.train, &split.test}) {
    const ProbeTable table = GroupByComparison(*half, options.modalities);
    for (std::size_t i = 0; i < table.scores.size(); ++i) {
      const ProbeFusion f = fuse_probe_scores(model, table.scores[i]);
      const Comparison& c = table.comparisons[i];
      for (std::size_t j = 0; j < options.modalities.size(); ++j) {
        const ModalitySpec& m = options.modalities[j];
        out.fused.push_back({c.probe_subject, c.probe_sample,
                             c.gallery_subject, c.gallery_sample, FusedName(m),
                             f.fused[j], c.label});
        for (std::size_t k = 0; k < m.matchers.size(); ++k) {
          out.weights.push_back({c, m.name, m.matchers[k], f.weights[j][k]});
        }
      }
    }
  }
  return out;
}

PredictiveRates TrainPredictiveRates(std::span<const double> fused,
                                     std::span<const Label> truth) {
  if (fused.size() != truth.size()) {
    throw DimensionError("fused scores and labels differ in length");
  }
  std::vector<double> gen;
  std::vector<double> imp;
  for (std::size_t i = 0; i < fused.size(); ++i) {
    (truth[i] == Label::kGenuine ? gen : imp).push_back(fused[i]);
  }
  if (gen.empty() || imp.empty()) {
    throw InsufficientTrainingError(
        "predictive rates need genuine and imposter training scores");
  }
  const double t = eer_point(roc_curve(gen, imp)).threshold;
  std::vector<LabeledDecision> decisions;
  decisions.reserve(fused.size());
  for (std::size_t i = 0; i < fused.size(); ++i) {
    decisions.push_back(
        {fused[i] > t ? Label::kGenuine : Label::kImposter, truth[i]});
  }
  return predictive_rate(decisions);
}

PipelineResult run_pipeline(const ScoreSet& scores,
                            const PipelineOptions& options) {
  CheckModalities(options.modalities);
  ValidateScoreSet(scores);
  const SplitScores split = SplitScoreSet(scores, options.split_seed);
  if (split.train.empty() || split.test.empty()) {
    throw ProtocolError("train/test split left an empty half");
  }
  McwResult mcw = RunMcw(split, options);

  PipelineResult result;
  result.train_subjects = split.train_subjects.size();
  result.test_subjects = split.test_subjects.size();

  const ProbeTable train = GroupByComparison(split.train, options.modalities);
  const ProbeTable test = GroupByComparison(split.test, options.modalities);

  FusionModel model{options.modalities, mcw.stats, std::string(kPooledUser),
                    {}, options.variant};

  // Predictive rates from the training half's MCW scores.
  {
    std::vector<Label> truth;
    for (const auto& c : train.comparisons) truth.push_back(c.label);
    std::vector<std::vector<double>> fused(options.modalities.size());
    for (const auto& p : train.scores) {
      const ProbeFusion f = fuse_probe_scores(model, p);
      for (std::size_t j = 0; j < fused.size(); ++j) fused[j].push_back(f.fused[j]);
    }
    for (std::size_t j = 0; j < fused.size(); ++j) {
      model.rates.push_back(TrainPredictiveRates(fused[j], truth));
      result.rates[options.modalities[j].name] = model.rates.back();
    }
  }

  // Decision threshold on m_final(Gen).
  if (options.threshold) {
    result.threshold = *options.threshold;
  } else {
    const auto train_fusion = FuseAll(model, train.scores, options.parallel);
    std::vector<double> gen;
    std::vector<double> imp;
    for (std::size_t i = 0; i < train_fusion.size(); ++i) {
      (train.comparisons[i].label == Label::kGenuine ? gen : imp)
          .push_back(train_fusion[i].m_gen);
    }
    result.threshold = eer_point(roc_curve(gen, imp)).threshold;
  }

  const auto test_fusion = FuseAll(model, test.scores, options.parallel);
  std::vector<double> hybrid_gen;
  std::vector<double> hybrid_imp;
  for (std::size_t i = 0; i < test_fusion.size(); ++i) {
    const ProbeFusion& f = test_fusion[i];
    const Comparison& c = test.comparisons[i];
    Decision decision = Decision::kReject;
    if (f.total_conflict) {
      ++result.conflicts;
    } else {
      decision = verify(MassFunction::Verification(f.m_gen, f.m_imp, f.m_theta),
                        result.threshold);
    }
    result.mass_trace.push_back({c.probe_subject, c.probe_sample, f.m_gen,
                                 f.m_imp, f.m_theta, f.conflict,
                                 std::string(DecisionName(decision))});
    (c.label == Label::kGenuine ? hybrid_gen : hybrid_imp).push_back(f.m_gen);
  }
  if (!test_fusion.empty() && result.conflicts == test_fusion.size()) {
    throw TotalConflictError("every test probe ended in total conflict");
  }

  auto add_report = [&](const std::string& name,
                        const ScorePopulations& populations) {
    RocCurve roc;
    result.reports.push_back(evaluate(name, populations.genuine,
                                      populations.imposter, options.eval, &roc));
    result.rocs.push_back(std::move(roc));
  };
  for (const auto& m : options.modalities) {
    for (const auto& matcher : m.matchers) {
      add_report(matcher, SplitByLabel(split.test, matcher));
    }
  }
  ScoreSet fused_test;
  const std::set<std::string> test_subjects(split.test_subjects.begin(),
                                            split.test_subjects.end());
  for (const auto& r : mcw.fused) {
    if (test_subjects.count(r.probe_subject)) fused_test.push_back(r);
  }
  for (const auto& m : options.modalities) {
    add_report(FusedName(m), SplitByLabel(fused_test, FusedName(m)));
  }
  add_report("hybrid", {hybrid_gen, hybrid_imp});

  result.weights = std::move(mcw.weights);
  result.fused_scores = std::move(mcw.fused);
  return result;
}

nlohmann::json PipelineReportJson(const PipelineResult& result,
                                  const PipelineOptions& options) {
  using nlohmann::json;
  json reports = json::array();
  for (const auto& r : result.reports) reports.push_back(ReportToJson(r));
  json rates = json::object();
  for (const auto& [modality, r] : result.rates) {
    rates[modality] = {{"genuine", RoundTo(r.genuine.rate, 6)},
                       {"imposter", RoundTo(r.imposter.rate, 6)}};
  }
  json targets = json::array();
  for (double t : options.eval.fmr_targets_percent) targets.push_back(t);
  return {
      {"reports", reports},
      {"hybrid",
       {{"threshold", RoundTo(result.threshold, 6)},
        {"ds_masses", options.variant == DsVariant::kTwoMass ? 2 : 4},
        {"conflicts", result.conflicts},
        {"predictive_rates", rates}}},
      {"train_subjects", result.train_subjects},
      {"test_subjects", result.test_subjects},
      {"fmr_targets", targets},
  };
}

void WriteWeightTrace(std::ostream& out,
                      const std::vector<WeightTraceRow>& rows) {
  out << "probe_subject,probe_sample,gallery_subject,gallery_sample,modality,"
         "matcher,weight\n";
  for (const auto& r : rows) {
    const Comparison& c = r.comparison;
    out << c.probe_subject << ',' << c.probe_sample << ',' << c.gallery_subject
        << ',' << c.gallery_sample << ',' << r.modality << ',' << r.matcher
        << ',' << FormatDouble(r.weight) << '\n';
  }
}

}  // namespace fusionbench
