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

// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "fusionbench/datagen.h"
#include "fusionbench/dataset.h"
#include "fusionbench/evaluation.h"
#include "fusionbench/kernels.h"
#include "fusionbench/pipeline.h"

namespace fusionbench {
namespace {

struct MatchFixture {
  TemplateDataset dataset;
  std::vector<Comparison> comparisons;

  explicit MatchFixture(std::size_t subjects) {
    SynthConfig c;
    c.n_subjects = subjects;
    c.samples_per_subject = 5;
    c.seed = 11;
    dataset = synth_templates(c);
    comparisons =
        generate_comparisons(BuildSubjectIndex(dataset), Protocol::kAllPairs);
  }
};

template <bool kParallel>
void BM_Match(benchmark::State& state) {
  const MatchFixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    ScoreSet s = kParallel
                     ? match_comparisons_parallel(f.dataset, f.comparisons,
                                                  kAllMatchers)
                     : match_comparisons_serial(f.dataset, f.comparisons,
                                                kAllMatchers);
    benchmark::DoNotOptimize(s.data());
  }
  state.SetItemsProcessed(state.iterations() * f.comparisons.size());
}
BENCHMARK(BM_Match<false>)->Name("match/serial")->Arg(20)->Arg(60);
BENCHMARK(BM_Match<true>)->Name("match/parallel")->Arg(20)->Arg(60);

struct FuseFixture {
  FusionModel model;
  std::vector<ProbeScores> probes;

  explicit FuseFixture(std::size_t subjects) {
    SynthConfig c;
    c.n_subjects = subjects;
    c.seed = 12;
    c.score_model = DefaultScoreModel();
    const ScoreSet scores = synth_scores(c);
    model.modalities = DefaultModalities();
    model.stats = pooled_matcher_statistics(scores);
    PredictiveRates r;
    r.genuine.rate = 0.9;
    r.imposter.rate = 0.85;
    model.rates.assign(model.modalities.size(), r);
    probes = GroupByComparison(scores, model.modalities).scores;
  }
};

template <bool kParallel>
void BM_Fuse(benchmark::State& state) {
  const FuseFixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = kParallel ? fuse_probes_parallel(f.model, f.probes)
                         : fuse_probes_serial(f.model, f.probes);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * f.probes.size());
}
BENCHMARK(BM_Fuse<false>)->Name("fuse/serial")->Arg(50)->Arg(200);
BENCHMARK(BM_Fuse<true>)->Name("fuse/parallel")->Arg(50)->Arg(200);

}  // namespace
}  // namespace fusionbench

BENCHMARK_MAIN();
