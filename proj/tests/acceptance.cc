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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "fusionbench/datagen.h"
#include "fusionbench/ds_fusion.h"
#include "fusionbench/error.h"
#include "fusionbench/evaluation.h"
#include "fusionbench/io.h"
#include "fusionbench/pipeline.h"
#include "fusionbench/score_fusion.h"
#include "fusionbench/similarity.h"
#include "oracles.h"

namespace fusionbench {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;
  double budget_seconds = 0.0;  // 0 means no runtime limit
};

// Collects failures with a short reason; the first few are reported.
class Check {
 public:
  void That(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 3) failures_.push_back(what);
    ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string Summary() const {
    std::string s = std::to_string(count_) + " failure(s):";
    for (const auto& f : failures_) s += " [" + f + "]";
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

std::string Fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// 1. DS algebra against the exhaustive tuple oracle.
Outcome DsAlgebra() {
  std::mt19937_64 rng(20260101);
  Check check;
  double worst = 0.0;
  int cases = 0, conflicts = 0;
  while (cases < 200) {
    const std::size_t n = 2 + cases % 2;
    const std::size_t k = 2 + cases % 2;  // pairs and triples
    std::vector<MassFunction> masses;
    for (std::size_t i = 0; i < k; ++i) {
      masses.push_back(oracle::RandomMass(rng, n));
    }
    const auto want = oracle::DempsterNWay(masses);
    if (want.conflict >= 1.0 - 1e-9) {
      ++conflicts;  // undefined combination; draw again
      continue;
    }
    ++cases;
    const MassFunction folded = combine_all(masses);
    const double d = oracle::MaxAbsDiff(folded.masses(), want.masses);
    worst = std::max(worst, d);
    check.That(d <= 1e-9, Fmt("combine_all off by %.3g", d));
    if (k == 2) {
      const MassFunction ab = dempster_combine(masses[0], masses[1]);
      const MassFunction ba = dempster_combine(masses[1], masses[0]);
      check.That(oracle::MaxAbsDiff(ab.masses(), want.masses) <= 1e-9,
                 "dempster_combine vs oracle");
      check.That(oracle::MaxAbsDiff(ab.masses(), ba.masses()) <= 1e-9,
                 "commutativity");
    } else {
      const std::vector<MassFunction> reordered = {masses[2], masses[0],
                                                   masses[1]};
      check.That(oracle::MaxAbsDiff(combine_all(reordered).masses(),
                                    folded.masses()) <= 1e-9,
                 "order independence");
      try {
        const MassFunction left = dempster_combine(
            dempster_combine(masses[0], masses[1]), masses[2]);
        const MassFunction right = dempster_combine(
            masses[0], dempster_combine(masses[1], masses[2]));
        check.That(oracle::MaxAbsDiff(left.masses(), right.masses()) <= 1e-9,
                   "associativity");
      } catch (const TotalConflictError&) {
        // An inner pair can conflict totally even when the triple does not.
      }
    }
    const MassFunction vacuous = MassFunction::Vacuous(n);
    for (const auto& m : masses) {
      check.That(oracle::MaxAbsDiff(dempster_combine(m, vacuous).masses(),
                                    m.masses()) <= 1e-12 &&
                     oracle::MaxAbsDiff(dempster_combine(vacuous, m).masses(),
                                        m.masses()) <= 1e-12,
                 "vacuous identity");
    }
  }
  Outcome o{check.ok(), "", 5.0};
  o.detail = check.ok() ? Fmt("200 cases (%d fully conflicting redrawn), max "
                              "|diff| %.2g",
                              conflicts, worst)
                        : check.Summary();
  return o;
}

// 2. Similarity measures against naive loops and exhaustive checkers.
Outcome SimilarityOracles() {
  std::mt19937_64 rng(20260102);
  Check check;
  for (int t = 0; t < 1000; ++t) {
    auto a = oracle::RandomBits(rng, 256);
    const auto b = oracle::RandomBits(rng, 256);
    a[0] = 1;
    const BinaryTemplate ta(a, "a", "0"), tb(b, "b", "0");
    check.That(hamming_similarity(ta, tb) == oracle::Hamming(a, b), "hamming");
    check.That(jaccard_similarity(ta, tb) == oracle::Jaccard(a, b), "jaccard");
  }
  double worst = 0.0;
  std::uniform_int_distribution<std::size_t> rows(1, 12);
  for (int t = 0; t < 200; ++t) {
    const auto e = oracle::RandomRows(rng, rows(rng), 16);
    const auto q = oracle::RandomRows(rng, rows(rng), 16);
    const FeatureMatrix fe(e, "a", "0"), fq(q, "b", "0");
    const auto dice = dice_local_matrix(fe, fq);
    const auto cosine = cosine_local_matrix(fe, fq);
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) {
        worst = std::max({worst, std::abs(dice(i, j) - oracle::Dice(e[i], q[j])),
                          std::abs(cosine(i, j) - oracle::Cosine(e[i], q[j]))});
      }
    }
  }
  check.That(worst <= 1e-12, Fmt("dice/cosine off by %.3g", worst));
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_int_distribution<int> level(0, 10);
  for (int t = 0; t < 500; ++t) {
    const std::size_t r = size(rng), c = size(rng);
    std::vector<double> v(r * c);
    for (auto& x : v) x = level(rng) / 10.0;
    const auto got = filter_double_matches(SimilarityMatrix(r, c, v));
    check.That(std::vector<double>(got.values().begin(), got.values().end()) ==
                   oracle::FilterDoubleMatches(r, c, v),
               "filter_double_matches");
  }
  return {check.ok(),
          check.ok() ? Fmt("1000 bit pairs exact, dice/cosine max |diff| "
                           "%.2g, 500 filter matrices exact",
                           worst)
                     : check.Summary()};
}

// 3. Mean-closure weighting contract.
Outcome McwContract() {
  std::mt19937_64 rng(20260103);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Check check;
  double worst_sum = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t m = 2 + t % 3;
    std::vector<double> mc(m), scores(m);
    for (std::size_t k = 0; k < m; ++k) {
      const UserMatcherStats s{u(rng), u(rng), 1, 1};
      scores[k] = u(rng);
      mc[k] = mean_closure(s, scores[k]);
    }
    const auto w = mcw_weights(mc);
    double sum = 0.0;
    for (double x : w) sum += x;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    const double f = fuse_scores(scores, w);
    check.That(f >= *std::min_element(scores.begin(), scores.end()) &&
                   f <= *std::max_element(scores.begin(), scores.end()),
               "fused score outside [min,max]");
  }
  check.That(worst_sum <= 1e-9, Fmt("weights sum off by %.3g", worst_sum));
  const double example = mean_closure(UserMatcherStats{0.9, 0.2, 2, 1}, 0.8);
  check.That(std::abs(RoundTo(example, 5) - 0.02778) < 1e-12,
             Fmt("worked example gave %.8f", example));
  return {check.ok(),
          check.ok() ? Fmt("10^4 draws, max |sum-1| %.2g, worked example "
                           "%.5f",
                           worst_sum, example)
                     : check.Summary()};
}

// 4. Comparison counts.
Outcome ProtocolCounts() {
  Check check;
  std::string detail;
  for (auto [u, s, gen, imp] :
       {std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>{
            50, 7, 1050, 1225},
        {46, 5, 460, 1035}}) {
    SynthConfig c;
    c.n_subjects = u;
    c.samples_per_subject = s;
    const auto pairs =
        generate_comparisons(SyntheticSubjectIndex(c), Protocol::kAllPairs);
    std::size_t g = 0;
    for (const auto& p : pairs) g += p.label == Label::kGenuine;
    check.That(g == gen && pairs.size() - g == imp,
               Fmt("%zux%zu gave %zu/%zu", u, s, g, pairs.size() - g));
    detail += Fmt("%zux%zu -> %zu/%zu; ", u, s, g, pairs.size() - g);
  }
  detail.resize(detail.size() - 2);
  return {check.ok(), check.ok() ? detail : check.Summary(), 1.0};
}

// 5. Metric formulas.
Outcome MetricFormulas() {
  Check check;
  const HterCi ci = hter_ci(0.02, 0.04, 100, 100, 95);
  check.That(RoundTo(ci.hter, 4) == 0.03, Fmt("HTER %.6f", ci.hter));
  check.That(RoundTo(ci.margin, 4) == 0.0236, Fmt("margin %.6f", ci.margin));
  check.That(z_value(90) == 1.645 && z_value(95) == 1.960 &&
                 z_value(99) == 2.576,
             "z constants");
  const double d = decidability(std::vector<double>{0.7, 0.9},
                                std::vector<double>{0.1, 0.3});
  check.That(std::abs(d - 6.0) < 1e-9, Fmt("d' %.12f", d));
  const double e = eer(roc_curve(std::vector<double>{0.6, 0.8, 0.95},
                                 std::vector<double>{0.1, 0.4, 0.55}));
  check.That(e == 0.0, Fmt("separable EER %.6g", e));
  return {check.ok(),
          check.ok() ? Fmt("HTER %.4f margin %.4f, z exact, d' %.4f, "
                           "separable EER %.1f",
                           ci.hter, ci.margin, d, e)
                     : check.Summary()};
}

// 6. Fusion beats the best single matcher on synthetic data.
Outcome FusionBeatsUnimodal() {
  int eer_wins = 0, dprime_wins = 0;
  std::string setup_problem;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SynthConfig c;
    c.n_subjects = 50;
    c.seed = seed;
    c.score_model = DefaultScoreModel();
    const ScoreSet scores = synth_scores(c);
    for (const auto& m : MatcherNames(scores)) {
      const ScorePopulations p = SplitByLabel(scores, m);
      const double dp = decidability(p.genuine, p.imposter);
      if ((dp < 2.0 || dp > 3.0) && setup_problem.empty()) {
        setup_problem = Fmt("seed %llu %s d'=%.3f outside [2,3]",
                            static_cast<unsigned long long>(seed), m.c_str(),
                            dp);
      }
    }
    const PipelineResult r = run_pipeline(scores, PipelineOptions{});
    double best_eer = 1e9, best_dprime = 0.0;
    const EvalReport* hybrid = nullptr;
    for (const auto& rep : r.reports) {
      if (rep.name == "hybrid") {
        hybrid = &rep;
      } else if (rep.name.rfind("mcw:", 0) != 0) {
        best_eer = std::min(best_eer, rep.eer_percent);
        best_dprime = std::max(best_dprime, rep.d_prime);
      }
    }
    eer_wins += hybrid->eer_percent <= best_eer;
    dprime_wins += hybrid->d_prime > best_dprime;
    per_seed << Fmt(" %.2f/%.2f", hybrid->eer_percent, best_eer);
  }
  Outcome o;
  o.pass = setup_problem.empty() && eer_wins >= 9 && dprime_wins >= 8;
  o.budget_seconds = 60.0;
  o.detail = Fmt("hybrid EER <= best unimodal on %d/10 seeds, hybrid d' > "
                 "best matcher d' on %d/10",
                 eer_wins, dprime_wins);
  if (!setup_problem.empty()) o.detail += "; setup: " + setup_problem;
  o.detail += "; EER hybrid/best:" + per_seed.str();
  return o;
}

// 7. Same seed, same bytes, through the command-line front end.
Outcome Determinism() {
  const fs::path root =
      fs::temp_directory_path() /
      ("fusionbench_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(root);
  WriteFile(root / "synth.json",
            SynthConfigToJson([] {
              SynthConfig c;
              c.n_subjects = 30;
              c.samples_per_subject = 5;
              c.seed = 7;
              return c;
            }())
                .dump());
  std::map<std::string, std::string> runs[2];
  std::string error;
  for (int k = 0; k < 2; ++k) {
    const fs::path out = root / ("run" + std::to_string(k));
    WriteFile(root / "pipeline.json",
              nlohmann::json{{"synth", "synth.json"}, {"out", out.string()}}
                  .dump());
    std::ostringstream sout, serr;
    const int code =
        cli::Run({"pipeline", "--config", (root / "pipeline.json").string()},
                 sout, serr);
    if (code != cli::kExitOk) {
      error = "pipeline exited " + std::to_string(code) + ": " + serr.str();
      break;
    }
    for (const auto& e : fs::directory_iterator(out)) {
      runs[k][e.path().filename().string()] = ReadFile(e.path());
    }
  }
  fs::remove_all(root);
  if (!error.empty()) return {false, error};
  std::size_t bytes = 0;
  for (const auto& [name, text] : runs[0]) bytes += text.size();
  const bool same = runs[0] == runs[1] && runs[0].count("report.json") &&
                    runs[0].count("mass_trace.csv");
  return {same, Fmt("%zu files, %zu bytes, %s", runs[0].size(), bytes,
                    same ? "byte-identical" : "DIFFER")};
}

// 8. EER calibration on well-separated Gaussian score models.
Outcome EerCalibration() {
  SynthConfig c;
  c.n_subjects = 142;        // C(142,2) = 10011 imposter comparisons
  c.samples_per_subject = 13;  // 142 * C(13,2) = 11076 genuine comparisons
  c.seed = 8;
  c.score_model =
      std::vector<MatcherScoreModel>{{"m", "iris", 0.7, 0.1, 0.3, 0.1, 0.0}};
  const ScorePopulations p = SplitByLabel(synth_scores(c), "m");
  const std::vector<double> gen(p.genuine.begin(), p.genuine.begin() + 10000);
  const std::vector<double> imp(p.imposter.begin(),
                                p.imposter.begin() + 10000);
  const double e = eer(roc_curve(gen, imp));
  return {std::abs(e - 2.28) <= 1.0,
          Fmt("EER %.3f%% on 10^4 samples per class (target 2.28 +/- 1.0)",
              e)};
}

}  // namespace
}  // namespace fusionbench

int main() {
  using Clock = std::chrono::steady_clock;
  const std::vector<std::pair<const char*, std::function<fusionbench::Outcome()>>>
      criteria = {
          {"DS algebra oracle", fusionbench::DsAlgebra},
          {"Similarity oracles", fusionbench::SimilarityOracles},
          {"MCW contract", fusionbench::McwContract},
          {"Protocol counts", fusionbench::ProtocolCounts},
          {"Metric formulas", fusionbench::MetricFormulas},
          {"Fusion beats unimodal", fusionbench::FusionBeatsUnimodal},
          {"Determinism", fusionbench::Determinism},
          {"EER calibration", fusionbench::EerCalibration},
      };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    fusionbench::Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (o.budget_seconds > 0.0 && seconds > o.budget_seconds) {
      o.pass = false;
      o.detail += fusionbench::Fmt("; over the %.0f s budget", o.budget_seconds);
    }
    failed += !o.pass;
    std::printf("%s  %zu. %-22s %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str(), seconds);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
