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

#include "fusionbench/ds_fusion.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "fusionbench/error.h"

namespace fusionbench {

namespace {

// 1 - K below this is treated as total conflict.
constexpr double kMinNormalization = 1e-12;

void CheckFrameSize(std::size_t n) {
  if (n == 0 || n > kMaxFrameSize) {
    throw DomainError("frame size must be in [1, " +
                      std::to_string(kMaxFrameSize) + "], got " +
                      std::to_string(n));
  }
}

void CheckSubset(const MassFunction& m, Subset subset, const char* what) {
  if (subset == 0) throw DomainError(std::string(what) + " of the empty set");
  if ((subset & ~m.full()) != 0) {
    throw DomainError(std::string(what) + ": subset outside the frame");
  }
}

}  // namespace

Frame::Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
  CheckFrameSize(labels_.size());
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) {
    throw DomainError("frame labels must be unique");
  }
}

const Frame& Frame::Verification() {
  static const Frame frame({"Gen", "Imp"});
  return frame;
}

MassFunction::MassFunction(std::size_t frame_size,
                           std::span<const std::pair<Subset, double>> focal)
    : frame_size_(frame_size) {
  CheckFrameSize(frame_size);
  masses_.assign(std::size_t{1} << frame_size, 0.0);
  for (const auto& [subset, mass] : focal) {
    if (subset >= masses_.size()) {
      throw DomainError("focal element outside the frame");
    }
    masses_[subset] += mass;
  }
  Validate();
}

MassFunction MassFunction::FromMasses(std::size_t frame_size,
                                      std::vector<double> masses) {
  CheckFrameSize(frame_size);
  if (masses.size() != (std::size_t{1} << frame_size)) {
    throw DimensionError("mass vector needs 2^n entries");
  }
  MassFunction m;
  m.frame_size_ = frame_size;
  m.masses_ = std::move(masses);
  m.Validate();
  return m;
}

MassFunction MassFunction::Vacuous(std::size_t frame_size) {
  CheckFrameSize(frame_size);
  std::vector<double> masses(std::size_t{1} << frame_size, 0.0);
  masses.back() = 1.0;
  return FromMasses(frame_size, std::move(masses));
}

MassFunction MassFunction::Verification(double gen, double imp, double theta) {
  return FromMasses(kVerificationFrameSize, {0.0, gen, imp, theta});
}

void MassFunction::Validate() const {
  if (masses_[0] != 0.0) throw DomainError("mass on the empty set");
  double total = 0.0;
  for (double v : masses_) {
    if (!(v >= 0.0 && v <= 1.0 + kMassTolerance)) {
      throw RangeError("mass " + std::to_string(v) + " outside [0,1]");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw RangeError("masses sum to " + std::to_string(total) + ", not 1");
  }
}

Combination dempster_combine_with_conflict(const MassFunction& m1,
                                           const MassFunction& m2) {
  if (m1.frame_size() != m2.frame_size()) {
    throw DimensionError("cannot combine masses over different frames");
  }
  const auto a = m1.masses();
  const auto b = m2.masses();
  std::vector<double> joint(a.size(), 0.0);
  double conflict = 0.0;
  for (Subset x = 1; x < a.size(); ++x) {
    if (a[x] == 0.0) continue;
    for (Subset y = 1; y < b.size(); ++y) {
      if (b[y] == 0.0) continue;
      const double product = a[x] * b[y];
      const Subset meet = x & y;
      if (meet == 0) {
        conflict += product;
      } else {
        joint[meet] += product;
      }
    }
  }
  const double normalization = 1.0 - conflict;
  if (normalization <= kMinNormalization) {
    throw TotalConflictError("total conflict (K = 1) between mass functions");
  }
  for (double& v : joint) v /= normalization;
  return {MassFunction::FromMasses(m1.frame_size(), std::move(joint)),
          conflict};
}

MassFunction dempster_combine(const MassFunction& m1, const MassFunction& m2) {
  return dempster_combine_with_conflict(m1, m2).mass;
}

Combination combine_all_with_conflict(std::span<const MassFunction> masses) {
  if (masses.empty()) throw DomainError("combine_all needs at least one mass");
  Combination acc{masses.front(), 0.0};
  double agreement = 1.0;  // prod(1 - K_step)
  for (std::size_t k = 1; k < masses.size(); ++k) {
    try {
      Combination step = dempster_combine_with_conflict(acc.mass, masses[k]);
      agreement *= 1.0 - step.conflict;
      acc.mass = std::move(step.mass);
    } catch (const TotalConflictError&) {
      throw TotalConflictError("total conflict combining masses 0.." +
                               std::to_string(k));
    }
  }
  acc.conflict = 1.0 - agreement;
  return acc;
}

MassFunction combine_all(std::span<const MassFunction> masses) {
  return combine_all_with_conflict(masses).mass;
}

double belief(const MassFunction& m, Subset subset) {
  CheckSubset(m, subset, "belief");
  const auto masses = m.masses();
  double total = 0.0;
  for (Subset b = 1; b < masses.size(); ++b) {
    if ((b & ~subset) == 0) total += masses[b];
  }
  return std::min(total, 1.0);
}

double plausibility(const MassFunction& m, Subset subset) {
  CheckSubset(m, subset, "plausibility");
  const auto masses = m.masses();
  double total = 0.0;
  for (Subset b = 1; b < masses.size(); ++b) {
    if ((b & subset) != 0) total += masses[b];
  }
  return std::min(total, 1.0);
}

double condition_belief(const MassFunction& m, Subset subset,
                        Subset evidence) {
  const Subset full = m.full();
  if (evidence == 0 || evidence == full || (evidence & ~full) != 0) {
    throw DomainError("conditioning evidence must be a proper non-empty subset");
  }
  if ((subset & ~full) != 0) {
    throw DomainError("condition_belief: subset outside the frame");
  }
  const Subset not_evidence = full & ~evidence;
  const double value =
      belief(m, subset | not_evidence) - belief(m, not_evidence);
  return std::clamp(value, 0.0, 1.0);
}

std::optional<std::size_t> winner_take_all(const MassFunction& m) {
  // The rejection class holds m(theta); a singleton must beat it strictly and
  // be the unique maximum among singletons.
  double best = m[m.full()];
  std::optional<std::size_t> winner;
  for (std::size_t k = 0; k < m.frame_size(); ++k) {
    const double v = m[Subset{1} << k];
    if (v > best) {
      best = v;
      winner = k;
    } else if (v == best) {
      winner.reset();
    }
  }
  return winner;
}

std::string_view DecisionName(Decision decision) {
  return decision == Decision::kAccept ? "accept" : "reject";
}

Decision verify(const MassFunction& m_final, double threshold) {
  return m_final[kGen] > threshold ? Decision::kAccept : Decision::kReject;
}

PredictiveRates predictive_rate(std::span<const LabeledDecision> decisions) {
  if (decisions.empty()) {
    throw InsufficientTrainingError("predictive rates need training decisions");
  }
  PredictiveRates rates;
  for (const auto& d : decisions) {
    ClassRate& cls =
        d.predicted == Label::kGenuine ? rates.genuine : rates.imposter;
    ++cls.total;
    if (d.predicted == d.truth) ++cls.correct;
  }
  for (ClassRate* cls : {&rates.genuine, &rates.imposter}) {
    cls->rate = cls->total > 0 ? static_cast<double>(cls->correct) /
                                     static_cast<double>(cls->total)
                               : kUninformativeRate;
  }
  return rates;
}

namespace {

void CheckInducedScore(double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw RangeError("fused score " + std::to_string(score) +
                     " outside [0,1]");
  }
}

}  // namespace

MassFunction induced_bba(double score, const PredictiveRates& rates) {
  CheckInducedScore(score);
  double gen = rates.genuine.rate * score;
  double imp = rates.imposter.rate * (1.0 - score);
  const double committed = gen + imp;
  if (committed > 1.0) {
    gen /= committed;
    imp /= committed;
    return MassFunction::Verification(gen, imp, 0.0);
  }
  return MassFunction::Verification(gen, imp, std::max(0.0, 1.0 - committed));
}

MassFunction induced_belief_bba(double score, const PredictiveRates& rates) {
  CheckInducedScore(score);
  const double gen = rates.genuine.rate * score;
  return MassFunction::Verification(gen, 0.0, 1.0 - gen);
}

MassFunction induced_disbelief_bba(double score, const PredictiveRates& rates) {
  CheckInducedScore(score);
  const double imp = rates.imposter.rate * (1.0 - score);
  return MassFunction::Verification(0.0, imp, 1.0 - imp);
}

}  // namespace fusionbench
