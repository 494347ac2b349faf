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

// Dempster-Shafer evidence combination over small frames of discernment.
//
// Subsets of the frame are bitmasks: bit k set means hypothesis k belongs to
// the subset. A MassFunction stores one mass per subset (2^n entries), which
// is fine for the frame sizes used here (verification uses n = 2).

#ifndef FUSIONBENCH_DS_FUSION_H_
#define FUSIONBENCH_DS_FUSION_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fusionbench/scores.h"

namespace fusionbench {

using Subset = std::uint32_t;

inline constexpr std::size_t kMaxFrameSize = 8;

// Verification frame {Gen, Imp}.
inline constexpr std::size_t kVerificationFrameSize = 2;
inline constexpr Subset kGen = 0b01;
inline constexpr Subset kImp = 0b10;
inline constexpr Subset kTheta = 0b11;

// Tolerance on the sum-to-one constraint of a mass function.
inline constexpr double kMassTolerance = 1e-9;

class Frame {
 public:
  // Labels must be non-empty and unique; at most kMaxFrameSize of them.
  explicit Frame(std::vector<std::string> labels);
  static const Frame& Verification();

  std::size_t size() const { return labels_.size(); }
  Subset full() const { return (Subset{1} << labels_.size()) - 1; }
  const std::string& label(std::size_t k) const { return labels_[k]; }

 private:
  std::vector<std::string> labels_;
};

// Basic belief assignment: m(empty) = 0, masses in [0,1], total 1.
class MassFunction {
 public:
  // Subsets not listed get zero mass. Repeated subsets accumulate.
  MassFunction(std::size_t frame_size,
               std::span<const std::pair<Subset, double>> focal);
  MassFunction(std::size_t frame_size,
               std::initializer_list<std::pair<Subset, double>> focal)
      : MassFunction(frame_size,
                     std::span<const std::pair<Subset, double>>(
                         focal.begin(), focal.size())) {}

  // `masses` is indexed by subset bitmask and must have 2^frame_size entries.
  static MassFunction FromMasses(std::size_t frame_size,
                                 std::vector<double> masses);
  static MassFunction Vacuous(std::size_t frame_size);
  static MassFunction Verification(double gen, double imp, double theta);

  std::size_t frame_size() const { return frame_size_; }
  Subset full() const { return (Subset{1} << frame_size_) - 1; }
  double operator[](Subset subset) const { return masses_.at(subset); }
  // Indexed by subset bitmask.
  std::span<const double> masses() const { return masses_; }

 private:
  MassFunction() = default;
  void Validate() const;

  std::size_t frame_size_ = 0;
  std::vector<double> masses_;
};

struct Combination {
  MassFunction mass;
  // Mass on empty intersections before normalization. For a fold this is the
  // N-way conflict 1 - prod(1 - K_step).
  double conflict = 0.0;
};

// Dempster's rule. Throws TotalConflictError when K = 1, DimensionError when
// the frames differ.
Combination dempster_combine_with_conflict(const MassFunction& m1,
                                           const MassFunction& m2);
MassFunction dempster_combine(const MassFunction& m1, const MassFunction& m2);

// Left fold of dempster_combine. The TotalConflictError message names the
// prefix that collapsed.
Combination combine_all_with_conflict(std::span<const MassFunction> masses);
MassFunction combine_all(std::span<const MassFunction> masses);

// Sum of m(B) over non-empty B contained in `subset`. DomainError on empty.
double belief(const MassFunction& m, Subset subset);
// Sum of m(B) over B meeting `subset`. DomainError on empty.
double plausibility(const MassFunction& m, Subset subset);
// bel(A u not E) - bel(not E). DomainError unless E is a proper non-empty
// subset of the frame.
double condition_belief(const MassFunction& m, Subset subset, Subset evidence);

// Index of the winning singleton hypothesis, or nullopt for the rejection
// class (the whole frame). Ties go to rejection.
std::optional<std::size_t> winner_take_all(const MassFunction& m);

enum class Decision { kAccept, kReject };
std::string_view DecisionName(Decision decision);

// Accept iff m({Gen}) > threshold.
Decision verify(const MassFunction& m_final, double threshold);

// Fraction of decisions predicted as a class that were truly of that class.
struct ClassRate {
  std::size_t correct = 0;
  std::size_t total = 0;  // times the class was predicted
  double rate = 0.0;
};

// Rate used for a class that was never predicted.
inline constexpr double kUninformativeRate = 0.5;

struct PredictiveRates {
  ClassRate genuine;
  ClassRate imposter;
  double rate(Label k) const {
    return k == Label::kGenuine ? genuine.rate : imposter.rate;
  }
};

struct LabeledDecision {
  Label predicted;
  Label truth;
};

// Throws InsufficientTrainingError on an empty decision set.
PredictiveRates predictive_rate(std::span<const LabeledDecision> decisions);

// BBA induced by a fused modality score s:
//   m(Gen) = P_gen * s, m(Imp) = P_imp * (1 - s), m(theta) = remainder.
// If m(Gen) + m(Imp) > 1 both are rescaled to sum to 1. RangeError when s is
// outside [0,1].
MassFunction induced_bba(double score, const PredictiveRates& rates);

// Split form of induced_bba: one BBA carrying only the belief term
// (Gen vs theta) and one carrying only the disbelief term (Imp vs theta).
MassFunction induced_belief_bba(double score, const PredictiveRates& rates);
MassFunction induced_disbelief_bba(double score, const PredictiveRates& rates);

}  // namespace fusionbench

#endif  // FUSIONBENCH_DS_FUSION_H_
