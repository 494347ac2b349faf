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

#ifndef FUSIONBENCH_SCORES_H_
#define FUSIONBENCH_SCORES_H_

#include <string>
#include <string_view>
#include <vector>

namespace fusionbench {

enum class Label { kGenuine, kImposter };

std::string_view LabelName(Label label);
// Accepts "genuine" / "imposter"; throws ParseError otherwise.
Label ParseLabel(std::string_view text);

// One matcher comparison between a probe and a gallery sample.
struct ScoreRecord {
  std::string probe_subject;
  std::string probe_sample;
  std::string gallery_subject;
  std::string gallery_sample;
  std::string matcher;
  double score = 0.0;
  Label label = Label::kGenuine;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

using ScoreSet = std::vector<ScoreRecord>;

// Throws RangeError / DataError-family exceptions when a record breaks the
// invariants: score in [0,1], genuine iff probe and gallery subjects match.
void ValidateScoreRecord(const ScoreRecord& record);
void ValidateScoreSet(const ScoreSet& scores);

// Split one matcher's scores into genuine and imposter populations.
struct ScorePopulations {
  std::vector<double> genuine;
  std::vector<double> imposter;
};
ScorePopulations SplitByLabel(const ScoreSet& scores, std::string_view matcher);
ScorePopulations SplitByLabel(const ScoreSet& scores);

// Distinct matcher names in first-appearance order.
std::vector<std::string> MatcherNames(const ScoreSet& scores);

}  // namespace fusionbench

#endif  // FUSIONBENCH_SCORES_H_
