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

#include "fusionbench/scores.h"

#include <algorithm>

#include "fusionbench/error.h"

namespace fusionbench {

std::string_view LabelName(Label label) {
  return label == Label::kGenuine ? "genuine" : "imposter";
}

Label ParseLabel(std::string_view text) {
  if (text == "genuine") return Label::kGenuine;
  if (text == "imposter") return Label::kImposter;
  throw ParseError("unknown label '" + std::string(text) + "'");
}

void ValidateScoreRecord(const ScoreRecord& record) {
  if (!(record.score >= 0.0 && record.score <= 1.0)) {
    throw RangeError("score " + std::to_string(record.score) + " of matcher " +
                     record.matcher + " is outside [0,1]");
  }
  const bool same = record.probe_subject == record.gallery_subject;
  if (same != (record.label == Label::kGenuine)) {
    throw ProtocolError("label " + std::string(LabelName(record.label)) +
                        " inconsistent with subjects " + record.probe_subject +
                        " / " + record.gallery_subject);
  }
}

void ValidateScoreSet(const ScoreSet& scores) {
  for (const auto& r : scores) ValidateScoreRecord(r);
}

ScorePopulations SplitByLabel(const ScoreSet& scores,
                              std::string_view matcher) {
  ScorePopulations out;
  for (const auto& r : scores) {
    if (r.matcher != matcher) continue;
    (r.label == Label::kGenuine ? out.genuine : out.imposter).push_back(r.score);
  }
  return out;
}

ScorePopulations SplitByLabel(const ScoreSet& scores) {
  ScorePopulations out;
  for (const auto& r : scores) {
    (r.label == Label::kGenuine ? out.genuine : out.imposter).push_back(r.score);
  }
  return out;
}

std::vector<std::string> MatcherNames(const ScoreSet& scores) {
  std::vector<std::string> names;
  for (const auto& r : scores) {
    if (std::find(names.begin(), names.end(), r.matcher) == names.end()) {
      names.push_back(r.matcher);
    }
  }
  return names;
}

}  // namespace fusionbench
