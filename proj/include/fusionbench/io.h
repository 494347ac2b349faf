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

// File formats.
//
//   templates  JSON lines, one template per line:
//     {"subject":..,"sample":..,"modality":"iris","bits":"<hex>","nbits":N}
//     {"subject":..,"sample":..,"modality":"fingerprint","rows":[[..],..]}
//   scores     CSV: probe_subject,probe_sample,gallery_subject,gallery_sample,
//                   matcher,score,label
//   ROC        CSV: threshold,fmr,fnmr (rates in percent, 4 decimals)
//   mass trace CSV: probe_subject,probe_sample,m_gen,m_imp,m_theta,
//                   conflict_K,decision
//   report     JSON, rates in percent rounded to 4 decimals

#ifndef FUSIONBENCH_IO_H_
#define FUSIONBENCH_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fusionbench/datagen.h"
#include "fusionbench/dataset.h"
#include "fusionbench/evaluation.h"
#include "fusionbench/scores.h"
#include "json.hpp"

namespace fusionbench {

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);
// Fixed-point text with `decimals` digits; negative zero prints as zero.
std::string FormatFixed(double value, int decimals);
// `value` rounded to `decimals` places, for JSON emission.
double RoundTo(double value, int decimals);

TemplateDataset ReadTemplates(std::istream& in);
void WriteTemplates(std::ostream& out, const TemplateDataset& dataset);

inline constexpr std::string_view kScoreCsvHeader =
    "probe_subject,probe_sample,gallery_subject,gallery_sample,matcher,score,"
    "label";
ScoreSet ReadScores(std::istream& in);
void WriteScores(std::ostream& out, const ScoreSet& scores);

inline constexpr std::string_view kRocCsvHeader = "threshold,fmr,fnmr";
void WriteRocCsv(std::ostream& out, const RocCurve& roc);

struct MassTraceRow {
  std::string probe_subject;
  std::string probe_sample;
  double m_gen = 0.0;
  double m_imp = 0.0;
  double m_theta = 0.0;
  double conflict = 0.0;
  std::string decision;
};
inline constexpr std::string_view kMassTraceHeader =
    "probe_subject,probe_sample,m_gen,m_imp,m_theta,conflict_K,decision";
void WriteMassTrace(std::ostream& out, const std::vector<MassTraceRow>& rows);

nlohmann::json ReportToJson(const EvalReport& report);

SynthConfig ParseSynthConfig(const nlohmann::json& j);
nlohmann::json SynthConfigToJson(const SynthConfig& config);

// Whole-file helpers; throw ConfigError / ParseError with the path on failure.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);
nlohmann::json ReadJsonFile(const std::filesystem::path& path);

// 64-bit FNV-1a, printed as 16 hex digits.
std::string Checksum(std::string_view bytes);

}  // namespace fusionbench

#endif  // FUSIONBENCH_IO_H_
