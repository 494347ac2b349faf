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

#include "fusionbench/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "fusionbench/error.h"

namespace fusionbench {

using nlohmann::json;

namespace {

std::vector<std::string_view> SplitCsvLine(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view StripCr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

double ParseDouble(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" +
                     std::string(text) + "'");
  }
  return value;
}

void CheckCsvField(const std::string& field) {
  if (field.empty() || field.find_first_of(",\n\r") != std::string::npos) {
    throw ParseError("CSV field '" + field +
                     "' is empty or contains a separator");
  }
}

template <typename T>
T Get(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw ConfigError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
void GetOptional(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = Get<T>(j, key);
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string FormatFixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string out(buf);
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
    out.erase(0, 1);
  }
  return out;
}

double RoundTo(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double r = std::round(value * scale) / scale;
  return r == 0.0 ? 0.0 : r;
}

TemplateDataset ReadTemplates(std::istream& in) {
  TemplateDataset dataset;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (StripCr(line).find_first_not_of(" \t") == std::string_view::npos) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("templates line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    try {
      const auto subject = j.at("subject").get<std::string>();
      const auto sample = j.at("sample").get<std::string>();
      const auto modality = j.at("modality").get<std::string>();
      if (modality == "iris") {
        dataset.iris.push_back(BinaryTemplate::FromHex(
            j.at("bits").get<std::string>(), j.at("nbits").get<std::size_t>(),
            subject, sample));
      } else if (modality == "fingerprint") {
        dataset.fingerprint.emplace_back(
            j.at("rows").get<std::vector<std::vector<double>>>(), subject,
            sample);
      } else {
        throw ParseError("unknown modality '" + modality + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError("templates line " + std::to_string(line_no) + ": " +
                       e.what());
    } catch (const Error& e) {
      throw ParseError("templates line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return dataset;
}

void WriteTemplates(std::ostream& out, const TemplateDataset& dataset) {
  for (const auto& t : dataset.iris) {
    json j = {{"subject", t.subject_id()},
              {"sample", t.sample_id()},
              {"modality", "iris"},
              {"bits", t.ToHex()},
              {"nbits", t.size()}};
    out << j.dump() << '\n';
  }
  for (const auto& f : dataset.fingerprint) {
    json j = {{"subject", f.subject_id()},
              {"sample", f.sample_id()},
              {"modality", "fingerprint"},
              {"rows", f.ToRows()}};
    out << j.dump() << '\n';
  }
}

ScoreSet ReadScores(std::istream& in) {
  ScoreSet scores;
  std::string line;
  if (!std::getline(in, line) || StripCr(line) != kScoreCsvHeader) {
    throw ParseError("score CSV must start with header '" +
                     std::string(kScoreCsvHeader) + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = StripCr(line);
    if (row.empty()) continue;
    const auto f = SplitCsvLine(row);
    if (f.size() != 7) {
      throw ParseError("score CSV line " + std::to_string(line_no) +
                       ": expected 7 fields, got " + std::to_string(f.size()));
    }
    ScoreRecord r{std::string(f[0]), std::string(f[1]), std::string(f[2]),
                  std::string(f[3]), std::string(f[4]),
                  ParseDouble(f[5], line_no), ParseLabel(f[6])};
    try {
      ValidateScoreRecord(r);
    } catch (const Error& e) {
      throw ParseError("score CSV line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    scores.push_back(std::move(r));
  }
  return scores;
}

void WriteScores(std::ostream& out, const ScoreSet& scores) {
  out << kScoreCsvHeader << '\n';
  for (const auto& r : scores) {
    for (const std::string* f : {&r.probe_subject, &r.probe_sample,
                                 &r.gallery_subject, &r.gallery_sample,
                                 &r.matcher}) {
      CheckCsvField(*f);
    }
    out << r.probe_subject << ',' << r.probe_sample << ',' << r.gallery_subject
        << ',' << r.gallery_sample << ',' << r.matcher << ','
        << FormatDouble(r.score) << ',' << LabelName(r.label) << '\n';
  }
}

void WriteRocCsv(std::ostream& out, const RocCurve& roc) {
  out << kRocCsvHeader << '\n';
  for (const auto& p : roc.points) {
    out << FormatDouble(p.threshold) << ',' << FormatFixed(100.0 * p.fmr, 4)
        << ',' << FormatFixed(100.0 * p.fnmr, 4) << '\n';
  }
}

void WriteMassTrace(std::ostream& out, const std::vector<MassTraceRow>& rows) {
  out << kMassTraceHeader << '\n';
  for (const auto& r : rows) {
    out << r.probe_subject << ',' << r.probe_sample << ','
        << FormatDouble(r.m_gen) << ',' << FormatDouble(r.m_imp) << ','
        << FormatDouble(r.m_theta) << ',' << FormatDouble(r.conflict) << ','
        << r.decision << '\n';
  }
}

json ReportToJson(const EvalReport& report) {
  json gmr = json::object();
  for (const auto& g : report.gmr) {
    gmr[FormatDouble(g.target_fmr_percent)] = RoundTo(g.gmr_percent, 4);
  }
  json ci = json::object();
  for (const auto& [level, margin] : report.ci_margin_percent) {
    ci[std::to_string(level)] = RoundTo(margin, 4);
  }
  return {
      {"name", report.name},
      {"eer", RoundTo(report.eer_percent, 4)},
      {"eer_threshold", RoundTo(report.eer_threshold, 6)},
      {"gmr_at_fmr", gmr},
      {"d_prime", RoundTo(report.d_prime, 4)},
      {"hter", RoundTo(report.hter_percent, 4)},
      {"hter_threshold", RoundTo(report.hter_threshold, 6)},
      {"ci", ci},
      {"ng", report.genuine_count},
      {"ni", report.imposter_count},
  };
}

SynthConfig ParseSynthConfig(const json& j) {
  if (!j.is_object()) throw ConfigError("synth config must be a JSON object");
  static const std::set<std::string> kKnown = {
      "n_subjects",       "samples_per_subject", "iris_bits",
      "intra_flip_rate",  "fp_minutiae_range",   "descriptor_dim",
      "descriptor_noise", "score_model",         "seed"};
  for (const auto& [key, _] : j.items()) {
    if (!kKnown.count(key)) {
      throw ConfigError("unknown synth config field '" + key + "'");
    }
  }
  SynthConfig c;
  GetOptional(j, "n_subjects", c.n_subjects);
  GetOptional(j, "samples_per_subject", c.samples_per_subject);
  GetOptional(j, "iris_bits", c.iris_bits);
  GetOptional(j, "intra_flip_rate", c.intra_flip_rate);
  GetOptional(j, "descriptor_dim", c.descriptor_dim);
  GetOptional(j, "descriptor_noise", c.descriptor_noise);
  GetOptional(j, "seed", c.seed);
  if (j.contains("fp_minutiae_range")) {
    const auto range = Get<std::vector<std::size_t>>(j, "fp_minutiae_range");
    if (range.size() != 2) {
      throw ConfigError("fp_minutiae_range must be [min, max]");
    }
    c.fp_minutiae_min = range[0];
    c.fp_minutiae_max = range[1];
  }
  if (j.contains("score_model")) {
    const json& models = j.at("score_model");
    if (!models.is_array()) throw ConfigError("score_model must be an array");
    std::vector<MatcherScoreModel> parsed;
    for (const auto& m : models) {
      MatcherScoreModel model;
      model.matcher = Get<std::string>(m, "matcher");
      model.modality = Get<std::string>(m, "modality");
      model.gen_mean = Get<double>(m, "gen_mean");
      model.gen_std = Get<double>(m, "gen_std");
      model.imp_mean = Get<double>(m, "imp_mean");
      model.imp_std = Get<double>(m, "imp_std");
      GetOptional(m, "inter_matcher_correlation", model.correlation);
      parsed.push_back(std::move(model));
    }
    c.score_model = std::move(parsed);
  }
  ValidateSynthConfig(c);
  return c;
}

json SynthConfigToJson(const SynthConfig& c) {
  json j = {{"n_subjects", c.n_subjects},
            {"samples_per_subject", c.samples_per_subject},
            {"iris_bits", c.iris_bits},
            {"intra_flip_rate", c.intra_flip_rate},
            {"fp_minutiae_range", {c.fp_minutiae_min, c.fp_minutiae_max}},
            {"descriptor_dim", c.descriptor_dim},
            {"descriptor_noise", c.descriptor_noise},
            {"seed", c.seed}};
  if (c.score_model) {
    json models = json::array();
    for (const auto& m : *c.score_model) {
      models.push_back({{"matcher", m.matcher},
                        {"modality", m.modality},
                        {"gen_mean", m.gen_mean},
                        {"gen_std", m.gen_std},
                        {"imp_mean", m.imp_mean},
                        {"imp_std", m.imp_std},
                        {"inter_matcher_correlation", m.correlation}});
    }
    j["score_model"] = std::move(models);
  }
  return j;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ConfigError("failed writing " + path.string());
}

json ReadJsonFile(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string Checksum(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fusionbench
