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

#include <gtest/gtest.h>

#include <sstream>

#include "fusionbench/datagen.h"
#include "fusionbench/error.h"

namespace fusionbench {
namespace {

using nlohmann::json;

TEST(FormatTest, ShortestRoundTrip) {
  for (double v : {0.0, 0.1, 1.0 / 3.0, 0.7071067811865476, 1e-300, 1.0}) {
    EXPECT_EQ(std::stod(FormatDouble(v)), v);
  }
  EXPECT_EQ(FormatDouble(0.25), "0.25");
  EXPECT_EQ(FormatFixed(2.0 / 3.0, 4), "0.6667");
  EXPECT_EQ(RoundTo(1.23456789, 4), 1.2346);
}

TEST(TemplatesIoTest, RoundTrip) {
  SynthConfig c;
  c.n_subjects = 3;
  c.samples_per_subject = 2;
  c.iris_bits = 77;
  c.fp_minutiae_min = 2;
  c.fp_minutiae_max = 4;
  const TemplateDataset d = synth_templates(c);
  std::stringstream ss;
  WriteTemplates(ss, d);
  const TemplateDataset back = ReadTemplates(ss);
  EXPECT_EQ(back.iris, d.iris);
  ASSERT_EQ(back.fingerprint.size(), d.fingerprint.size());
  for (std::size_t i = 0; i < d.fingerprint.size(); ++i) {
    EXPECT_EQ(back.fingerprint[i].ToRows(), d.fingerprint[i].ToRows());
    EXPECT_EQ(back.fingerprint[i].subject_id(), d.fingerprint[i].subject_id());
  }
  std::stringstream again;
  WriteTemplates(again, back);
  std::stringstream first;
  WriteTemplates(first, d);
  EXPECT_EQ(again.str(), first.str());
}

TEST(TemplatesIoTest, Errors) {
  std::stringstream bad_json("{not json\n");
  EXPECT_THROW(ReadTemplates(bad_json), ParseError);
  std::stringstream bad_modality(
      R"({"subject":"a","sample":"0","modality":"face"})" "\n");
  EXPECT_THROW(ReadTemplates(bad_modality), ParseError);
  std::stringstream zero_row(
      R"({"subject":"a","sample":"0","modality":"fingerprint","rows":[[0,0]]})"
      "\n");
  EXPECT_THROW(ReadTemplates(zero_row), ParseError);
}

TEST(ScoresIoTest, RoundTrip) {
  SynthConfig c;
  c.n_subjects = 4;
  c.samples_per_subject = 3;
  c.score_model = DefaultScoreModel();
  const ScoreSet scores = synth_scores(c);
  std::stringstream ss;
  WriteScores(ss, scores);
  EXPECT_EQ(ReadScores(ss), scores);
}

TEST(ScoresIoTest, Errors) {
  std::stringstream bad_header("a,b,c\n");
  EXPECT_THROW(ReadScores(bad_header), ParseError);
  const std::string header = std::string(kScoreCsvHeader) + "\n";
  std::stringstream short_row(header + "a,0,a,1,m,0.5\n");
  EXPECT_THROW(ReadScores(short_row), ParseError);
  std::stringstream bad_score(header + "a,0,a,1,m,abc,genuine\n");
  EXPECT_THROW(ReadScores(bad_score), ParseError);
  std::stringstream out_of_range(header + "a,0,a,1,m,1.5,genuine\n");
  EXPECT_THROW(ReadScores(out_of_range), ParseError);
  std::stringstream wrong_label(header + "a,0,b,1,m,0.5,genuine\n");
  EXPECT_THROW(ReadScores(wrong_label), ParseError);
  std::stringstream crlf(header + "a,0,a,1,m,0.5,genuine\r\n");
  EXPECT_EQ(ReadScores(crlf).size(), 1u);

  std::stringstream out;
  const ScoreSet comma = {{"a,b", "0", "a,b", "1", "m", 0.5, Label::kGenuine}};
  EXPECT_THROW(WriteScores(out, comma), Error);
}

TEST(ReportJsonTest, Layout) {
  EvalReport r;
  r.name = "hybrid";
  r.eer_percent = 1.234567;
  r.eer_threshold = 0.123456789;
  r.gmr = {{0.01, 97.123456, 0.5}, {1.0, 99.0, 0.4}};
  r.d_prime = 3.14159;
  r.hter_percent = 0.5;
  r.ci_margin_percent = {{95, 0.0236}};
  r.genuine_count = 10;
  r.imposter_count = 20;
  const json j = ReportToJson(r);
  EXPECT_EQ(j.at("eer"), 1.2346);
  EXPECT_EQ(j.at("eer_threshold"), 0.123457);
  EXPECT_EQ(j.at("gmr_at_fmr").at("0.01"), 97.1235);
  EXPECT_EQ(j.at("gmr_at_fmr").at("1"), 99.0);
  EXPECT_EQ(j.at("d_prime"), 3.1416);
  EXPECT_EQ(j.at("ci").at("95"), 0.0236);
  EXPECT_EQ(j.at("ng"), 10);
  EXPECT_EQ(j.at("ni"), 20);
}

TEST(SynthConfigJsonTest, RoundTripAndStrictKeys) {
  SynthConfig c;
  c.n_subjects = 9;
  c.fp_minutiae_min = 3;
  c.fp_minutiae_max = 5;
  c.score_model = DefaultScoreModel();
  c.seed = 42;
  const SynthConfig back = ParseSynthConfig(SynthConfigToJson(c));
  EXPECT_EQ(SynthConfigToJson(back), SynthConfigToJson(c));
  EXPECT_EQ(back.fp_minutiae_max, 5u);
  EXPECT_EQ(back.score_model->at(2).matcher, "dice");

  EXPECT_THROW(ParseSynthConfig(json{{"subjects", 3}}), ConfigError);
  EXPECT_THROW(ParseSynthConfig(json{{"n_subjects", "three"}}), ConfigError);
  EXPECT_THROW(ParseSynthConfig(json{{"fp_minutiae_range", {1, 2, 3}}}),
               ConfigError);
  EXPECT_THROW(ParseSynthConfig(json::array()), ConfigError);
}

TEST(FileIoTest, MissingFileIsConfigError) {
  EXPECT_THROW(ReadFile("/nonexistent/fusionbench/x"), ConfigError);
  EXPECT_THROW(ReadJsonFile("/nonexistent/fusionbench/x.json"), ConfigError);
}

TEST(ChecksumTest, Fnv1aVectors) {
  EXPECT_EQ(Checksum(""), "cbf29ce484222325");
  EXPECT_EQ(Checksum("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(Checksum("foobar"), "85944171f73967e8");
}

}  // namespace
}  // namespace fusionbench
