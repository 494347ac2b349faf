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

#include "cli.h"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fusionbench/datagen.h"
#include "fusionbench/error.h"
#include "fusionbench/evaluation.h"
#include "fusionbench/io.h"
#include "fusionbench/kernels.h"
#include "fusionbench/pipeline.h"

namespace fusionbench::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ConfigureLogging() {
  auto logger = spdlog::get("fusionbench");
  if (!logger) {
    logger = spdlog::stderr_color_mt("fusionbench");
    spdlog::set_default_logger(logger);
  }
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("FUSIONBENCH_LOG")) {
    level = spdlog::level::from_str(env);
  }
  spdlog::set_level(level);
}

Protocol ParseProtocol(const std::string& text) {
  if (text == "all-pairs") return Protocol::kAllPairs;
  if (text == "first-vs-rest") return Protocol::kFirstVsRest;
  throw ConfigError("unknown protocol '" + text + "'");
}

std::string_view ProtocolName(Protocol p) {
  return p == Protocol::kAllPairs ? "all-pairs" : "first-vs-rest";
}

DsVariant ParseDsMasses(int n) {
  if (n == 2) return DsVariant::kTwoMass;
  if (n == 4) return DsVariant::kFourMass;
  throw ConfigError("ds masses must be 2 or 4");
}

void CheckCiLevels(const std::vector<int>& levels) {
  for (int level : levels) z_value(level);
}

// "iris=hamming,jaccard"
ModalitySpec ParseModalityFlag(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw ConfigError("modality must look like name=matcher[,matcher...]");
  }
  ModalitySpec spec{text.substr(0, eq), {}};
  std::stringstream rest(text.substr(eq + 1));
  std::string matcher;
  while (std::getline(rest, matcher, ',')) {
    if (!matcher.empty()) spec.matchers.push_back(matcher);
  }
  return spec;
}

std::string SafeFileName(std::string name) {
  for (char& c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
          c == '.')) {
      c = '_';
    }
  }
  return name;
}

fs::path PrepareOutDir(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("cannot create output directory " + out);
  }
  return dir;
}

std::string Render(const auto& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

void WriteAndReport(std::ostream& out, const fs::path& path,
                    const std::string& contents) {
  WriteFile(path, contents);
  out << "  " << path.filename().string() << "  " << Checksum(contents) << '\n';
}

ScoreSet LoadScores(const fs::path& path) {
  std::istringstream in(ReadFile(path));
  return ReadScores(in);
}

TemplateDataset LoadTemplates(const fs::path& path) {
  std::istringstream in(ReadFile(path));
  return ReadTemplates(in);
}

ScoreSet MatchAll(const TemplateDataset& dataset, Protocol protocol,
                  bool parallel) {
  const SubjectIndex index = BuildSubjectIndex(dataset);
  const auto pairs = generate_comparisons(index, protocol);
  std::vector<Matcher> matchers;
  for (Matcher m : kAllMatchers) {
    const bool iris = MatcherModality(m) == "iris";
    if (iris ? !dataset.iris.empty() : !dataset.fingerprint.empty()) {
      matchers.push_back(m);
    }
  }
  return parallel ? match_comparisons_parallel(dataset, pairs, matchers)
                  : match_comparisons_serial(dataset, pairs, matchers);
}

void WriteReports(std::ostream& out, const fs::path& dir,
                  const std::vector<EvalReport>& reports,
                  const std::vector<RocCurve>& rocs) {
  for (std::size_t i = 0; i < reports.size(); ++i) {
    WriteAndReport(out, dir / ("roc_" + SafeFileName(reports[i].name) + ".csv"),
                   Render([&](std::ostream& s) { WriteRocCsv(s, rocs[i]); }));
  }
}

void PrintReportTable(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "name,eer_percent,d_prime,ng,ni\n";
  for (const auto& r : reports) {
    out << r.name << ',' << FormatFixed(r.eer_percent, 4) << ','
        << FormatFixed(r.d_prime, 4) << ',' << r.genuine_count << ','
        << r.imposter_count << '\n';
  }
}

// ---------------------------------------------------------------------------
// Subcommands

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string protocol = "all-pairs";
  int ds_masses = 2;
  std::vector<int> ci;
};

int CmdSynth(const CommonFlags& flags, std::ostream& out) {
  SynthConfig config = ParseSynthConfig(ReadJsonFile(flags.config));
  if (flags.seed) config.seed = *flags.seed;
  const Protocol protocol = ParseProtocol(flags.protocol);
  const fs::path dir = PrepareOutDir(flags.out);

  const TemplateDataset templates = synth_templates(config);
  const auto pairs =
      generate_comparisons(SyntheticSubjectIndex(config), protocol);
  const auto genuine = std::count_if(pairs.begin(), pairs.end(), [](auto& c) {
    return c.label == Label::kGenuine;
  });
  out << "subjects " << config.n_subjects << ", samples/subject "
      << config.samples_per_subject << ", seed " << config.seed << '\n'
      << "comparisons: " << genuine << " genuine, "
      << static_cast<std::ptrdiff_t>(pairs.size()) - genuine << " imposter ("
      << ProtocolName(protocol) << ")\n";
  WriteAndReport(out, dir / "templates.jsonl", Render([&](std::ostream& s) {
                   WriteTemplates(s, templates);
                 }));
  if (config.score_model) {
    const ScoreSet scores = synth_scores(config, protocol);
    WriteAndReport(out, dir / "scores.csv", Render([&](std::ostream& s) {
                     WriteScores(s, scores);
                   }));
  }
  return kExitOk;
}

int CmdMatch(const CommonFlags& flags, const std::string& templates_path,
             bool serial, std::ostream& out) {
  const Protocol protocol = ParseProtocol(flags.protocol);
  const TemplateDataset dataset = LoadTemplates(templates_path);
  const fs::path dir = PrepareOutDir(flags.out);
  const ScoreSet scores = MatchAll(dataset, protocol, !serial);
  out << "matched " << scores.size() << " scores\n";
  WriteAndReport(out, dir / "scores.csv",
                 Render([&](std::ostream& s) { WriteScores(s, scores); }));
  return kExitOk;
}

int CmdFuseScores(const CommonFlags& flags, const std::string& scores_path,
                  const std::vector<std::string>& modality_flags,
                  std::ostream& out) {
  PipelineOptions options;
  if (!modality_flags.empty()) {
    options.modalities.clear();
    for (const auto& m : modality_flags) {
      options.modalities.push_back(ParseModalityFlag(m));
    }
  }
  options.split_seed = flags.seed;
  const ScoreSet scores = LoadScores(scores_path);
  ValidateScoreSet(scores);
  const fs::path dir = PrepareOutDir(flags.out);
  const McwResult mcw = RunMcw(SplitScoreSet(scores, flags.seed), options);
  out << "fused " << mcw.fused.size() << " scores\n";
  WriteAndReport(out, dir / "fused_scores.csv", Render([&](std::ostream& s) {
                   WriteScores(s, mcw.fused);
                 }));
  WriteAndReport(out, dir / "mcw_weights.csv", Render([&](std::ostream& s) {
                   WriteWeightTrace(s, mcw.weights);
                 }));
  return kExitOk;
}

void WritePipelineOutputs(std::ostream& out, const fs::path& dir,
                          const PipelineResult& result,
                          const PipelineOptions& options, json extra) {
  json report = PipelineReportJson(result, options);
  for (auto& [key, value] : extra.items()) report[key] = value;
  WriteAndReport(out, dir / "report.json", report.dump(2) + "\n");
  WriteReports(out, dir, result.reports, result.rocs);
  WriteAndReport(out, dir / "mass_trace.csv", Render([&](std::ostream& s) {
                   WriteMassTrace(s, result.mass_trace);
                 }));
  if (result.conflicts > 0) {
    spdlog::warn("{} test probe(s) ended in total conflict and were rejected",
                 result.conflicts);
  }
}

int CmdFuseDecision(const CommonFlags& flags, const std::string& scores_path,
                    std::optional<double> threshold, std::ostream& out) {
  const ScoreSet scores = LoadScores(scores_path);
  PipelineOptions options;
  options.variant = ParseDsMasses(flags.ds_masses);
  options.split_seed = flags.seed;
  options.threshold = threshold;
  if (!flags.ci.empty()) options.eval.ci_levels = flags.ci;
  CheckCiLevels(options.eval.ci_levels);
  // Every score column is one evidence source.
  options.modalities.clear();
  for (const auto& name : MatcherNames(scores)) {
    options.modalities.push_back({name, {name}});
  }
  const fs::path dir = PrepareOutDir(flags.out);
  const PipelineResult result = run_pipeline(scores, options);
  PrintReportTable(out, result.reports);
  WritePipelineOutputs(out, dir, result, options, json::object());
  return kExitOk;
}

int CmdEvaluate(const CommonFlags& flags, const std::string& scores_path,
                const std::vector<double>& fmr_targets,
                const std::string& split, std::ostream& out) {
  ScoreSet scores = LoadScores(scores_path);
  if (split == "train" || split == "test") {
    SplitScores halves = SplitScoreSet(scores, flags.seed);
    scores = split == "train" ? std::move(halves.train) : std::move(halves.test);
  } else if (split != "all") {
    throw ConfigError("unknown split '" + split + "'");
  }
  EvalOptions options;
  if (!fmr_targets.empty()) options.fmr_targets_percent = fmr_targets;
  if (!flags.ci.empty()) options.ci_levels = flags.ci;
  CheckCiLevels(options.ci_levels);
  const fs::path dir = PrepareOutDir(flags.out);
  std::vector<EvalReport> reports;
  std::vector<RocCurve> rocs;
  for (const auto& matcher : MatcherNames(scores)) {
    const ScorePopulations p = SplitByLabel(scores, matcher);
    RocCurve roc;
    reports.push_back(evaluate(matcher, p.genuine, p.imposter, options, &roc));
    rocs.push_back(std::move(roc));
  }
  PrintReportTable(out, reports);
  json j = {{"reports", json::array()}};
  for (const auto& r : reports) j["reports"].push_back(ReportToJson(r));
  WriteAndReport(out, dir / "report.json", j.dump(2) + "\n");
  WriteReports(out, dir, reports, rocs);
  return kExitOk;
}

// Pipeline configuration file: exactly one data source ("scores",
// "templates" or "synth"), plus optional protocol and fusion settings.
int CmdPipeline(CommonFlags flags, const std::vector<std::string>& explicit_flags,
                std::ostream& out) {
  const fs::path config_path(flags.config);
  const json config = ReadJsonFile(config_path);
  if (!config.is_object()) throw ConfigError("pipeline config must be an object");
  const fs::path base = config_path.parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  auto set_flag = [&](const char* name) {
    return std::find(explicit_flags.begin(), explicit_flags.end(), name) !=
           explicit_flags.end();
  };
  static const std::vector<std::string> kKnown = {
      "scores", "templates", "synth", "out", "protocol", "ds_masses", "ci",
      "fmr_targets", "threshold", "modalities", "split_seed", "parallel"};
  for (const auto& [key, _] : config.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw ConfigError("unknown pipeline config field '" + key + "'");
    }
  }
  try {
    if (config.contains("out") && !set_flag("--out")) {
      flags.out = resolve(config.at("out").get<std::string>()).string();
    }
    if (config.contains("protocol") && !set_flag("--protocol")) {
      flags.protocol = config.at("protocol").get<std::string>();
    }
    if (config.contains("ds_masses") && !set_flag("--ds-masses")) {
      flags.ds_masses = config.at("ds_masses").get<int>();
    }
    if (config.contains("ci") && !set_flag("--ci")) {
      const json& ci = config.at("ci");
      flags.ci = ci.is_array() ? ci.get<std::vector<int>>()
                               : std::vector<int>{ci.get<int>()};
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("pipeline config: ") + e.what());
  }

  PipelineOptions options;
  options.variant = ParseDsMasses(flags.ds_masses);
  if (!flags.ci.empty()) options.eval.ci_levels = flags.ci;
  CheckCiLevels(options.eval.ci_levels);
  const Protocol protocol = ParseProtocol(flags.protocol);
  try {
    if (config.contains("fmr_targets")) {
      options.eval.fmr_targets_percent =
          config.at("fmr_targets").get<std::vector<double>>();
    }
    if (config.contains("threshold") && !config.at("threshold").is_null()) {
      options.threshold = config.at("threshold").get<double>();
    }
    if (config.contains("split_seed")) {
      options.split_seed = config.at("split_seed").get<std::uint64_t>();
    }
    if (config.contains("parallel")) {
      options.parallel = config.at("parallel").get<bool>();
    }
    if (config.contains("modalities")) {
      options.modalities.clear();
      for (const auto& m : config.at("modalities")) {
        options.modalities.push_back(
            {m.at("name").get<std::string>(),
             m.at("matchers").get<std::vector<std::string>>()});
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("pipeline config: ") + e.what());
  }

  const int sources = static_cast<int>(config.contains("scores")) +
                      static_cast<int>(config.contains("templates")) +
                      static_cast<int>(config.contains("synth"));
  if (sources != 1) {
    throw ConfigError(
        "pipeline config needs exactly one of 'scores', 'templates', 'synth'");
  }

  json extra = {{"protocol", ProtocolName(protocol)}};
  ScoreSet scores;
  if (config.contains("scores")) {
    scores = LoadScores(resolve(config.at("scores").get<std::string>()));
  } else if (config.contains("templates")) {
    scores = MatchAll(
        LoadTemplates(resolve(config.at("templates").get<std::string>())),
        protocol, options.parallel);
  } else {
    const json& synth = config.at("synth");
    SynthConfig sc = ParseSynthConfig(
        synth.is_string() ? ReadJsonFile(resolve(synth.get<std::string>()))
                          : synth);
    if (flags.seed) sc.seed = *flags.seed;
    extra["seed"] = sc.seed;
    scores = sc.score_model ? synth_scores(sc, protocol)
                            : MatchAll(synth_templates(sc), protocol,
                                       options.parallel);
  }
  spdlog::info("pipeline: {} score records", scores.size());

  const fs::path dir = PrepareOutDir(flags.out);
  const PipelineResult result = run_pipeline(scores, options);
  PrintReportTable(out, result.reports);
  WriteAndReport(out, dir / "scores.csv",
                 Render([&](std::ostream& s) { WriteScores(s, scores); }));
  WriteAndReport(out, dir / "fused_scores.csv", Render([&](std::ostream& s) {
                   WriteScores(s, result.fused_scores);
                 }));
  WriteAndReport(out, dir / "mcw_weights.csv", Render([&](std::ostream& s) {
                   WriteWeightTrace(s, result.weights);
                 }));
  WritePipelineOutputs(out, dir, result, options, extra);
  return kExitOk;
}

int ExitCodeFor(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kConfig:
      return kExitUsage;
    case ErrorKind::kData:
      return kExitData;
    case ErrorKind::kNumerical:
      return kExitNumerical;
  }
  return kExitData;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  ConfigureLogging();

  CLI::App app{"Hybrid score/decision fusion for multi-biometric verification"};
  app.require_subcommand(1);
  CommonFlags flags;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", flags.config, "Configuration file");
    if (config_required) opt->required();
    sub->add_option("--seed", flags.seed, "Seed override");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--protocol", flags.protocol, "Comparison protocol")
        ->check(CLI::IsMember({"all-pairs", "first-vs-rest"}));
    sub->add_option("--ds-masses", flags.ds_masses,
                    "Evidence sources per modality pair (2 or 4)")
        ->check(CLI::IsMember({2, 4}));
    sub->add_option("--ci", flags.ci, "Confidence levels (90, 95, 99)")
        ->check(CLI::IsMember({90, 95, 99}));
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  add_common(synth, true);

  std::string templates_path;
  bool serial = false;
  auto* match = app.add_subcommand("match", "Score template comparisons");
  add_common(match, false);
  match->add_option("--templates", templates_path, "Template JSON-lines file")
      ->required();
  match->add_flag("--serial", serial, "Use the serial reference kernel");

  std::string scores_path;
  std::vector<std::string> modality_flags;
  auto* fuse_scores_cmd =
      app.add_subcommand("fuse-scores", "Mean-closure weighted score fusion");
  add_common(fuse_scores_cmd, false);
  fuse_scores_cmd->add_option("--scores", scores_path, "Score CSV")->required();
  fuse_scores_cmd->add_option("--modality", modality_flags,
                              "name=matcher,matcher (repeatable)");

  std::optional<double> threshold;
  auto* fuse_decision =
      app.add_subcommand("fuse-decision", "Dempster-Shafer decision fusion");
  add_common(fuse_decision, false);
  fuse_decision->add_option("--scores", scores_path, "Fused score CSV")
      ->required();
  fuse_decision->add_option("--threshold", threshold,
                            "Decision threshold on m(Gen)");

  std::vector<double> fmr_targets;
  std::string split = "all";
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Verification metrics");
  add_common(evaluate_cmd, false);
  evaluate_cmd->add_option("--scores", scores_path, "Score CSV")->required();
  evaluate_cmd->add_option("--fmr", fmr_targets, "Target FMR in percent");
  evaluate_cmd->add_option("--split", split, "all, train or test")
      ->check(CLI::IsMember({"all", "train", "test"}));

  auto* pipeline = app.add_subcommand("pipeline", "Run the full pipeline");
  add_common(pipeline, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) return CmdSynth(flags, out);
    if (*match) return CmdMatch(flags, templates_path, serial, out);
    if (*fuse_scores_cmd) {
      return CmdFuseScores(flags, scores_path, modality_flags, out);
    }
    if (*fuse_decision) {
      return CmdFuseDecision(flags, scores_path, threshold, out);
    }
    if (*evaluate_cmd) {
      return CmdEvaluate(flags, scores_path, fmr_targets, split, out);
    }
    if (*pipeline) {
      std::vector<std::string> given;
      for (const auto* opt : pipeline->get_options()) {
        if (opt->count() > 0) given.push_back(opt->get_name());
      }
      return CmdPipeline(flags, given, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace fusionbench::cli
