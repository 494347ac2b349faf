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

#include "fusionbench/datagen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "fusionbench/error.h"

namespace fusionbench {

namespace {

// Independent streams per channel so adding a modality never perturbs another.
enum class Stream : std::uint32_t { kIris = 1, kFingerprint = 2, kScores = 3 };

constexpr int kMaxRejectionDraws = 100000;

std::mt19937_64 MakeRng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::vector<double> RandomDescriptor(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> row(dim);
  for (double& v : row) v = std::max(0.0, normal(rng));
  return row;
}

// Zero rows are not valid descriptors; lift one coordinate.
void EnsureNonzero(std::vector<double>& row, std::mt19937_64& rng) {
  if (std::any_of(row.begin(), row.end(), [](double v) { return v != 0.0; })) {
    return;
  }
  std::uniform_int_distribution<std::size_t> pick(0, row.size() - 1);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  row[pick(rng)] = u(rng);
}

}  // namespace

void ValidateSynthConfig(const SynthConfig& c) {
  Require(c.n_subjects >= 2, "n_subjects must be at least 2");
  Require(c.samples_per_subject >= 2, "samples_per_subject must be at least 2");
  Require(c.iris_bits >= 1, "iris_bits must be at least 1");
  Require(c.intra_flip_rate >= 0.0 && c.intra_flip_rate < 0.5,
          "intra_flip_rate must lie in [0, 0.5)");
  Require(c.fp_minutiae_min >= 1, "fp_minutiae_range minimum must be >= 1");
  Require(c.fp_minutiae_max >= c.fp_minutiae_min,
          "fp_minutiae_range maximum must be >= minimum");
  Require(c.descriptor_dim >= 1, "descriptor_dim must be at least 1");
  Require(c.descriptor_noise >= 0.0 && std::isfinite(c.descriptor_noise),
          "descriptor_noise must be finite and nonnegative");
  if (!c.score_model) return;
  Require(!c.score_model->empty(), "score_model lists no matchers");
  std::map<std::string, int> names;
  for (const auto& m : *c.score_model) {
    const std::string who = "score_model[" + m.matcher + "]: ";
    Require(!m.matcher.empty() && !m.modality.empty(),
            "score_model entries need matcher and modality names");
    Require(++names[m.matcher] == 1, who + "duplicate matcher name");
    Require(m.gen_mean > m.imp_mean, who + "gen_mean must exceed imp_mean");
    Require(m.gen_mean >= 0.0 && m.gen_mean <= 1.0 && m.imp_mean >= 0.0 &&
                m.imp_mean <= 1.0,
            who + "means must lie in [0,1]");
    Require(m.gen_std >= 0.0 && m.imp_std >= 0.0 && std::isfinite(m.gen_std) &&
                std::isfinite(m.imp_std),
            who + "standard deviations must be finite and nonnegative");
    Require(m.correlation >= 0.0 && m.correlation <= 1.0,
            who + "correlation must lie in [0,1]");
  }
}

std::string SyntheticSubjectId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "S%05zu", index);
  return buf;
}

std::string SyntheticSampleId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%03zu", index);
  return buf;
}

SubjectIndex SyntheticSubjectIndex(const SynthConfig& config) {
  SubjectIndex index(config.n_subjects);
  for (std::size_t s = 0; s < config.n_subjects; ++s) {
    index[s].subject = SyntheticSubjectId(s);
    for (std::size_t k = 0; k < config.samples_per_subject; ++k) {
      index[s].samples.push_back(SyntheticSampleId(k));
    }
  }
  return index;
}

TemplateDataset synth_templates(const SynthConfig& config) {
  ValidateSynthConfig(config);
  TemplateDataset out;
  out.iris.reserve(config.n_subjects * config.samples_per_subject);
  out.fingerprint.reserve(config.n_subjects * config.samples_per_subject);

  std::mt19937_64 iris_rng = MakeRng(config.seed, Stream::kIris);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::uint8_t> base(config.iris_bits);
  std::vector<std::uint8_t> sample(config.iris_bits);
  for (std::size_t s = 0; s < config.n_subjects; ++s) {
    // All-zero templates break Jaccard; redraw until a bit is set.
    do {
      for (std::size_t i = 0; i < base.size(); i += 64) {
        const std::uint64_t word = iris_rng();
        for (std::size_t b = 0; b < 64 && i + b < base.size(); ++b) {
          base[i + b] = (word >> b) & 1u;
        }
      }
    } while (std::all_of(base.begin(), base.end(),
                         [](std::uint8_t b) { return b == 0; }));
    for (std::size_t k = 0; k < config.samples_per_subject; ++k) {
      do {
        for (std::size_t i = 0; i < base.size(); ++i) {
          const bool flip = unit(iris_rng) < config.intra_flip_rate;
          sample[i] = base[i] ^ static_cast<std::uint8_t>(flip);
        }
      } while (std::all_of(sample.begin(), sample.end(),
                           [](std::uint8_t b) { return b == 0; }));
      out.iris.emplace_back(sample, SyntheticSubjectId(s),
                            SyntheticSampleId(k));
    }
  }

  std::mt19937_64 fp_rng = MakeRng(config.seed, Stream::kFingerprint);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> count(config.fp_minutiae_min,
                                                   config.fp_minutiae_max);
  for (std::size_t s = 0; s < config.n_subjects; ++s) {
    std::vector<std::vector<double>> base_rows(config.fp_minutiae_max);
    for (auto& row : base_rows) {
      row = RandomDescriptor(config.descriptor_dim, fp_rng);
      EnsureNonzero(row, fp_rng);
    }
    for (std::size_t k = 0; k < config.samples_per_subject; ++k) {
      // Choose which minutiae this impression shows (partial Fisher-Yates),
      // keeping their base order.
      const std::size_t n = count(fp_rng);
      std::vector<std::size_t> order(base_rows.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      for (std::size_t i = 0; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
        std::swap(order[i], order[pick(fp_rng)]);
      }
      std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));
      std::vector<std::vector<double>> rows(n);
      for (std::size_t i = 0; i < n; ++i) {
        rows[i] = base_rows[order[i]];
        for (double& v : rows[i]) {
          v = std::max(0.0, v + config.descriptor_noise * noise(fp_rng));
        }
        EnsureNonzero(rows[i], fp_rng);
      }
      out.fingerprint.emplace_back(rows, SyntheticSubjectId(s),
                                   SyntheticSampleId(k));
    }
  }
  return out;
}

ScoreSet synth_scores(const SynthConfig& config, Protocol protocol) {
  ValidateSynthConfig(config);
  if (!config.score_model) {
    throw ConfigError("synth_scores needs a score_model");
  }
  const auto& models = *config.score_model;

  // Matchers grouped by modality, in first-appearance order.
  std::vector<std::vector<std::size_t>> groups;
  {
    std::map<std::string, std::size_t> group_of;
    for (std::size_t m = 0; m < models.size(); ++m) {
      auto [it, inserted] = group_of.emplace(models[m].modality, groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(m);
    }
  }

  const std::vector<Comparison> comparisons =
      generate_comparisons(SyntheticSubjectIndex(config), protocol);
  std::mt19937_64 rng = MakeRng(config.seed, Stream::kScores);
  std::normal_distribution<double> normal(0.0, 1.0);

  ScoreSet out;
  out.reserve(comparisons.size() * models.size());
  std::vector<double> scores(models.size());
  for (const auto& c : comparisons) {
    const bool genuine = c.label == Label::kGenuine;
    for (const auto& group : groups) {
      int draws = 0;
      bool inside = false;
      while (!inside) {
        if (++draws > kMaxRejectionDraws) {
          throw ConfigError(
              "score model puts almost no mass inside [0,1]; rejection "
              "sampling gave up");
        }
        const double shared = normal(rng);
        inside = true;
        for (std::size_t m : group) {
          const MatcherScoreModel& model = models[m];
          const double rho = model.correlation;
          const double latent =
              std::sqrt(rho) * shared + std::sqrt(1.0 - rho) * normal(rng);
          const double s = genuine ? model.gen_mean + model.gen_std * latent
                                   : model.imp_mean + model.imp_std * latent;
          scores[m] = s;
          inside = inside && s >= 0.0 && s <= 1.0;
        }
      }
    }
    for (std::size_t m = 0; m < models.size(); ++m) {
      out.push_back({c.probe_subject, c.probe_sample, c.gallery_subject,
                     c.gallery_sample, models[m].matcher, scores[m], c.label});
    }
  }
  return out;
}

std::vector<MatcherScoreModel> DefaultScoreModel() {
  return {
      {"hamming", "iris", 0.66, 0.10, 0.40, 0.10, 0.6},
      {"jaccard", "iris", 0.58, 0.10, 0.35, 0.10, 0.6},
      {"dice", "fingerprint", 0.62, 0.11, 0.36, 0.09, 0.6},
      {"cosine", "fingerprint", 0.68, 0.10, 0.44, 0.10, 0.6},
  };
}

}  // namespace fusionbench
