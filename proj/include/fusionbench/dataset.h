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

#ifndef FUSIONBENCH_DATASET_H_
#define FUSIONBENCH_DATASET_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fusionbench/evaluation.h"
#include "fusionbench/similarity.h"

namespace fusionbench {

// Protected templates of a (virtual) multimodal database. Iris and
// fingerprint records are paired only through subject and sample ids.
struct TemplateDataset {
  std::vector<BinaryTemplate> iris;
  std::vector<FeatureMatrix> fingerprint;
};

// Subjects and samples in first-appearance order. When both modalities are
// present they must cover the same (subject, sample) ids, otherwise
// ProtocolError.
SubjectIndex BuildSubjectIndex(const TemplateDataset& dataset);

// Id lookup over a TemplateDataset. Holds pointers into it.
class TemplateLookup {
 public:
  explicit TemplateLookup(const TemplateDataset& dataset);

  // Throw LookupError for unknown ids.
  const BinaryTemplate& iris(std::string_view subject,
                             std::string_view sample) const;
  const FeatureMatrix& fingerprint(std::string_view subject,
                                   std::string_view sample) const;

 private:
  using Key = std::pair<std::string, std::string>;
  std::map<Key, const BinaryTemplate*> iris_;
  std::map<Key, const FeatureMatrix*> fingerprint_;
};

}  // namespace fusionbench

#endif  // FUSIONBENCH_DATASET_H_
