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

#include "fusionbench/dataset.h"

#include <set>

#include "fusionbench/error.h"

namespace fusionbench {

namespace {

template <typename T>
SubjectIndex IndexOf(const std::vector<T>& records) {
  SubjectIndex index;
  std::map<std::string, std::size_t> position;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : records) {
    if (!seen.emplace(r.subject_id(), r.sample_id()).second) {
      throw ProtocolError("duplicate template for subject " + r.subject_id() +
                          ", sample " + r.sample_id());
    }
    auto [it, inserted] = position.emplace(r.subject_id(), index.size());
    if (inserted) index.push_back({r.subject_id(), {}});
    index[it->second].samples.push_back(r.sample_id());
  }
  return index;
}

bool SameIds(const SubjectIndex& a, const SubjectIndex& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].subject != b[i].subject || a[i].samples != b[i].samples) {
      return false;
    }
  }
  return true;
}

}  // namespace

SubjectIndex BuildSubjectIndex(const TemplateDataset& dataset) {
  const SubjectIndex iris = IndexOf(dataset.iris);
  const SubjectIndex fingerprint = IndexOf(dataset.fingerprint);
  if (dataset.iris.empty()) return fingerprint;
  if (dataset.fingerprint.empty()) return iris;
  if (!SameIds(iris, fingerprint)) {
    throw ProtocolError(
        "iris and fingerprint templates do not cover the same subjects and "
        "samples in the same order");
  }
  return iris;
}

TemplateLookup::TemplateLookup(const TemplateDataset& dataset) {
  for (const auto& t : dataset.iris) {
    iris_[{t.subject_id(), t.sample_id()}] = &t;
  }
  for (const auto& f : dataset.fingerprint) {
    fingerprint_[{f.subject_id(), f.sample_id()}] = &f;
  }
}

const BinaryTemplate& TemplateLookup::iris(std::string_view subject,
                                           std::string_view sample) const {
  auto it = iris_.find(Key(subject, sample));
  if (it == iris_.end()) {
    throw LookupError("no iris template for subject " + std::string(subject) +
                      ", sample " + std::string(sample));
  }
  return *it->second;
}

const FeatureMatrix& TemplateLookup::fingerprint(
    std::string_view subject, std::string_view sample) const {
  auto it = fingerprint_.find(Key(subject, sample));
  if (it == fingerprint_.end()) {
    throw LookupError("no fingerprint template for subject " +
                      std::string(subject) + ", sample " + std::string(sample));
  }
  return *it->second;
}

}  // namespace fusionbench
