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

#ifndef FUSIONBENCH_ERROR_H_
#define FUSIONBENCH_ERROR_H_

#include <stdexcept>
#include <string>

namespace fusionbench {

// Coarse error families. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kConfig,     // malformed or inconsistent configuration
  kData,       // bad input data: dimensions, ranges, lookups, protocol
  kNumerical,  // undefined arithmetic, e.g. total conflict
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

#define FUSIONBENCH_DEFINE_ERROR(Name, Kind)                     \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(Kind, what) {} \
  };

// Operand shapes disagree (template lengths, descriptor dims, vector sizes).
FUSIONBENCH_DEFINE_ERROR(DimensionError, ErrorKind::kData)
// Zero-length template or zero minutiae count.
FUSIONBENCH_DEFINE_ERROR(EmptyTemplateError, ErrorKind::kData)
// Template content makes a measure undefined (all-zero Jaccard pair, zero row).
FUSIONBENCH_DEFINE_ERROR(DegenerateTemplateError, ErrorKind::kData)
FUSIONBENCH_DEFINE_ERROR(InsufficientTrainingError, ErrorKind::kData)
FUSIONBENCH_DEFINE_ERROR(InsufficientDataError, ErrorKind::kData)
FUSIONBENCH_DEFINE_ERROR(LookupError, ErrorKind::kData)
FUSIONBENCH_DEFINE_ERROR(RangeError, ErrorKind::kData)
FUSIONBENCH_DEFINE_ERROR(ProtocolError, ErrorKind::kData)
FUSIONBENCH_DEFINE_ERROR(ParseError, ErrorKind::kData)
FUSIONBENCH_DEFINE_ERROR(DomainError, ErrorKind::kData)
FUSIONBENCH_DEFINE_ERROR(DegenerateDistributionError, ErrorKind::kNumerical)
FUSIONBENCH_DEFINE_ERROR(TotalConflictError, ErrorKind::kNumerical)
FUSIONBENCH_DEFINE_ERROR(ConfigError, ErrorKind::kConfig)

#undef FUSIONBENCH_DEFINE_ERROR

}  // namespace fusionbench

#endif  // FUSIONBENCH_ERROR_H_
