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

#ifndef FUSIONBENCH_TOOLS_CLI_H_
#define FUSIONBENCH_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace fusionbench::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;      // bad flags or configuration
inline constexpr int kExitData = 3;       // bad input data or protocol
inline constexpr int kExitNumerical = 4;  // e.g. total conflict on all probes

// Runs `fusionbench <args...>`; args excludes the program name. Summaries go
// to `out`, diagnostics to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace fusionbench::cli

#endif  // FUSIONBENCH_TOOLS_CLI_H_
