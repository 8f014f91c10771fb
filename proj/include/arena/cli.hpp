// Copyright 2026 The subgrad-arena Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner behind the subgrad_arena executable.
//
//   gen     write a serialized instance
//   gd      projected subgradient descent with eta = eps, T = ceil(1/eps^2)
//   verify  lemma estimators and property suites
//   reduce  exhaustive OR-query reduction check
//   sweep   gd over an epsilon grid, queries-vs-epsilon table
//
// Exit status: 0 all checks pass, 1 a check failed, 2 usage error.

#ifndef ARENA_CLI_HPP_
#define ARENA_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arena/instances.hpp"
#include "json.hpp"

namespace arena {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Command { kGen, kGd, kVerify, kReduce, kSweep };
enum class ReportFormat { kJson, kCsv };

std::string_view CommandName(Command command);
Command ParseCommand(std::string_view name);  // throws UsageError
std::string_view FormatName(ReportFormat format);
ReportFormat ParseFormat(std::string_view name);  // throws UsageError

// Unset optionals resolve to per-command defaults in Resolve().
struct ExperimentConfig {
  Command command = Command::kGd;
  std::optional<double> epsilon;
  std::optional<Family> family;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> trials;
  std::string output_path;  // empty writes the report to stdout
  ReportFormat format = ReportFormat::kJson;
  std::string lemma = "all";
  std::optional<std::int64_t> n;
  std::optional<double> c;
  std::optional<int> t;
  std::vector<double> epsilons = {0.2, 0.1, 0.05, 0.025};
  int threads = 1;

  // Fills defaults and checks ranges. Throws UsageError.
  void Resolve();
  nlohmann::json ToJson() const;
};

// Strict: unknown keys and wrong types throw UsageError.
ExperimentConfig ConfigFromJson(const nlohmann::json& doc);

// Parses flags (and --config) into a resolved config. Throws UsageError;
// returns std::nullopt after printing help or version text.
std::optional<ExperimentConfig> ParseCommandLine(int argc, const char* const* argv,
                                                 std::ostream& out);

struct RunOutcome {
  int exit_code = kExitPass;
  std::vector<std::string> failed;  // ids of failing checks
};

// Runs a resolved config. The report goes to config.output_path (plus a
// ".meta.json" sidecar with the timestamp) or to `out` when no path is set.
RunOutcome Run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

// Full executable behaviour, including exit codes.
int RunMain(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace arena

#endif  // ARENA_CLI_HPP_
