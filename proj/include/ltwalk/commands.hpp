// Copyright 2026 The ltwalk Authors
//
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

#ifndef LTWALK_COMMANDS_HPP
#define LTWALK_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ltw {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::size_t> mem_cap_mb;
  std::string out_dir = "ltwalk_out";
  std::ostream* log = nullptr;  // one-line summaries; null for silence
};

struct CommandResult {
  bool all_hold = true;
  std::vector<std::string> outputs;  // files written, relative to out_dir
};

// Each command writes its tables plus <command>.manifest.json into out_dir.
CommandResult cmd_simulate(const std::string& config_path, const RunOptions& options);
CommandResult cmd_exact(const std::string& config_path, const RunOptions& options);
// suite: slln, variance, maxlocal, conditions, subsequence, gamma,
// truncation, or all (the suites enabled under verify.toggles).
CommandResult cmd_verify(const std::string& config_path, const std::string& suite, const RunOptions& options);
CommandResult cmd_gamma(const std::string& config_path, const RunOptions& options);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ltw

#endif  // LTWALK_COMMANDS_HPP
