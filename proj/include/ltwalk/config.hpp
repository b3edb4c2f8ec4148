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

#ifndef LTWALK_CONFIG_HPP
#define LTWALK_CONFIG_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "ltwalk/experiments.hpp"

namespace ltw {

inline constexpr int kSchemaVersion = 1;

// Parses the YAML experiment schema (docs/config.md). Every failure is a
// ConfigParse error whose message starts with the offending field path.
ExperimentConfig parse_config(std::string_view yaml_text);
ExperimentConfig load_config(const std::string& path);

std::string read_text_file(const std::string& path);

// FNV-1a 64 over the raw config bytes.
std::uint64_t config_digest(std::string_view text) noexcept;

}  // namespace ltw

#endif  // LTWALK_CONFIG_HPP
