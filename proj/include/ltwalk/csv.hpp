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

#ifndef LTWALK_CSV_HPP
#define LTWALK_CSV_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ltw {

// Row-oriented CSV with fixed column order. Doubles use the shortest
// round-trip form, so equal inputs give byte-identical files.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& add(std::string_view text);
  CsvTable& add(const char* text) { return add(std::string_view(text)); }
  CsvTable& add(double value);
  CsvTable& add(std::int64_t value);
  CsvTable& add(int value) { return add(static_cast<std::int64_t>(value)); }
  CsvTable& add(std::size_t value) { return add(static_cast<std::int64_t>(value)); }
  CsvTable& add(bool value) { return add(std::string_view(value ? "true" : "false")); }

  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;
  // Throws Io on failure.
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace ltw

#endif  // LTWALK_CSV_HPP
