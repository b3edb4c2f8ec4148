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

#include "ltwalk/csv.hpp"

#include <fstream>

#include "ltwalk/error.hpp"
#include "ltwalk/format.hpp"

namespace ltw {
namespace {

std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += quote(cells[i]);
  }
  out += '\n';
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  if (!rows_.empty() && rows_.back().size() != header_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "csv row has " + std::to_string(rows_.back().size()) + " cells, expected " +
                                                 std::to_string(header_.size()));
  }
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::add(std::string_view text) {
  if (rows_.empty()) row();
  rows_.back().emplace_back(text);
  return *this;
}

CsvTable& CsvTable::add(double value) { return add(std::string_view(format_double(value))); }

CsvTable& CsvTable::add(std::int64_t value) { return add(std::string_view(std::to_string(value))); }

std::string CsvTable::str() const {
  std::string out;
  append_line(out, header_);
  for (const auto& r : rows_) append_line(out, r);
  return out;
}

void CsvTable::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path);
  const auto s = str();
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace ltw
