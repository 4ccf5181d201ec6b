// Copyright 2026 The mnlbandit Authors.
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

#ifndef MNLBANDIT_CSV_H_
#define MNLBANDIT_CSV_H_

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mnlbandit {

// Shortest round-trip decimal representation.
std::string FormatDouble(double x);
// Empty string for nullopt (CSV null).
std::string FormatOptional(const std::optional<double>& x);

// Minimal CSV writer; fields never contain separators or quotes here.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header);

  CsvWriter& operator<<(std::string_view field);
  CsvWriter& operator<<(double x);
  CsvWriter& operator<<(long long x);
  CsvWriter& operator<<(int x) { return *this << static_cast<long long>(x); }
  CsvWriter& operator<<(long x) { return *this << static_cast<long long>(x); }
  CsvWriter& operator<<(const std::optional<double>& x);
  void EndRow();

 private:
  void Separator();

  std::ofstream out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws std::runtime_error listing the header
  // when absent.
  std::size_t Column(std::string_view name) const;
};

CsvTable ReadCsv(const std::filesystem::path& path);

std::optional<double> ParseOptionalDouble(std::string_view field);

}  // namespace mnlbandit

#endif  // MNLBANDIT_CSV_H_
