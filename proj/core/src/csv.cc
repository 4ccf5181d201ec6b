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

#include "mnlbandit/csv.h"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace mnlbandit {

std::string FormatDouble(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string FormatOptional(const std::optional<double>& x) {
  return x ? FormatDouble(*x) : std::string();
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k > 0) out_ << ',';
    out_ << header[k];
  }
  out_ << '\n';
}

void CsvWriter::Separator() {
  if (in_row_ > 0) out_ << ',';
  ++in_row_;
}

CsvWriter& CsvWriter::operator<<(std::string_view field) {
  Separator();
  out_ << field;
  return *this;
}

CsvWriter& CsvWriter::operator<<(double x) { return *this << FormatDouble(x); }

CsvWriter& CsvWriter::operator<<(long long x) {
  return *this << std::string_view(std::to_string(x));
}

CsvWriter& CsvWriter::operator<<(const std::optional<double>& x) {
  return *this << std::string_view(FormatOptional(x));
}

void CsvWriter::EndRow() {
  if (in_row_ != columns_) {
    throw std::logic_error("CSV row has " + std::to_string(in_row_) +
                           " fields, header has " + std::to_string(columns_));
  }
  out_ << '\n';
  in_row_ = 0;
}

std::size_t CsvTable::Column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  std::string found;
  for (const auto& h : header) found += (found.empty() ? "" : ",") + h;
  throw std::runtime_error("missing column '" + std::string(name) +
                           "'; found: " + found);
}

namespace {

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

CsvTable ReadCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path.string() + " is empty");
  }
  table.header = SplitLine(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = SplitLine(line);
    if (fields.size() != table.header.size()) {
      throw std::runtime_error("ragged row in " + path.string());
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

std::optional<double> ParseOptionalDouble(std::string_view field) {
  if (field.empty()) return std::nullopt;
  double x = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), x);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::runtime_error("not a number: '" + std::string(field) + "'");
  }
  return x;
}

}  // namespace mnlbandit
