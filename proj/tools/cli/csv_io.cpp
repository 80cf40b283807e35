// Copyright 2026 The DMMD Authors. All Rights Reserved.
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

#include "csv_io.hpp"

#include <fstream>
#include <string>
#include <vector>

#include "dmmd/errors.hpp"
#include "dmmd/format.hpp"

namespace dmmd::cli {
namespace {

// Splits one record. Quoted fields may contain the delimiter, doubled quotes
// and line breaks, so further physical lines are pulled from `in` as needed.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields,
                 std::size_t& line_no) {
  fields.clear();
  std::string line;
  if (!std::getline(in, line)) return false;
  ++line_no;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (quoted) {
        if (!std::getline(in, line)) {
          throw InputError("line " + std::to_string(line_no) + ": unterminated quoted field");
        }
        ++line_no;
        field += '\n';
        i = 0;
        continue;
      }
      break;
    }
    const char c = line[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\r' && i == line.size()) {
      break;
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Matrix parse_matrix_csv(std::istream& in, const CsvOptions& options) {
  std::vector<std::string> fields;
  std::vector<double> values;
  std::size_t line_no = 0;
  Index cols = -1;
  Index rows = 0;
  bool header_pending = options.has_header;
  while (read_record(in, options.delimiter, fields, line_no)) {
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    if (cols < 0) {
      cols = static_cast<Index>(fields.size());
    } else if (static_cast<Index>(fields.size()) != cols) {
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " fields, found " +
                       std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      const auto v = parse_double(trim(fields[j]));
      if (!v || !std::isfinite(*v)) {
        throw InputError("line " + std::to_string(line_no) + ", field " +
                         std::to_string(j + 1) + ": not a finite number: '" + fields[j] + "'");
      }
      values.push_back(*v);
    }
    ++rows;
  }
  if (rows == 0) throw InputError("no numeric rows found");
  Matrix x(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) x(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  }
  return x;
}

Matrix read_matrix_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return parse_matrix_csv(in, options);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_matrix_csv(std::ostream& out, const Matrix& x, char delimiter) {
  if (x.cols() == 0) return;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (j) out << delimiter;
      out << format_double(x(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& x, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_matrix_csv(out, x, delimiter);
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace dmmd::cli
