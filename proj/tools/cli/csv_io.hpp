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

#ifndef DMMD_TOOLS_CSV_IO_HPP_
#define DMMD_TOOLS_CSV_IO_HPP_

#include <filesystem>
#include <istream>
#include <ostream>

#include "dmmd/linalg.hpp"

namespace dmmd::cli {

struct CsvOptions {
  bool has_header = false;
  char delimiter = ',';
};

// Parses a rectangular numeric table. Fields may be quoted; a single
// leading header row is skipped when requested. Throws InputError with the
// offending line and field.
Matrix parse_matrix_csv(std::istream& in, const CsvOptions& options = {});

Matrix read_matrix_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Shortest round-trip formatting, one row per line.
void write_matrix_csv(std::ostream& out, const Matrix& x, char delimiter = ',');

void write_matrix_csv(const std::filesystem::path& path, const Matrix& x,
                      char delimiter = ',');

}  // namespace dmmd::cli

#endif  // DMMD_TOOLS_CSV_IO_HPP_
