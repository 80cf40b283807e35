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

#ifndef DMMD_FORMAT_HPP_
#define DMMD_FORMAT_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace dmmd {

// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

// Parses a complete decimal floating-point token; nullopt on any trailing text.
std::optional<double> parse_double(std::string_view text);

// Quotes `field` per RFC 4180 when it contains the delimiter, a quote, or a
// line break.
std::string csv_escape(std::string_view field, char delimiter = ',');

}  // namespace dmmd

#endif  // DMMD_FORMAT_HPP_
