/*
 * Copyright 2026 The Intentir Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef INTENTIR_JSONL_HPP_
#define INTENTIR_JSONL_HPP_

#include <cstdio>
#include <functional>
#include <istream>
#include <string>

#include <json.hpp>

#include "intentir/error.hpp"

namespace intentir::jsonl {

// Applies fn to every non-blank line parsed as a JSON object. Parse failures
// carry the 1-based line number so callers can locate bad records.
inline void for_each_record(
    std::istream& in,
    const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded()) {
      throw ValidationError("line " + std::to_string(line_no) + ": invalid JSON");
    }
    if (!record.is_object()) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected a JSON object");
    }
    fn(record, line_no);
  }
}

// Fixed-precision decimal rendering for CSV output; deterministic and free of
// locale effects.
inline std::string format_double(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return std::string(buffer);
}

}  // namespace intentir::jsonl

#endif  // INTENTIR_JSONL_HPP_
