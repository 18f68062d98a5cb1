/*
 * Copyright 2026 The svsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#ifndef SVSIM_SRC_TEXT_UTIL_H_
#define SVSIM_SRC_TEXT_UTIL_H_

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace svsim::internal {

struct TextRecord {
  int line = 0;  // 1-based
  std::vector<std::string_view> fields;
};

// Splits text into whitespace-separated fields per line, dropping blank
// lines. Views point into `text`.
inline std::vector<TextRecord> SplitRecords(std::string_view text) {
  std::vector<TextRecord> records;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    TextRecord record{line_no, {}};
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() &&
             (line[i] == ' ' || line[i] == '\t' || line[i] == '\r' ||
              line[i] == '\v' || line[i] == '\f')) {
        ++i;
      }
      size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
             line[i] != '\r' && line[i] != '\v' && line[i] != '\f') {
        ++i;
      }
      if (i > start) record.fields.push_back(line.substr(start, i - start));
    }
    if (!record.fields.empty()) records.push_back(std::move(record));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return records;
}

template <typename T>
std::optional<T> ParseNumber(std::string_view field) {
  T value{};
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                   value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    return std::nullopt;
  }
  return value;
}

// Shortest representation that round-trips.
inline std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace svsim::internal

#endif  // SVSIM_SRC_TEXT_UTIL_H_
