/*
 * Copyright 2026 The kor-sketch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "kor/textio.hpp"

#include <charconv>
#include <fstream>

#include "kor/errors.hpp"

namespace kor {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

uint64_t parse_id(std::string_view token, const std::string& path,
                  size_t line_no) {
  uint64_t id = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), id);
  if (ec != std::errc{} || ptr != token.data() + token.size() || id == 0) {
    throw IoError(path + ":" + std::to_string(line_no) +
                  ": expected a positive decimal id");
  }
  return id;
}

}  // namespace

std::vector<uint64_t> read_id_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  std::vector<uint64_t> ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const std::string_view token = trim(line);
    if (token.empty()) continue;
    ids.push_back(parse_id(token, path, line_no));
  }
  return ids;
}

WeightTable read_weights_tsv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path);
  WeightTable table = WeightTable::uniform();
  std::string line;
  size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const size_t tab = row.find('\t');
    if (tab == std::string_view::npos) {
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": expected id<TAB>weight");
    }
    const uint64_t id = parse_id(trim(row.substr(0, tab)), path, line_no);
    const std::string w_text(trim(row.substr(tab + 1)));
    size_t used = 0;
    double w = 0.0;
    try {
      w = std::stod(w_text, &used);
    } catch (const std::exception&) {
      throw IoError(path + ":" + std::to_string(line_no) + ": bad weight");
    }
    if (used != w_text.size()) {
      throw IoError(path + ":" + std::to_string(line_no) + ": bad weight");
    }
    table.insert(id, w);  // rejects weights outside (0,1]
  }
  return table;
}

}  // namespace kor
