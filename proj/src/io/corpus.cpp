// Copyright 2026 The dctts Authors
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

#include "dctts/io/corpus.hpp"

#include <fstream>
#include <set>

#include "dctts/error.hpp"
#include "dctts/text/vocab.hpp"

namespace dctts::io {
namespace {

std::vector<std::string> split_pipes(const std::string& line) {
  std::vector<std::string> out(1);
  for (char c : line) {
    if (c == '|') {
      out.emplace_back();
    } else {
      out.back().push_back(c);
    }
  }
  return out;
}

}  // namespace

CorpusIndex load_corpus(const std::filesystem::path& metadata, const std::filesystem::path& wav_dir) {
  std::ifstream in(metadata);
  if (!in) throw DataError("cannot open corpus metadata " + metadata.string());
  CorpusIndex index;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto where = metadata.string() + ":" + std::to_string(line_no);
    const auto fields = split_pipes(line);
    if (fields.size() != 2 && fields.size() != 3) {
      throw DataError(where + ": expected 2 or 3 '|'-separated fields, found " + std::to_string(fields.size()));
    }
    CorpusRecord r;
    r.id = fields[0];
    if (r.id.empty()) throw DataError(where + ": empty clip id");
    r.raw = fields[1];
    r.normalized = text::normalize_text(fields.size() == 3 ? fields[2] : fields[1]);
    if (!ids.insert(r.id).second) throw DataError(where + ": duplicate clip id '" + r.id + "'");
    r.audio = wav_dir / (r.id + ".wav");
    if (!std::filesystem::is_regular_file(r.audio)) {
      throw DataError(where + ": missing audio file " + r.audio.string());
    }
    if (r.normalized.empty()) index.warnings.push_back(where + ": transcript is empty after normalization");
    index.records.push_back(std::move(r));
  }
  if (index.records.empty()) index.warnings.push_back(metadata.string() + ": corpus is empty");
  return index;
}

}  // namespace dctts::io
