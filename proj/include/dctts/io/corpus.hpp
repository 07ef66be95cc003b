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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dctts::io {

struct CorpusRecord {
  std::string id;
  std::string raw;
  std::string normalized;  // after text normalization
  std::filesystem::path audio;
};

struct CorpusIndex {
  std::vector<CorpusRecord> records;
  std::vector<std::string> warnings;
};

// Reads LJSpeech-style "id|raw|normalized" lines; a two-field line uses its
// second field for both transcripts. Blank lines are skipped. Audio is
// expected at <wav_dir>/<id>.wav. Throws DataError naming the line number of a
// malformed line, a duplicate id or a missing WAV.
CorpusIndex load_corpus(const std::filesystem::path& metadata, const std::filesystem::path& wav_dir);

}  // namespace dctts::io
