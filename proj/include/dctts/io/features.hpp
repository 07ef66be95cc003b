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

#include "dctts/dsp/audio.hpp"
#include "dctts/io/corpus.hpp"
#include "dctts/train/batch.hpp"

namespace dctts::io {

// STFT, magnitude normalization and mel projection of one clip.
train::Example extract_features(const std::string& id, const std::string& normalized_text,
                                const dsp::Waveform& wave);

// DCTTS_CACHE_DIR when set and non-empty, otherwise `fallback`.
std::filesystem::path resolve_cache_dir(const std::filesystem::path& fallback);

std::filesystem::path cache_path(const std::filesystem::path& cache_dir, const std::string& id);

// Writes one "<id>.dcts" tensor file per record holding "text", "mel" and
// "linear". Output bytes depend only on the WAV and the transcript, not on
// the thread count.
std::vector<std::filesystem::path> preprocess(const CorpusIndex& corpus, const std::filesystem::path& cache_dir,
                                              unsigned threads = 1);

train::Example load_cached_example(const std::filesystem::path& file);
std::vector<train::Example> load_cache(const CorpusIndex& corpus, const std::filesystem::path& cache_dir);

}  // namespace dctts::io
