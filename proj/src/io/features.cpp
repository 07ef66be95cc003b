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

#include "dctts/io/features.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

#include "dctts/dsp/spectrogram.hpp"
#include "dctts/error.hpp"
#include "dctts/train/tensor_file.hpp"

namespace dctts::io {
namespace {

ad::Tensor to_tensor(const dsp::Spectrogram& s) { return ad::Tensor({1, s.bins, s.frames}, s.values); }

dsp::Spectrogram to_spectrogram(const ad::Tensor& t) {
  dsp::Spectrogram s(t.channels(), t.time());
  std::copy(t.data(), t.data() + t.size(), s.values.begin());
  return s;
}

}  // namespace

train::Example extract_features(const std::string& id, const std::string& normalized_text,
                                const dsp::Waveform& wave) {
  if (wave.sample_rate != dsp::kSampleRate) {
    throw DataError(id + ": sample rate " + std::to_string(wave.sample_rate) + " Hz, expected 22050");
  }
  const auto linear = dsp::normalize_magnitude(dsp::magnitude(dsp::stft(wave.samples)));
  return train::make_example(id, normalized_text, linear);
}

std::filesystem::path resolve_cache_dir(const std::filesystem::path& fallback) {
  const char* env = std::getenv("DCTTS_CACHE_DIR");
  return env && *env ? std::filesystem::path(env) : fallback;
}

std::filesystem::path cache_path(const std::filesystem::path& cache_dir, const std::string& id) {
  return cache_dir / (id + ".dcts");
}

std::vector<std::filesystem::path> preprocess(const CorpusIndex& corpus, const std::filesystem::path& cache_dir,
                                              unsigned threads) {
  const std::size_t n = corpus.records.size();
  std::vector<std::filesystem::path> written(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      const auto& r = corpus.records[i];
      try {
        train::Example ex;
        try {
          ex = extract_features(r.id, r.normalized, dsp::read_wav(r.audio));
        } catch (const DataError& e) {
          throw DataError(r.id + ": " + e.what());
        }
        ad::Tensor text({1, 1, ex.text.size()});
        for (std::size_t k = 0; k < ex.text.size(); ++k) text[k] = static_cast<float>(ex.text[k]);
        written[i] = cache_path(cache_dir, r.id);
        train::write_tensor_file(written[i],
                                 {{"text", text}, {"mel", to_tensor(ex.mel)}, {"linear", to_tensor(ex.linear)}});
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(threads, 1u); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  return written;
}

train::Example load_cached_example(const std::filesystem::path& file) {
  const auto tensors = train::read_tensor_file(file);
  if (tensors.size() != 3 || tensors[0].name != "text" || tensors[1].name != "mel" || tensors[2].name != "linear") {
    throw DataError(file.string() + ": not a feature cache entry");
  }
  train::Example ex;
  ex.id = file.stem().string();
  for (std::size_t i = 0; i < tensors[0].value.size(); ++i) {
    const float v = tensors[0].value[i];
    if (!(v >= 0.0f && v < static_cast<float>(text::kVocabSize))) throw DataError(file.string() + ": bad text index");
    ex.text.push_back(static_cast<std::int32_t>(v));
  }
  ex.mel = to_spectrogram(tensors[1].value);
  ex.linear = to_spectrogram(tensors[2].value);
  if (ex.mel.bins != dsp::kMelBands || ex.linear.bins != dsp::kLinearBins ||
      ex.linear.frames != dsp::kDecimation * ex.mel.frames) {
    throw DataError(file.string() + ": inconsistent spectrogram shapes");
  }
  return ex;
}

std::vector<train::Example> load_cache(const CorpusIndex& corpus, const std::filesystem::path& cache_dir) {
  std::vector<train::Example> out;
  out.reserve(corpus.records.size());
  for (const auto& r : corpus.records) {
    auto ex = load_cached_example(cache_path(cache_dir, r.id));
    ex.id = r.id;
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace dctts::io
