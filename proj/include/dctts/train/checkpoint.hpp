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

#include <cstdint>
#include <filesystem>

#include "dctts/net/hparams.hpp"
#include "dctts/parameter.hpp"

namespace dctts::train {

enum class ModelKind : std::uint32_t { text2mel = 1, ssrn = 2 };

struct CheckpointMeta {
  ModelKind kind = ModelKind::text2mel;
  net::HyperParams hparams;
  std::uint64_t iteration = 0;
  std::uint64_t seed = 0;
};

// Stores every parameter value with its ADAM moments and step count, plus
// the metadata. Tensor names: "<param>", "<param>.adam_m", "<param>.adam_v",
// "<param>.adam_step" and "meta.*".
void save_checkpoint(const std::filesystem::path& path, const ad::ParameterSet& params, const CheckpointMeta& meta);

CheckpointMeta read_checkpoint_meta(const std::filesystem::path& path);

// Restores into an existing parameter set. The file must hold exactly the
// set's parameter names with matching shapes, otherwise DataError is thrown
// and `params` is left untouched.
CheckpointMeta load_checkpoint(const std::filesystem::path& path, ad::ParameterSet& params);

}  // namespace dctts::train
