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

namespace dctts::testing {

// The layer table of the full-size networks, measured from the C++ models in
// the format of tests/data/architecture.txt.
std::string measured_architecture_table();

std::string read_file(const std::filesystem::path& path);

// Path of the committed table.
std::filesystem::path architecture_table_path();

}  // namespace dctts::testing
