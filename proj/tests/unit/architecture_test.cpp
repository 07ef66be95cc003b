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

#include <gtest/gtest.h>

#include <sstream>

#include "architecture_table.hpp"

using namespace dctts::testing;

TEST(Architecture, MatchesCommittedTable) {
  const auto committed = read_file(architecture_table_path());
  ASSERT_FALSE(committed.empty()) << architecture_table_path();
  const auto measured = measured_architecture_table();
  std::istringstream a(committed), b(measured);
  std::string expected, actual;
  int line = 0;
  while (std::getline(a, expected)) {
    ++line;
    ASSERT_TRUE(std::getline(b, actual)) << "measured table ends before line " << line;
    EXPECT_EQ(actual, expected) << "line " << line;
  }
  EXPECT_FALSE(std::getline(b, actual)) << "extra measured line: " << actual;
}
