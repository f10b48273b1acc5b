// Copyright 2026 The QGenX Authors
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

#ifndef QGENX_GOLDEN_HPP
#define QGENX_GOLDEN_HPP

#include <string>
#include <vector>

namespace qgenx {

// Byte-exact fixtures for the codec bitstring and the wire frame. The CLI
// `golden` subcommand emits or verifies them against a JSON file; the test
// suite checks the same set.
struct GoldenReport {
  int checked = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Writes the current fixtures to `path` (pretty JSON).
void emit_golden_file(const std::string& path);

// Recomputes every fixture and compares against `path`.
GoldenReport verify_golden_file(const std::string& path);

std::string bytes_to_hex(const std::vector<uint8_t>& bytes);

}  // namespace qgenx

#endif  // QGENX_GOLDEN_HPP
