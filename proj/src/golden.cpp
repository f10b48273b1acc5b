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

#include "qgenx/golden.hpp"

#include <fstream>

#include "json.hpp"
#include "qgenx/wire.hpp"

namespace qgenx {

namespace {

using nlohmann::json;

QuantizedVector qv_from_json(const json& j) {
  QuantizedVector qv;
  qv.norm = j["norm"].get<double>();
  for (int s : j["signs"]) qv.signs.push_back(static_cast<int8_t>(s));
  for (int i : j["indices"]) qv.indices.push_back(i);
  qv.schedule_version = j.value("schedule_version", 0);
  return qv;
}

Codebook codebook_from_json(const json& j) {
  const std::string scheme = j.value("scheme", "huffman");
  return Codebook::from_codewords(
      scheme == "elias" ? CodingScheme::elias : CodingScheme::huffman,
      j["codewords"].get<std::vector<std::string>>());
}

json builtin_fixtures() {
  json root;

  root["elias"] = json::array();
  for (uint64_t n : {1ull, 2ull, 3ull, 4ull, 5ull, 8ull, 16ull, 100ull, 1000ull})
    root["elias"].push_back({{"n", n}, {"bits", elias_omega_encode(n)}});

  const std::vector<std::string> table = {"00", "01", "1"};
  root["codec"] = json::array();
  root["codec"].push_back({{"name", "three-symbol-table"},
                           {"scheme", "huffman"},
                           {"codewords", table},
                           {"norm", 5.0},
                           {"signs", {1, 1}},
                           {"indices", {1, 2}}});
  root["codec"].push_back({{"name", "zero-vector"},
                           {"scheme", "huffman"},
                           {"codewords", table},
                           {"norm", 0.0},
                           {"signs", {1, 1, 1}},
                           {"indices", {0, 0, 0}}});
  root["codec"].push_back({{"name", "elias-with-signs"},
                           {"scheme", "elias"},
                           {"codewords", {"0", "100", "110"}},
                           {"norm", 1.0},
                           {"signs", {1, -1}},
                           {"indices", {2, 1}}});

  root["wire"] = json::array();
  root["wire"].push_back({{"name", "coded-frame"},
                          {"kind", "coded"},
                          {"scheme", "huffman"},
                          {"codewords", table},
                          {"schedule_version", 1},
                          {"norm", 5.0},
                          {"signs", {1, 1}},
                          {"indices", {1, 2}}});
  root["wire"].push_back({{"name", "fp32-frame"},
                          {"kind", "fp32"},
                          {"schedule_version", 0},
                          {"values", {1.0, -2.0, 0.5, 3.25}}});

  // Fill in the byte strings.
  for (json& fixture : root["codec"]) {
    const Codebook book = codebook_from_json(fixture);
    fixture["hex"] = bytes_to_hex(encode(qv_from_json(fixture), book).bytes);
  }
  for (json& fixture : root["wire"]) {
    if (fixture["kind"] == "fp32") {
      const auto values = fixture["values"].get<std::vector<double>>();
      const Vec v = Eigen::Map<const Vec>(values.data(), values.size());
      fixture["hex"] = bytes_to_hex(
          serialize_fp32_message(v, fixture["schedule_version"]).bytes);
      continue;
    }
    const Codebook book = codebook_from_json(fixture);
    LevelSchedule sched = LevelSchedule::uniform(
        book.symbol_count() - 2, NormOrder::l2, fixture["schedule_version"]);
    fixture["hex"] =
        bytes_to_hex(serialize_message(qv_from_json(fixture), book, sched).bytes);
  }
  return root;
}

}  // namespace

std::string bytes_to_hex(const std::vector<uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string hex;
  hex.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    hex.push_back(digits[b >> 4]);
    hex.push_back(digits[b & 0xf]);
  }
  return hex;
}

void emit_golden_file(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("golden: cannot write " + path);
  out << builtin_fixtures().dump(2) << "\n";
}

GoldenReport verify_golden_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("golden: cannot read " + path);
  json stored = json::parse(in);
  const json current = builtin_fixtures();

  GoldenReport report;
  const auto compare = [&](const std::string& section) {
    if (!stored.contains(section)) {
      report.mismatches.push_back(section + ": missing section");
      return;
    }
    const json& a = stored[section];
    const json& b = current[section];
    if (a.size() != b.size()) {
      report.mismatches.push_back(section + ": fixture count differs");
      return;
    }
    for (size_t i = 0; i < a.size(); ++i) {
      ++report.checked;
      if (a[i] != b[i]) {
        const std::string name =
            a[i].contains("name") ? a[i]["name"].get<std::string>()
                                  : std::to_string(i);
        report.mismatches.push_back(section + "/" + name);
      }
    }
  };
  compare("elias");
  compare("codec");
  compare("wire");
  return report;
}

}  // namespace qgenx
