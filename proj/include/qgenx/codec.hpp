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

#ifndef QGENX_CODEC_HPP
#define QGENX_CODEC_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgenx/bitstream.hpp"
#include "qgenx/levels.hpp"

namespace qgenx {

enum class CodingScheme : uint8_t { elias = 0, huffman = 1, fp32 = 2 };

// Elias omega code for n >= 1; decode(encode(n)) == n.
std::string elias_omega_encode(uint64_t n);
void elias_omega_encode(uint64_t n, BitWriter& out);
uint64_t elias_omega_decode(BitReader& in);
uint64_t elias_omega_decode(const std::string& bits);

// Prefix code over the s + 2 level symbols. Huffman tables are rebuilt
// deterministically from the same weights on every worker; only a 32-bit
// hash of the table travels on the wire.
class Codebook {
 public:
  static Codebook elias_codebook(int symbol_count);
  // Weights must be nonnegative and sum to 1 (1e-9 slack); zero weights are
  // treated as 1e-12 so every symbol gets a finite codeword. Merge-queue
  // ties break toward the lower symbol index, making tables deterministic.
  static Codebook huffman(const Eigen::VectorXd& weights);
  // Explicit table (golden vectors, interop tests); must be prefix-free.
  static Codebook from_codewords(CodingScheme scheme,
                                 std::vector<std::string> codewords);

  CodingScheme scheme() const { return scheme_; }
  int symbol_count() const { return static_cast<int>(codewords_.size()); }
  const std::string& codeword(int symbol) const;
  const std::vector<std::string>& codewords() const { return codewords_; }
  double expected_length(const Eigen::VectorXd& weights) const;
  bool is_prefix_free() const;
  uint32_t table_hash() const { return table_hash_; }

  // Reads one symbol; throws UnknownCodewordError on a dead branch and
  // TruncatedStreamError when bits run out mid-codeword.
  int decode_symbol(BitReader& in) const;

 private:
  Codebook(CodingScheme scheme, std::vector<std::string> codewords);
  void build_decode_trie();

  CodingScheme scheme_;
  std::vector<std::string> codewords_;
  // trie nodes: child index per bit, -1 absent; symbol >= 0 at leaves.
  struct TrieNode {
    int child[2] = {-1, -1};
    int symbol = -1;
  };
  std::vector<TrieNode> trie_;
  uint32_t table_hash_ = 0;
};

struct EncodedMessage {
  std::vector<uint8_t> bytes;
  size_t payload_bits = 0;  // before zero padding
  size_t padding_bits() const { return bytes.size() * 8 - payload_bits; }
};

// Wire layout: norm as IEEE-754 binary32 big-endian, then per coordinate
// the level-index codeword followed by one sign bit (0 = positive) only for
// nonzero indices; zero-padded to a byte boundary.
EncodedMessage encode(const QuantizedVector& qv, const Codebook& codebook);

// Exact inverse; consumes the whole buffer and rejects nonzero padding.
QuantizedVector decode(std::span<const uint8_t> bytes, int dim,
                       const Codebook& codebook, int schedule_version = 0);

struct CodeLengthStats {
  double entropy_bits = 0.0;        // H over the full symbol alphabet
  double bound_bits = 0.0;          // 32 + (1 - p_0) d + (H + 1) d
  double empirical_mean_bits = 0.0; // mean over supplied message lengths
};

CodeLengthStats code_length_stats(
    const Eigen::VectorXd& weights, int dim,
    std::span<const size_t> message_bit_lengths = {});

}  // namespace qgenx

#endif  // QGENX_CODEC_HPP
