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

#include "qgenx/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

namespace qgenx {

std::string elias_omega_encode(uint64_t n) {
  if (n < 1) throw std::invalid_argument("elias: n must be >= 1");
  std::string code = "0";
  while (n > 1) {
    std::string group;
    uint64_t v = n;
    while (v > 0) {
      group.push_back((v & 1u) ? '1' : '0');
      v >>= 1;
    }
    std::reverse(group.begin(), group.end());
    code = group + code;
    n = group.size() - 1;
  }
  return code;
}

void elias_omega_encode(uint64_t n, BitWriter& out) {
  out.write_bits(elias_omega_encode(n));
}

uint64_t elias_omega_decode(BitReader& in) {
  uint64_t n = 1;
  while (in.read_bit() == 1) {
    if (n >= 63) throw UnknownCodewordError("elias: group length overflow");
    uint64_t value = 1;
    for (uint64_t i = 0; i < n; ++i)
      value = (value << 1) | static_cast<uint64_t>(in.read_bit());
    n = value;
  }
  return n;
}

uint64_t elias_omega_decode(const std::string& bits) {
  BitWriter w;
  w.write_bits(bits);
  BitReader r(w.bytes());
  const uint64_t n = elias_omega_decode(r);
  if (r.bits_consumed() != bits.size())
    throw CodecError("elias: extra bits after codeword");
  return n;
}

namespace {
uint32_t fnv1a(uint32_t h, const void* data, size_t size) {
  const auto* p = static_cast<const uint8_t*>(data);
  for (size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x01000193u;
  }
  return h;
}
}  // namespace

Codebook::Codebook(CodingScheme scheme, std::vector<std::string> codewords)
    : scheme_(scheme), codewords_(std::move(codewords)) {
  build_decode_trie();
  uint32_t h = 0x811c9dc5u;
  const uint8_t scheme_byte = static_cast<uint8_t>(scheme_);
  h = fnv1a(h, &scheme_byte, 1);
  const uint32_t count = static_cast<uint32_t>(codewords_.size());
  h = fnv1a(h, &count, sizeof(count));
  for (const auto& cw : codewords_) {
    const uint8_t len = static_cast<uint8_t>(cw.size());
    h = fnv1a(h, &len, 1);
    h = fnv1a(h, cw.data(), cw.size());
  }
  table_hash_ = h;
}

void Codebook::build_decode_trie() {
  trie_.clear();
  trie_.emplace_back();
  for (size_t sym = 0; sym < codewords_.size(); ++sym) {
    int node = 0;
    for (char c : codewords_[sym]) {
      const int bit = c == '1';
      if (trie_[node].child[bit] < 0) {
        trie_[node].child[bit] = static_cast<int>(trie_.size());
        trie_.emplace_back();
      }
      node = trie_[node].child[bit];
    }
    trie_[node].symbol = static_cast<int>(sym);
  }
}

Codebook Codebook::elias_codebook(int symbol_count) {
  if (symbol_count < 2)
    throw std::invalid_argument("codebook: need at least 2 symbols");
  std::vector<std::string> codewords(symbol_count);
  // Level index j is coded as the integer j + 1, so the zero level gets the
  // one-bit code.
  for (int j = 0; j < symbol_count; ++j)
    codewords[j] = elias_omega_encode(static_cast<uint64_t>(j) + 1);
  return Codebook(CodingScheme::elias, std::move(codewords));
}

Codebook Codebook::huffman(const Eigen::VectorXd& weights) {
  const int n = static_cast<int>(weights.size());
  if (n < 2) throw std::invalid_argument("huffman: need at least 2 symbols");
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    if (weights[j] < 0.0)
      throw std::invalid_argument("huffman: negative weight");
    total += weights[j];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("huffman: weights must sum to 1");

  struct Node {
    double weight;
    int serial;  // leaves: symbol index; internal: n + merge order
    int left = -1;
    int right = -1;
    int symbol = -1;
  };
  std::vector<Node> nodes;
  nodes.reserve(2 * n);
  auto cmp = [&nodes](int a, int b) {
    if (nodes[a].weight != nodes[b].weight)
      return nodes[a].weight > nodes[b].weight;
    return nodes[a].serial > nodes[b].serial;
  };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> queue(cmp);
  for (int j = 0; j < n; ++j) {
    nodes.push_back({std::max(weights[j], 1e-12), j, -1, -1, j});
    queue.push(j);
  }
  int serial = n;
  while (queue.size() > 1) {
    const int a = queue.top();
    queue.pop();
    const int b = queue.top();
    queue.pop();
    nodes.push_back({nodes[a].weight + nodes[b].weight, serial++, a, b, -1});
    queue.push(static_cast<int>(nodes.size()) - 1);
  }

  std::vector<std::string> codewords(n);
  std::vector<std::pair<int, std::string>> stack{{queue.top(), ""}};
  while (!stack.empty()) {
    auto [idx, prefix] = std::move(stack.back());
    stack.pop_back();
    const Node& node = nodes[idx];
    if (node.symbol >= 0) {
      codewords[node.symbol] = prefix.empty() ? "0" : prefix;
      continue;
    }
    stack.emplace_back(node.left, prefix + "0");
    stack.emplace_back(node.right, prefix + "1");
  }
  return Codebook(CodingScheme::huffman, std::move(codewords));
}

Codebook Codebook::from_codewords(CodingScheme scheme,
                                  std::vector<std::string> codewords) {
  if (codewords.size() < 2)
    throw std::invalid_argument("codebook: need at least 2 symbols");
  Codebook book(scheme, std::move(codewords));
  if (!book.is_prefix_free())
    throw std::invalid_argument("codebook: codewords are not prefix-free");
  return book;
}

const std::string& Codebook::codeword(int symbol) const {
  if (symbol < 0 || symbol >= symbol_count())
    throw std::out_of_range("codebook: symbol out of range");
  return codewords_[symbol];
}

double Codebook::expected_length(const Eigen::VectorXd& weights) const {
  double acc = 0.0;
  for (int j = 0; j < symbol_count() && j < weights.size(); ++j)
    acc += weights[j] * static_cast<double>(codewords_[j].size());
  return acc;
}

bool Codebook::is_prefix_free() const {
  for (size_t a = 0; a < codewords_.size(); ++a)
    for (size_t b = 0; b < codewords_.size(); ++b) {
      if (a == b) continue;
      if (codewords_[a].size() <= codewords_[b].size() &&
          codewords_[b].compare(0, codewords_[a].size(), codewords_[a]) == 0)
        return false;
    }
  return true;
}

int Codebook::decode_symbol(BitReader& in) const {
  int node = 0;
  while (trie_[node].symbol < 0) {
    const int bit = in.read_bit();
    node = trie_[node].child[bit];
    if (node < 0)
      throw UnknownCodewordError("codebook: bit pattern matches no codeword");
  }
  return trie_[node].symbol;
}

EncodedMessage encode(const QuantizedVector& qv, const Codebook& codebook) {
  BitWriter out;
  out.write_u32_be(std::bit_cast<uint32_t>(static_cast<float>(qv.norm)));
  for (int i = 0; i < qv.dim(); ++i) {
    const int idx = qv.indices[i];
    if (idx < 0 || idx >= codebook.symbol_count())
      throw std::out_of_range("encode: level index outside codebook");
    out.write_bits(codebook.codeword(idx));
    if (idx != 0) out.write_bit(qv.signs[i] < 0);
  }
  EncodedMessage msg;
  msg.payload_bits = out.bit_count();
  msg.bytes = out.take();
  return msg;
}

QuantizedVector decode(std::span<const uint8_t> bytes, int dim,
                       const Codebook& codebook, int schedule_version) {
  BitReader in(bytes.data(), bytes.size());
  QuantizedVector qv;
  qv.schedule_version = schedule_version;
  qv.norm = static_cast<double>(std::bit_cast<float>(in.read_u32_be()));
  qv.signs.assign(dim, 1);
  qv.indices.assign(dim, 0);
  for (int i = 0; i < dim; ++i) {
    const int idx = codebook.decode_symbol(in);
    qv.indices[i] = idx;
    if (idx != 0 && in.read_bit()) qv.signs[i] = -1;
  }
  in.finish_padding();
  return qv;
}

CodeLengthStats code_length_stats(const Eigen::VectorXd& weights, int dim,
                                  std::span<const size_t> message_bit_lengths) {
  CodeLengthStats stats;
  for (Eigen::Index j = 0; j < weights.size(); ++j)
    if (weights[j] > 0.0) stats.entropy_bits -= weights[j] * std::log2(weights[j]);
  const double p0 = weights.size() > 0 ? weights[0] : 0.0;
  stats.bound_bits =
      32.0 + (1.0 - p0) * dim + (stats.entropy_bits + 1.0) * dim;
  if (!message_bit_lengths.empty()) {
    double acc = 0.0;
    for (size_t bits : message_bit_lengths) acc += static_cast<double>(bits);
    stats.empirical_mean_bits = acc / static_cast<double>(message_bit_lengths.size());
  }
  return stats;
}

}  // namespace qgenx
