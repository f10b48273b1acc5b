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

#ifndef QGENX_BITSTREAM_HPP
#define QGENX_BITSTREAM_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgenx {

struct CodecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Stream ended before the expected content was read.
struct TruncatedStreamError : CodecError {
  using CodecError::CodecError;
};
// A bit pattern that is not a codeword of the active table.
struct UnknownCodewordError : CodecError {
  using CodecError::CodecError;
};
// Trailing padding bits must be zero.
struct NonzeroPaddingError : CodecError {
  using CodecError::CodecError;
};

// MSB-first bit sink over a growing byte buffer. Padding to the byte
// boundary is zeros.
class BitWriter {
 public:
  void write_bit(int bit) {
    const size_t byte = bit_count_ >> 3;
    if (byte == bytes_.size()) bytes_.push_back(0);
    if (bit) bytes_[byte] |= static_cast<uint8_t>(0x80u >> (bit_count_ & 7));
    ++bit_count_;
  }

  void write_bits(const std::string& bits) {
    for (char c : bits) write_bit(c == '1');
  }

  void write_u32_be(uint32_t value) {
    for (int shift = 24; shift >= 0; shift -= 8)
      for (int b = 7; b >= 0; --b) write_bit((value >> (shift + b)) & 1u);
  }

  size_t bit_count() const { return bit_count_; }
  size_t padding_bits() const { return (8 - (bit_count_ & 7)) & 7; }
  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
  size_t bit_count_ = 0;
};

// MSB-first reader over a fixed byte span.
class BitReader {
 public:
  BitReader(const uint8_t* data, size_t size) : data_(data), bits_(size * 8) {}
  explicit BitReader(const std::vector<uint8_t>& bytes)
      : BitReader(bytes.data(), bytes.size()) {}

  int read_bit() {
    if (cursor_ >= bits_)
      throw TruncatedStreamError("bitstream: read past end");
    const int bit = (data_[cursor_ >> 3] >> (7 - (cursor_ & 7))) & 1;
    ++cursor_;
    return bit;
  }

  uint32_t read_u32_be() {
    uint32_t v = 0;
    for (int i = 0; i < 32; ++i) v = (v << 1) | static_cast<uint32_t>(read_bit());
    return v;
  }

  size_t bits_consumed() const { return cursor_; }
  size_t bits_remaining() const { return bits_ - cursor_; }

  // Consumes the rest of the stream, requiring fewer than 8 zero bits.
  void finish_padding() {
    if (bits_remaining() >= 8)
      throw NonzeroPaddingError("bitstream: trailing bytes after payload");
    while (bits_remaining() > 0)
      if (read_bit()) throw NonzeroPaddingError("bitstream: nonzero padding");
  }

 private:
  const uint8_t* data_;
  size_t bits_;
  size_t cursor_ = 0;
};

}  // namespace qgenx

#endif  // QGENX_BITSTREAM_HPP
