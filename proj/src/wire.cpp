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

#include "qgenx/wire.hpp"

#include <bit>

namespace qgenx {

namespace {

void append_u16_be(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v & 0xff));
}

void append_u32_be(std::vector<uint8_t>& out, uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<uint8_t>((v >> shift) & 0xff));
}

void append_varint(std::vector<uint8_t>& out, uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<uint8_t>(v));
}

class ByteCursor {
 public:
  ByteCursor(const uint8_t* data, size_t size) : data_(data), size_(size) {}

  uint8_t u8() {
    if (pos_ >= size_) throw TruncatedStreamError("wire: truncated header");
    return data_[pos_++];
  }
  uint16_t u16_be() { return static_cast<uint16_t>(u8() << 8 | u8()); }
  uint32_t u32_be() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
    return v;
  }
  uint64_t varint() {
    uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const uint8_t byte = u8();
      v |= static_cast<uint64_t>(byte & 0x7f) << shift;
      if (!(byte & 0x80)) return v;
    }
    throw WireError("wire: varint too long");
  }
  size_t position() const { return pos_; }
  size_t remaining() const { return size_ - pos_; }
  const uint8_t* current() const { return data_ + pos_; }

 private:
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

std::vector<uint8_t> header(CodingScheme scheme, uint16_t version,
                            uint32_t hash, int dim) {
  std::vector<uint8_t> out;
  out.push_back(kWireMagic);
  out.push_back(static_cast<uint8_t>(scheme));
  append_u16_be(out, version);
  append_u32_be(out, hash);
  append_varint(out, static_cast<uint64_t>(dim));
  return out;
}

}  // namespace

SerializedMessage serialize_message(const QuantizedVector& qv,
                                    const Codebook& codebook,
                                    const LevelSchedule& schedule) {
  if (qv.schedule_version != schedule.version)
    throw VersionMismatchError("wire: quantized vector is stale");
  SerializedMessage msg;
  msg.bytes = header(codebook.scheme(),
                     static_cast<uint16_t>(schedule.version),
                     codebook.table_hash(), qv.dim());
  const EncodedMessage payload = encode(qv, codebook);
  msg.content_bits = msg.bytes.size() * 8 + payload.payload_bits;
  msg.bytes.insert(msg.bytes.end(), payload.bytes.begin(), payload.bytes.end());
  return msg;
}

SerializedMessage serialize_fp32_message(const Vec& v, int schedule_version) {
  SerializedMessage msg;
  msg.bytes = header(CodingScheme::fp32, static_cast<uint16_t>(schedule_version),
                     0, static_cast<int>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    append_u32_be(msg.bytes, std::bit_cast<uint32_t>(static_cast<float>(v[i])));
  msg.content_bits = msg.bytes.size() * 8;
  return msg;
}

WireMessage parse_message(std::span<const uint8_t> bytes,
                          CodingScheme expected_scheme, int local_version,
                          const Codebook* codebook) {
  ByteCursor cursor(bytes.data(), bytes.size());
  if (cursor.u8() != kWireMagic)
    throw MagicMismatchError("wire: bad magic byte");
  const uint8_t scheme_byte = cursor.u8();
  if (scheme_byte > static_cast<uint8_t>(CodingScheme::fp32))
    throw SchemeMismatchError("wire: unknown scheme id");
  const auto scheme = static_cast<CodingScheme>(scheme_byte);
  if (scheme != expected_scheme)
    throw SchemeMismatchError("wire: unexpected scheme");
  WireMessage msg;
  msg.scheme = scheme;
  msg.schedule_version = cursor.u16_be();
  if (msg.schedule_version != static_cast<uint16_t>(local_version))
    throw VersionMismatchError("wire: schedule version mismatch");
  msg.table_hash = cursor.u32_be();
  msg.dim = static_cast<int>(cursor.varint());

  if (scheme == CodingScheme::fp32) {
    if (msg.table_hash != 0)
      throw HashMismatchError("wire: fp32 messages carry hash 0");
    if (cursor.remaining() != static_cast<size_t>(msg.dim) * 4)
      throw TruncatedStreamError("wire: fp32 payload size mismatch");
    msg.raw.resize(msg.dim);
    for (int i = 0; i < msg.dim; ++i)
      msg.raw[i] = std::bit_cast<float>(cursor.u32_be());
    return msg;
  }

  if (codebook == nullptr)
    throw SchemeMismatchError("wire: no codebook for coded payload");
  if (msg.table_hash != codebook->table_hash())
    throw HashMismatchError("wire: table hash mismatch");
  msg.qv = decode({cursor.current(), cursor.remaining()}, msg.dim, *codebook,
                  msg.schedule_version);
  return msg;
}

}  // namespace qgenx
