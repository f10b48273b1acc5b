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

#ifndef QGENX_WIRE_HPP
#define QGENX_WIRE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "qgenx/codec.hpp"

namespace qgenx {

// Broadcast frame. Layout, all multi-byte fields big-endian:
//   magic 0x51 | scheme u8 | schedule version u16 | table hash u32 |
//   dimension varint (LEB128) | payload
// Payload is the codec bitstring for coded schemes, or the raw binary32
// coordinate array for fp32 passthrough (table hash 0).
inline constexpr uint8_t kWireMagic = 0x51;

struct WireError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MagicMismatchError : WireError {
  using WireError::WireError;
};
struct SchemeMismatchError : WireError {
  using WireError::WireError;
};
struct VersionMismatchError : WireError {
  using WireError::WireError;
};
struct HashMismatchError : WireError {
  using WireError::WireError;
};

struct SerializedMessage {
  std::vector<uint8_t> bytes;
  // Bits before padding: 8 * bytes.size() minus the payload's zero padding.
  size_t content_bits = 0;
};

struct WireMessage {
  CodingScheme scheme = CodingScheme::fp32;
  uint16_t schedule_version = 0;
  uint32_t table_hash = 0;
  int dim = 0;
  QuantizedVector qv;        // coded schemes
  std::vector<float> raw;    // fp32 passthrough
};

SerializedMessage serialize_message(const QuantizedVector& qv,
                                    const Codebook& codebook,
                                    const LevelSchedule& schedule);
SerializedMessage serialize_fp32_message(const Vec& v, int schedule_version);

// Validates magic, scheme, schedule version and table hash against the
// receiver's local state before decoding; each mismatch raises its own
// error type so a round can abort with a precise cause. `codebook` may be
// null only when expecting fp32.
WireMessage parse_message(std::span<const uint8_t> bytes,
                          CodingScheme expected_scheme, int local_version,
                          const Codebook* codebook);

}  // namespace qgenx

#endif  // QGENX_WIRE_HPP
