// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "soccerdqn/mlp.hpp"

namespace sdqn {

/// Binary checkpoint, all integers and floats little-endian:
///
///   offset  size      field
///   0       8         magic "DQNSOC1\0"
///   8       4         u32 format version (1)
///   12      4         u32 number of layer sizes N
///   16      4*N       u32 layer sizes, input first
///   ..      8         u64 environment frames trained
///   ..      8         u64 gradient updates applied
///   ..      8         f64 exploration epsilon
///   ..      8         u64 parameter count P
///   ..      4*P       f32 parameters in network layout order
///   ..      4         u32 CRC-32 (zlib polynomial) of every preceding byte
///
/// Load errors: kBadMagic, kCrcMismatch, kVersionMismatch, kTruncated.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  std::vector<int> dims;
  std::uint64_t step = 0;
  std::uint64_t updates = 0;
  double epsilon = 1.0;
  std::vector<float> params;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

Checkpoint make_checkpoint(const Mlp& net, std::uint64_t step, std::uint64_t updates, double epsilon);
Mlp network_from(const Checkpoint& ckpt);

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ckpt,
                                               std::uint32_t version = kCheckpointVersion);
Checkpoint parse_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace sdqn
