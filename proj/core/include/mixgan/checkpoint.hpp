// Copyright 2026 The mixgan Authors
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

// Checkpoint container.
//
//   "MGGAN1"                              6 bytes
//   repeated until end of file:
//     name_length                         uint64 little-endian
//     name                                name_length bytes
//     rank                                uint64 little-endian
//     dims[rank]                          uint64 little-endian each
//     values[product(dims)]               IEEE-754 binary64 little-endian
//
// Encoding is independent of host byte order; decode(encode(x)) == x bit for
// bit, including NaN payloads and signed zeros.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mixgan/models.hpp"
#include "mixgan/tensor.hpp"

namespace mixgan {

inline constexpr std::string_view kCheckpointMagic = "MGGAN1";

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

std::vector<std::uint8_t> encode_checkpoint(const std::vector<NamedTensor>& tensors);
/// Throws FormatError on a bad magic, LengthError on a truncated payload.
std::vector<NamedTensor> decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void write_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path);

/// Appends "<prefix>.layer<i>.weight|bias" entries plus a
/// "<prefix>.output_activation" scalar (0 identity, 1 relu, 2 sigmoid).
void append_mlp(const std::string& prefix, const Mlp& mlp, std::vector<NamedTensor>& out);
/// Rebuilds an Mlp saved by append_mlp. Hidden layers are ReLU.
Mlp extract_mlp(const std::string& prefix, const std::vector<NamedTensor>& tensors);
bool has_mlp(const std::string& prefix, const std::vector<NamedTensor>& tensors);

}  // namespace mixgan
