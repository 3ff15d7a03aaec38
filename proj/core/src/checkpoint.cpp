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
#include "mixgan/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "mixgan/errors.hpp"

namespace mixgan {

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }

  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  std::string text(std::size_t n, const char* what) {
    need(n, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw LengthError(std::string("checkpoint truncated while reading ") + what + " at byte " +
                        std::to_string(pos_));
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

int activation_code(Activation a) {
  switch (a) {
    case Activation::kIdentity: return 0;
    case Activation::kRelu: return 1;
    case Activation::kSigmoid: return 2;
  }
  return 0;
}

const NamedTensor* find(const std::vector<NamedTensor>& tensors, const std::string& name) {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const std::vector<NamedTensor>& tensors) {
  std::vector<std::uint8_t> out(kCheckpointMagic.begin(), kCheckpointMagic.end());
  for (const auto& nt : tensors) {
    put_u64(out, nt.name.size());
    out.insert(out.end(), nt.name.begin(), nt.name.end());
    put_u64(out, nt.tensor.rank());
    for (auto d : nt.tensor.shape()) put_u64(out, d);
    for (double v : nt.tensor.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

std::vector<NamedTensor> decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kCheckpointMagic.size() ||
      std::memcmp(bytes.data(), kCheckpointMagic.data(), kCheckpointMagic.size()) != 0) {
    throw FormatError("not a checkpoint: missing MGGAN1 magic");
  }
  std::vector<std::uint8_t> body(bytes.begin() + kCheckpointMagic.size(), bytes.end());
  Reader r(body);
  std::vector<NamedTensor> out;
  while (!r.done()) {
    NamedTensor nt;
    const std::uint64_t name_len = r.u64("name length");
    nt.name = r.text(name_len, "name");
    const std::uint64_t rank = r.u64("rank");
    if (rank > 8) throw FormatError("tensor '" + nt.name + "' has implausible rank " + std::to_string(rank));
    Shape shape;
    for (std::uint64_t i = 0; i < rank; ++i) {
      const std::uint64_t d = r.u64("dims");
      if (d == 0) throw FormatError("tensor '" + nt.name + "' has a zero dimension");
      shape.push_back(d);
    }
    std::vector<double> values(shape_product(shape));
    for (double& v : values) v = std::bit_cast<double>(r.u64("values"));
    nt.tensor = Tensor(std::move(shape), std::move(values));
    out.push_back(std::move(nt));
  }
  return out;
}

void write_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors) {
  const auto bytes = encode_checkpoint(tensors);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

void append_mlp(const std::string& prefix, const Mlp& mlp, std::vector<NamedTensor>& out) {
  const auto& layers = mlp.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string base = prefix + ".layer" + std::to_string(i);
    out.push_back({base + ".weight", layers[i].weight});
    out.push_back({base + ".bias", layers[i].bias});
  }
  out.push_back({prefix + ".output_activation",
                  Tensor::scalar(activation_code(mlp.spec().output_activation))});
}

bool has_mlp(const std::string& prefix, const std::vector<NamedTensor>& tensors) {
  return find(tensors, prefix + ".layer0.weight") != nullptr;
}

Mlp extract_mlp(const std::string& prefix, const std::vector<NamedTensor>& tensors) {
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0;; ++i) {
    const std::string base = prefix + ".layer" + std::to_string(i);
    const NamedTensor* w = find(tensors, base + ".weight");
    if (!w) break;
    const NamedTensor* b = find(tensors, base + ".bias");
    if (!b) throw FormatError("checkpoint has " + base + ".weight but no bias");
    if (w->tensor.rank() != 2 || b->tensor.rank() != 1 || b->tensor.dim(0) != w->tensor.dim(1)) {
      throw FormatError("checkpoint layer " + base + " has inconsistent shapes");
    }
    layers.push_back({w->tensor, b->tensor});
  }
  if (layers.empty()) throw FormatError("checkpoint has no model '" + prefix + "'");

  MlpSpec spec;
  spec.layer_sizes.push_back(layers.front().weight.dim(0));
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (i > 0 && layers[i].weight.dim(0) != layers[i - 1].weight.dim(1)) {
      throw FormatError("checkpoint model '" + prefix + "' has mismatched layer widths");
    }
    spec.layer_sizes.push_back(layers[i].weight.dim(1));
  }
  const NamedTensor* act = find(tensors, prefix + ".output_activation");
  if (!act) throw FormatError("checkpoint model '" + prefix + "' lacks output_activation");
  switch (static_cast<int>(act->tensor.item())) {
    case 0: spec.output_activation = Activation::kIdentity; break;
    case 1: spec.output_activation = Activation::kRelu; break;
    case 2: spec.output_activation = Activation::kSigmoid; break;
    default: throw FormatError("checkpoint model '" + prefix + "' has unknown output activation");
  }
  Mlp mlp(spec);
  mlp.layers() = std::move(layers);
  return mlp;
}

}  // namespace mixgan
