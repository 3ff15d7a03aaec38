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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mixgan/random.hpp"
#include "mixgan/tape.hpp"
#include "mixgan/tensor.hpp"

namespace mixgan {

enum class Activation { kIdentity, kRelu, kSigmoid };

const char* activation_name(Activation a);
Activation parse_activation(const std::string& name);

/// Layer sizes from input to output. {100, 240, 784} is a two-layer network
/// (one hidden layer of width 240).
struct MlpSpec {
  std::vector<std::size_t> layer_sizes;
  Activation hidden_activation = Activation::kRelu;
  Activation output_activation = Activation::kSigmoid;

  std::size_t num_layers() const { return layer_sizes.empty() ? 0 : layer_sizes.size() - 1; }
  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
  /// Throws SpecError for fewer than two sizes or a zero width.
  void validate() const;

  friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

/// weight is [fan_in x fan_out]; y = x W + b.
struct DenseLayer {
  Tensor weight;
  Tensor bias;
};

class Mlp;

/// An Mlp's parameters registered as leaves of one tape.
struct BoundMlp {
  const Mlp* model = nullptr;
  std::vector<Var> weights;
  std::vector<Var> biases;

  Var forward(Var x) const;
  /// weight_0, bias_0, weight_1, ... in the same order as Mlp::parameters().
  std::vector<Var> parameters() const;
};

class Mlp {
 public:
  /// All parameters zero.
  explicit Mlp(MlpSpec spec);

  const MlpSpec& spec() const noexcept { return spec_; }
  std::vector<DenseLayer>& layers() noexcept { return layers_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }

  std::size_t parameter_count() const;
  /// weight_0, bias_0, weight_1, bias_1, ...
  std::vector<Tensor*> parameters();
  std::vector<const Tensor*> parameters() const;

  BoundMlp bind(Tape& tape) const;
  /// Forward pass without recording gradients. x is [n x input_dim].
  Tensor forward(const Tensor& x) const;

  friend bool operator==(const Mlp& a, const Mlp& b);

 private:
  MlpSpec spec_;
  std::vector<DenseLayer> layers_;
};

std::size_t parameter_count(const MlpSpec& spec);

/// Glorot-uniform weights, zero biases, from a seeded stream.
Mlp build_mlp(const MlpSpec& spec, std::uint64_t seed);

/// Generator network; output activation taken from the spec.
Mlp build_generator(const MlpSpec& spec, std::uint64_t seed);

/// Layer sizes of the generator reversed, final width 1, sigmoid output.
/// {100, 240, 784} becomes {784, 240, 1}.
MlpSpec discriminator_spec(const MlpSpec& generator_spec);
Mlp build_discriminator(const MlpSpec& generator_spec, std::uint64_t seed);

/// z ~ U[-1, 1)^dimension.
class LatentSampler {
 public:
  explicit LatentSampler(std::size_t dimension = 100, std::uint64_t seed = 0, double lo = -1.0,
                         double hi = 1.0);

  std::size_t dimension() const noexcept { return dimension_; }
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }

  /// [n x dimension] batch. n must be >= 1.
  Tensor sample(std::size_t n);

 private:
  std::size_t dimension_;
  double lo_;
  double hi_;
  Rng rng_;
};

}  // namespace mixgan
