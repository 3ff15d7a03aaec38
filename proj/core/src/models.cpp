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
#include "mixgan/models.hpp"

#include <cmath>

#include "mixgan/errors.hpp"

namespace mixgan {

namespace {

Var activate(Var x, Activation a) {
  switch (a) {
    case Activation::kIdentity: return x;
    case Activation::kRelu: return relu(x);
    case Activation::kSigmoid: return sigmoid(x);
  }
  return x;
}

}  // namespace

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "?";
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw SpecError("unknown activation '" + name + "'");
}

void MlpSpec::validate() const {
  if (layer_sizes.size() < 2) {
    throw SpecError("an MLP needs at least an input and an output size");
  }
  for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
    if (layer_sizes[i] == 0) {
      throw SpecError("layer " + std::to_string(i) + " has zero width");
    }
  }
}

std::size_t parameter_count(const MlpSpec& spec) {
  spec.validate();
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < spec.layer_sizes.size(); ++i) {
    n += spec.layer_sizes[i] * spec.layer_sizes[i + 1] + spec.layer_sizes[i + 1];
  }
  return n;
}

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  for (std::size_t i = 0; i < spec_.num_layers(); ++i) {
    const std::size_t in = spec_.layer_sizes[i];
    const std::size_t out = spec_.layer_sizes[i + 1];
    layers_.push_back({Tensor(Shape{in, out}, 0.0), Tensor(Shape{out}, 0.0)});
  }
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

std::vector<Tensor*> Mlp::parameters() {
  std::vector<Tensor*> out;
  for (auto& l : layers_) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

std::vector<const Tensor*> Mlp::parameters() const {
  std::vector<const Tensor*> out;
  for (const auto& l : layers_) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  return out;
}

BoundMlp Mlp::bind(Tape& tape) const {
  BoundMlp b;
  b.model = this;
  for (const auto& l : layers_) {
    b.weights.push_back(tape.leaf(l.weight));
    b.biases.push_back(tape.leaf(l.bias));
  }
  return b;
}

Var BoundMlp::forward(Var x) const {
  const MlpSpec& spec = model->spec();
  if (x.value().rank() != 2 || x.value().cols() != spec.input_dim()) {
    throw DimensionError("MLP input has shape " + shape_to_string(x.value().shape()) +
                         ", expected [n x " + std::to_string(spec.input_dim()) + "]");
  }
  Var h = x;
  const std::size_t n = weights.size();
  for (std::size_t i = 0; i < n; ++i) {
    h = add_bias(matmul(h, weights[i]), biases[i]);
    h = activate(h, i + 1 == n ? spec.output_activation : spec.hidden_activation);
  }
  return h;
}

std::vector<Var> BoundMlp::parameters() const {
  std::vector<Var> out;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out.push_back(weights[i]);
    out.push_back(biases[i]);
  }
  return out;
}

Tensor Mlp::forward(const Tensor& x) const {
  Tape tape;
  const BoundMlp b = bind(tape);
  return b.forward(tape.leaf(x)).value();
}

bool operator==(const Mlp& a, const Mlp& b) {
  if (!(a.spec_ == b.spec_) || a.layers_.size() != b.layers_.size()) return false;
  for (std::size_t i = 0; i < a.layers_.size(); ++i) {
    if (!(a.layers_[i].weight == b.layers_[i].weight) || !(a.layers_[i].bias == b.layers_[i].bias)) {
      return false;
    }
  }
  return true;
}

Mlp build_mlp(const MlpSpec& spec, std::uint64_t seed) {
  Mlp mlp(spec);
  Rng rng(seed);
  for (auto& l : mlp.layers()) {
    const double fan_in = static_cast<double>(l.weight.dim(0));
    const double fan_out = static_cast<double>(l.weight.dim(1));
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : l.weight.values()) w = rng.uniform(-limit, limit);
  }
  return mlp;
}

Mlp build_generator(const MlpSpec& spec, std::uint64_t seed) { return build_mlp(spec, seed); }

MlpSpec discriminator_spec(const MlpSpec& generator_spec) {
  generator_spec.validate();
  MlpSpec d;
  d.layer_sizes.assign(generator_spec.layer_sizes.rbegin(), generator_spec.layer_sizes.rend());
  d.layer_sizes.back() = 1;
  d.hidden_activation = Activation::kRelu;
  d.output_activation = Activation::kSigmoid;
  return d;
}

Mlp build_discriminator(const MlpSpec& generator_spec, std::uint64_t seed) {
  return build_mlp(discriminator_spec(generator_spec), seed);
}

LatentSampler::LatentSampler(std::size_t dimension, std::uint64_t seed, double lo, double hi)
    : dimension_(dimension), lo_(lo), hi_(hi), rng_(seed) {
  if (dimension_ == 0) throw SpecError("latent dimension must be positive");
  if (!(lo_ < hi_)) throw SpecError("latent bounds must satisfy lo < hi");
}

Tensor LatentSampler::sample(std::size_t n) {
  if (n == 0) throw ContractError("sample_latent needs n >= 1");
  Tensor z(Shape{n, dimension_});
  for (double& v : z.values()) v = rng_.uniform(lo_, hi_);
  return z;
}

}  // namespace mixgan
