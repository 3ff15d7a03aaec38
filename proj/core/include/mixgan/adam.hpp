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

#include <cstdint>

#include "mixgan/tensor.hpp"

namespace mixgan {

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Per-parameter Adam moments. m and v take the parameter's shape.
struct AdamState {
  AdamState() = default;
  AdamState(const Shape& shape, AdamHyper hyper) : m(shape, 0.0), v(shape, 0.0), hyper(hyper) {}

  Tensor m;
  Tensor v;
  std::int64_t t = 0;
  AdamHyper hyper;
};

/// One bias-corrected Adam update of `param` in place.
void adam_step(Tensor& param, const Tensor& grad, AdamState& state);

}  // namespace mixgan
