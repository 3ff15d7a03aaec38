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
#include "mixgan/adam.hpp"

#include <cmath>

#include "mixgan/errors.hpp"

namespace mixgan {

void adam_step(Tensor& param, const Tensor& grad, AdamState& state) {
  if (param.shape() != grad.shape() || state.m.shape() != param.shape() ||
      state.v.shape() != param.shape()) {
    throw DimensionError("adam_step shape mismatch: param " + shape_to_string(param.shape()) +
                         ", grad " + shape_to_string(grad.shape()) + ", moments " +
                         shape_to_string(state.m.shape()));
  }
  const AdamHyper& h = state.hyper;
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(h.beta1, t);
  const double c2 = 1.0 - std::pow(h.beta2, t);
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g;
    state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    param[i] -= h.lr * m_hat / (std::sqrt(v_hat) + h.epsilon);
  }
}

}  // namespace mixgan
