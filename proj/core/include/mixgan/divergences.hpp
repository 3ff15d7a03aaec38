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

// Exact divergence and value-function math over finite supports.
//
// Everything here is an exact weighted sum over the support, never a sample
// estimate, so it serves as the reference for the training code and the
// metrics module.
//
// Conventions: 0 * ln(0 / q) = 0; p > 0 with q = 0 yields +infinity.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mixgan {

inline constexpr double kProbabilitySumTolerance = 1e-12;

/// Probability vector over the indexed support {0, ..., n-1}.
class DiscreteDistribution {
 public:
  /// Throws DomainError unless entries are finite, non-negative and sum to 1
  /// within kProbabilitySumTolerance.
  explicit DiscreteDistribution(std::vector<double> probabilities);

  /// Rescales non-negative weights (not all zero) to sum to 1.
  static DiscreteDistribution normalized(std::vector<double> weights);
  static DiscreteDistribution uniform(std::size_t n);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probabilities() const noexcept { return p_; }

  friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;

 private:
  std::vector<double> p_;
};

/// K components on a shared support with mixing weights.
class MixtureModel {
 public:
  /// Uniform weights 1/K.
  explicit MixtureModel(std::vector<DiscreteDistribution> components);
  MixtureModel(std::vector<DiscreteDistribution> components, std::vector<double> weights);

  std::size_t num_components() const noexcept { return components_.size(); }
  std::size_t support_size() const noexcept { return components_.front().size(); }
  const DiscreteDistribution& component(std::size_t k) const { return components_.at(k); }
  const std::vector<DiscreteDistribution>& components() const noexcept { return components_; }
  std::span<const double> weights() const noexcept { return weights_; }
  bool has_uniform_weights() const noexcept;

 private:
  std::vector<DiscreteDistribution> components_;
  std::vector<double> weights_;
};

/// Discriminator response per support point. std::nullopt marks points where
/// the optimal response is undefined (zero density in its denominator).
using ResponseTable = std::vector<std::optional<double>>;

/// Pointwise sum_k pi_k p_k(x).
DiscreteDistribution mixture_pdf(const MixtureModel& m);

/// Equal-weight mixture of every component except k. Requires K >= 2 and
/// uniform weights.
DiscreteDistribution complement_pdf(const MixtureModel& m, std::size_t k);

/// KL(p || q). Throws DimensionError on support mismatch.
double kl_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// sum_k pi_k KL(p_k || sum_j pi_j p_j).
double generalized_js(const MixtureModel& m);

/// Two-distribution JS with weights 1/2, 1/2.
double js_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// h_k*(x) = p_k(x) / (K p_mix(x)).
ResponseTable optimal_supplementary(const MixtureModel& m, std::size_t k);

/// h*(x) = p_real(x) / (p_mix(x) + p_real(x)).
ResponseTable optimal_adversarial(const DiscreteDistribution& p_real,
                                  const DiscreteDistribution& p_mix);

/// E_{p_real} log h + E_{p_mix} log(1 - h).
double adversarial_objective(const DiscreteDistribution& p_real,
                             const DiscreteDistribution& p_mix, const ResponseTable& h);

/// E_{p_k} log h_k + complement_weight * E_{p_kbar} log(1 - h_k).
///
/// The supplementary discriminator's loss carries complement_weight = K - 1
/// (one expectation per opposing generator). The closed-form value function
/// is obtained by substituting the optimal responses into the same
/// expression with complement_weight = 1; both coincide at K = 2.
double supplementary_objective(const MixtureModel& m, std::size_t k, const ResponseTable& h_k,
                               double complement_weight);

/// V = L_h - sum_k L_hk, as exact expectations, with L_hk evaluated with the
/// unit complement weight used by the closed-form derivation. Infinite terms
/// (a response of exactly 0 or 1 against positive density) propagate as
/// +/-infinity.
double value_from_definition(const DiscreteDistribution& p_real, const MixtureModel& m,
                             const ResponseTable& h, std::span<const ResponseTable> hks);

/// Value at the optimal responses written as a sum of KL divergences.
double value_kl_form(const DiscreteDistribution& p_real, const MixtureModel& m);

/// Value at the optimal responses written with generalized JS divergences.
double value_js_form(const DiscreteDistribution& p_real, const MixtureModel& m);

/// Builds h* and every h_k* and evaluates value_from_definition with them.
double value_at_optimum(const DiscreteDistribution& p_real, const MixtureModel& m);

}  // namespace mixgan
