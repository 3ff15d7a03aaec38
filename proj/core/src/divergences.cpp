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
#include "mixgan/divergences.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mixgan/errors.hpp"

namespace mixgan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_support(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": support sizes differ (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

void require_uniform(const MixtureModel& m, const char* what) {
  if (!m.has_uniform_weights()) {
    throw DomainError(std::string(what) + " is defined for uniform mixture weights only");
  }
}

void require_multi(const MixtureModel& m, const char* what) {
  if (m.num_components() < 2) {
    throw DomainError(std::string(what) + " needs at least two components");
  }
}

// sum_x w(x) * log(f(x)) where f comes from a response table. Points with zero
// weight contribute nothing, even where the table is undefined.
template <typename Fn>
double expect_log(std::span<const double> weights, const ResponseTable& table, Fn transform,
                  const char* what) {
  require_same_support(weights.size(), table.size(), what);
  double total = 0.0;
  for (std::size_t x = 0; x < weights.size(); ++x) {
    if (weights[x] == 0.0) continue;
    if (!table[x]) {
      throw ContractError(std::string(what) + ": response undefined at support point " +
                          std::to_string(x) + " which carries positive mass");
    }
    const double arg = transform(*table[x]);
    if (arg <= 0.0) return -kInf;
    total += weights[x] * std::log(arg);
  }
  return total;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> probabilities)
    : p_(std::move(probabilities)) {
  if (p_.empty()) throw DomainError("distribution needs a non-empty support");
  double total = 0.0;
  for (double v : p_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("probabilities must be finite and non-negative");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
    throw DomainError("probabilities sum to " + std::to_string(total) + ", not 1");
  }
}

DiscreteDistribution DiscreteDistribution::normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double v : weights) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError("weights must be finite and non-negative");
    total += v;
  }
  if (!(total > 0.0)) throw DomainError("weights must not all be zero");
  for (double& v : weights) v /= total;
  return DiscreteDistribution(std::move(weights));
}

DiscreteDistribution DiscreteDistribution::uniform(std::size_t n) {
  if (n == 0) throw DomainError("distribution needs a non-empty support");
  return DiscreteDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

MixtureModel::MixtureModel(std::vector<DiscreteDistribution> components)
    : MixtureModel(components,
                   std::vector<double>(components.size(),
                                       components.empty() ? 0.0 : 1.0 / static_cast<double>(components.size()))) {}

MixtureModel::MixtureModel(std::vector<DiscreteDistribution> components, std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty()) throw DomainError("mixture needs at least one component");
  if (weights_.size() != components_.size()) {
    throw DimensionError("mixture has " + std::to_string(components_.size()) + " components but " +
                         std::to_string(weights_.size()) + " weights");
  }
  for (const auto& c : components_) {
    require_same_support(c.size(), components_.front().size(), "mixture components");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw DomainError("mixture weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
    throw DomainError("mixture weights sum to " + std::to_string(total) + ", not 1");
  }
}

bool MixtureModel::has_uniform_weights() const noexcept {
  const double u = 1.0 / static_cast<double>(weights_.size());
  for (double w : weights_) {
    if (std::abs(w - u) > kProbabilitySumTolerance) return false;
  }
  return true;
}

DiscreteDistribution mixture_pdf(const MixtureModel& m) {
  std::vector<double> out(m.support_size(), 0.0);
  for (std::size_t k = 0; k < m.num_components(); ++k) {
    const auto& c = m.component(k);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += m.weights()[k] * c[x];
  }
  return DiscreteDistribution::normalized(std::move(out));
}

DiscreteDistribution complement_pdf(const MixtureModel& m, std::size_t k) {
  require_multi(m, "complement_pdf");
  require_uniform(m, "complement_pdf");
  if (k >= m.num_components()) throw ContractError("complement_pdf: component index out of range");
  const double scale = 1.0 / static_cast<double>(m.num_components() - 1);
  std::vector<double> out(m.support_size(), 0.0);
  for (std::size_t j = 0; j < m.num_components(); ++j) {
    if (j == k) continue;
    const auto& c = m.component(j);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += scale * c[x];
  }
  return DiscreteDistribution::normalized(std::move(out));
}

double kl_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  require_same_support(p.size(), q.size(), "kl_divergence");
  double total = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] == 0.0) continue;
    if (q[x] == 0.0) return kInf;
    total += p[x] * std::log(p[x] / q[x]);
  }
  return total;
}

double generalized_js(const MixtureModel& m) {
  const DiscreteDistribution mix = mixture_pdf(m);
  double total = 0.0;
  for (std::size_t k = 0; k < m.num_components(); ++k) {
    const double w = m.weights()[k];
    if (w == 0.0) continue;
    total += w * kl_divergence(m.component(k), mix);
  }
  return total;
}

double js_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  return generalized_js(MixtureModel({p, q}));
}

ResponseTable optimal_supplementary(const MixtureModel& m, std::size_t k) {
  require_uniform(m, "optimal_supplementary");
  if (k >= m.num_components()) throw ContractError("optimal_supplementary: component index out of range");
  const DiscreteDistribution mix = mixture_pdf(m);
  const double K = static_cast<double>(m.num_components());
  ResponseTable table(m.support_size());
  for (std::size_t x = 0; x < table.size(); ++x) {
    if (mix[x] > 0.0) table[x] = m.component(k)[x] / (K * mix[x]);
  }
  return table;
}

ResponseTable optimal_adversarial(const DiscreteDistribution& p_real,
                                  const DiscreteDistribution& p_mix) {
  require_same_support(p_real.size(), p_mix.size(), "optimal_adversarial");
  ResponseTable table(p_real.size());
  for (std::size_t x = 0; x < table.size(); ++x) {
    const double denom = p_mix[x] + p_real[x];
    if (denom > 0.0) table[x] = p_real[x] / denom;
  }
  return table;
}

double adversarial_objective(const DiscreteDistribution& p_real,
                             const DiscreteDistribution& p_mix, const ResponseTable& h) {
  require_same_support(p_real.size(), p_mix.size(), "adversarial_objective");
  const double real_term =
      expect_log(p_real.probabilities(), h, [](double v) { return v; }, "adversarial_objective");
  const double fake_term =
      expect_log(p_mix.probabilities(), h, [](double v) { return 1.0 - v; }, "adversarial_objective");
  return real_term + fake_term;
}

double supplementary_objective(const MixtureModel& m, std::size_t k, const ResponseTable& h_k,
                               double complement_weight) {
  const DiscreteDistribution complement = complement_pdf(m, k);
  const double own = expect_log(m.component(k).probabilities(), h_k, [](double v) { return v; },
                                "supplementary_objective");
  const double other = expect_log(complement.probabilities(), h_k,
                                  [](double v) { return 1.0 - v; }, "supplementary_objective");
  return own + complement_weight * other;
}

double value_from_definition(const DiscreteDistribution& p_real, const MixtureModel& m,
                             const ResponseTable& h, std::span<const ResponseTable> hks) {
  require_multi(m, "value_from_definition");
  if (hks.size() != m.num_components()) {
    throw ContractError("value_from_definition needs one supplementary table per component");
  }
  const double l_h = adversarial_objective(p_real, mixture_pdf(m), h);
  double l_supp = 0.0;
  for (std::size_t k = 0; k < hks.size(); ++k) {
    l_supp += supplementary_objective(m, k, hks[k], 1.0);
  }
  return l_h - l_supp;
}

double value_kl_form(const DiscreteDistribution& p_real, const MixtureModel& m) {
  require_multi(m, "value_kl_form");
  require_uniform(m, "value_kl_form");
  const DiscreteDistribution mix = mixture_pdf(m);
  require_same_support(p_real.size(), mix.size(), "value_kl_form");

  // Log-ratios against the pointwise (unnormalized) sum p_mix + p_real.
  double real_term = 0.0;
  double mix_term = 0.0;
  for (std::size_t x = 0; x < mix.size(); ++x) {
    const double both = mix[x] + p_real[x];
    if (p_real[x] > 0.0) real_term += p_real[x] * std::log(p_real[x] / both);
    if (mix[x] > 0.0) mix_term += mix[x] * std::log(mix[x] / both);
  }

  const std::size_t K = m.num_components();
  double component_kl = 0.0;
  double complement_kl = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    component_kl += kl_divergence(m.component(k), mix);
    complement_kl += kl_divergence(complement_pdf(m, k), mix);
  }
  const double Kd = static_cast<double>(K);
  return real_term + mix_term - component_kl - complement_kl -
         Kd * std::log((Kd - 1.0) / (Kd * Kd));
}

double value_js_form(const DiscreteDistribution& p_real, const MixtureModel& m) {
  require_multi(m, "value_js_form");
  require_uniform(m, "value_js_form");
  const DiscreteDistribution mix = mixture_pdf(m);
  const std::size_t K = m.num_components();
  std::vector<DiscreteDistribution> complements;
  complements.reserve(K);
  for (std::size_t k = 0; k < K; ++k) complements.push_back(complement_pdf(m, k));

  const double Kd = static_cast<double>(K);
  return 2.0 * js_divergence(mix, p_real) - Kd * generalized_js(m) -
         Kd * generalized_js(MixtureModel(std::move(complements))) -
         Kd * std::log((Kd - 1.0) / (Kd * Kd)) - std::log(4.0);
}

double value_at_optimum(const DiscreteDistribution& p_real, const MixtureModel& m) {
  const ResponseTable h = optimal_adversarial(p_real, mixture_pdf(m));
  std::vector<ResponseTable> hks;
  hks.reserve(m.num_components());
  for (std::size_t k = 0; k < m.num_components(); ++k) hks.push_back(optimal_supplementary(m, k));
  return value_from_definition(p_real, m, h, hks);
}

}  // namespace mixgan
