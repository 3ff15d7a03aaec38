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
#include "mixgan/cli/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "mixgan/game.hpp"
#include "mixgan/random.hpp"

namespace mixgan::cli {

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kAlgebraTol = 1e-12;
constexpr double kGradientTol = 1e-4;
constexpr double kFdStep = 1e-6;

DiscreteDistribution random_distribution(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  for (double& v : w) v = std::max(rng.uniform01(), 1e-3);
  return DiscreteDistribution::normalized(std::move(w));
}

// Distance of every hidden pre-activation from the ReLU kink.
double min_abs_preactivation(const Mlp& mlp, const Tensor& x) {
  Tensor h = x;
  double m = INFINITY;
  const auto& layers = mlp.layers();
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) {
    Tensor a = matmul_values(h, layers[i].weight);
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c) {
        a.at(r, c) += layers[i].bias[c];
        m = std::min(m, std::abs(a.at(r, c)));
        a.at(r, c) = std::max(a.at(r, c), 0.0);
      }
    h = a;
  }
  return m;
}

struct TinyGame {
  std::vector<Mlp> generators;
  std::vector<Mlp> supplementary;
  Mlp adversary;
  Tensor real;
  std::vector<Tensor> latents;
};

TinyGame make_tiny_game(SupplementaryMode mode, std::size_t K, std::uint64_t seed) {
  const MlpSpec gen{{3, 5, 2}, Activation::kRelu, Activation::kIdentity};
  TinyGame t{{}, {}, build_discriminator(gen, derive_seed(seed, "h")), Tensor(Shape{4, 2}), {}};
  for (std::size_t k = 0; k < K; ++k) {
    t.generators.push_back(build_generator(gen, derive_seed(seed, "g" + std::to_string(k))));
  }
  const std::size_t n_supp = mode == SupplementaryMode::kFull ? K : 1;
  for (std::size_t j = 0; j < n_supp; ++j) {
    t.supplementary.push_back(build_discriminator(gen, derive_seed(seed, "s" + std::to_string(j))));
  }
  Rng rng(seed);
  for (double& v : t.real.values()) v = rng.uniform(-2.0, 2.0);
  LatentSampler z(3, derive_seed(seed, "z"));
  for (std::size_t k = 0; k < K; ++k) t.latents.push_back(z.sample(4));
  return t;
}

// The composed loss of the whole game: L_h, every L_hk and every generator
// objective, summed, so a single backward pass reaches every parameter.
double composed_loss(TinyGame& t, SupplementaryMode mode, bool flip, std::vector<Tensor>* grads) {
  Tape tape;
  std::vector<BoundMlp> g, s;
  for (const auto& m : t.generators) g.push_back(m.bind(tape));
  for (const auto& m : t.supplementary) s.push_back(m.bind(tape));
  const BoundMlp h = t.adversary.bind(tape);
  std::vector<Var> fakes;
  for (std::size_t k = 0; k < g.size(); ++k) fakes.push_back(g[k].forward(tape.leaf(t.latents[k])));
  Var total = adversarial_loss(h, tape.leaf(t.real), fakes[0]);
  for (std::size_t j = 0; j < s.size(); ++j) total = total + supplementary_loss(s[j], fakes, j);
  for (std::size_t k = 0; k < g.size(); ++k) {
    total = total + generator_objective(fakes[k], h, s, k, mode, flip);
  }
  if (grads) {
    tape.backward(total);
    grads->clear();
    auto add = [&](const BoundMlp& b) {
      for (Var p : b.parameters()) grads->push_back(p.grad());
    };
    for (const auto& b : g) add(b);
    for (const auto& b : s) add(b);
    add(h);
  }
  return total.value().item();
}

std::vector<Tensor*> all_parameters(TinyGame& t) {
  std::vector<Tensor*> out;
  for (auto& m : t.generators)
    for (Tensor* p : m.parameters()) out.push_back(p);
  for (auto& m : t.supplementary)
    for (Tensor* p : m.parameters()) out.push_back(p);
  for (Tensor* p : t.adversary.parameters()) out.push_back(p);
  return out;
}

bool far_from_kinks(const TinyGame& t) {
  double m = INFINITY;
  std::vector<Tensor> fakes;
  for (std::size_t k = 0; k < t.generators.size(); ++k) {
    m = std::min(m, min_abs_preactivation(t.generators[k], t.latents[k]));
    fakes.push_back(t.generators[k].forward(t.latents[k]));
  }
  auto check_disc = [&](const Mlp& d) {
    m = std::min(m, min_abs_preactivation(d, t.real));
    for (const auto& f : fakes) m = std::min(m, min_abs_preactivation(d, f));
  };
  check_disc(t.adversary);
  for (const auto& s : t.supplementary) check_disc(s);
  return m > 1e-4;
}

double gradient_check(SupplementaryMode mode, std::size_t K, bool flip, std::uint64_t seed) {
  TinyGame t = make_tiny_game(mode, K, seed);
  while (!far_from_kinks(t)) t = make_tiny_game(mode, K, ++seed);
  std::vector<Tensor> grads;
  composed_loss(t, mode, flip, &grads);
  const auto params = all_parameters(t);
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& param = *params[p];
    for (std::size_t i = 0; i < param.size(); ++i) {
      const double orig = param[i];
      param[i] = orig + kFdStep;
      const double up = composed_loss(t, mode, flip, nullptr);
      param[i] = orig - kFdStep;
      const double down = composed_loss(t, mode, flip, nullptr);
      param[i] = orig;
      const double numeric = (up - down) / (2.0 * kFdStep);
      const double analytic = grads[p][i];
      const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-4});
      worst = std::max(worst, std::abs(numeric - analytic) / scale);
    }
  }
  return worst;
}

}  // namespace

std::vector<CheckResult> run_verification(const ValueForms& forms, unsigned seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  double def_vs_kl = 0.0, kl_vs_js = 0.0, eq3 = 0.0, supp_sum = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t support = 2 + rng.index(15);
    const std::size_t K = 2 + rng.index(3);
    std::vector<DiscreteDistribution> comps;
    for (std::size_t k = 0; k < K; ++k) comps.push_back(random_distribution(rng, support));
    const MixtureModel m(comps);
    const DiscreteDistribution real = random_distribution(rng, support);
    const double v_def = forms.at_optimum(real, m);
    const double v_kl = forms.kl_form(real, m);
    const double v_js = forms.js_form(real, m);
    def_vs_kl = std::max(def_vs_kl, std::isfinite(v_def - v_kl) ? std::abs(v_def - v_kl) : INFINITY);
    kl_vs_js = std::max(kl_vs_js, std::isfinite(v_kl - v_js) ? std::abs(v_kl - v_js) : INFINITY);

    const DiscreteDistribution mix = mixture_pdf(m);
    std::vector<double> comp_mean(support, 0.0), h_sum(support, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const auto c = complement_pdf(m, k);
      const auto h = optimal_supplementary(m, k);
      for (std::size_t x = 0; x < support; ++x) {
        comp_mean[x] += c[x] / static_cast<double>(K);
        h_sum[x] += *h[x];
      }
    }
    for (std::size_t x = 0; x < support; ++x) {
      eq3 = std::max(eq3, std::abs(comp_mean[x] - mix[x]));
      supp_sum = std::max(supp_sum, std::abs(h_sum[x] - 1.0));
    }
  }
  out.push_back({"value at optimum == KL form (100 instances)", def_vs_kl, kIdentityTol,
                 def_vs_kl <= kIdentityTol});
  out.push_back({"KL form == JS form (100 instances)", kl_vs_js, kIdentityTol, kl_vs_js <= kIdentityTol});
  out.push_back({"mean of complements == mixture", eq3, kAlgebraTol, eq3 <= kAlgebraTol});
  out.push_back({"sum_k h_k* == 1", supp_sum, kAlgebraTol, supp_sum <= kAlgebraTol});

  {
    const auto p = DiscreteDistribution({0.3, 0.7});
    const MixtureModel m({p, p});
    double half = 0.0;
    for (const auto& v : optimal_adversarial(p, mixture_pdf(m))) half = std::max(half, std::abs(*v - 0.5));
    out.push_back({"h* == 1/2 when real == mixture", half, kAlgebraTol, half <= kAlgebraTol});
    const double ln4 = std::log(4.0);
    const double dev = std::max({std::abs(forms.at_optimum(p, m) - ln4), std::abs(forms.kl_form(p, m) - ln4),
                                 std::abs(forms.js_form(p, m) - ln4)});
    out.push_back({"all-equal K=2 value == ln 4", dev, kAlgebraTol, dev <= kAlgebraTol});
  }

  struct GradCase {
    const char* name;
    SupplementaryMode mode;
    std::size_t K;
    bool flip;
  };
  for (const GradCase& c : {GradCase{"gradients: K=2 pairwise_single, flipped", SupplementaryMode::kPairwiseSingle, 2, true},
                            GradCase{"gradients: K=2 pairwise_single, analytic", SupplementaryMode::kPairwiseSingle, 2, false},
                            GradCase{"gradients: K=3 full, analytic", SupplementaryMode::kFull, 3, false}}) {
    const double worst = gradient_check(c.mode, c.K, c.flip, seed);
    out.push_back({c.name, worst, kGradientTol, worst <= kGradientTol});
  }
  return out;
}

int report_verification(const std::vector<CheckResult>& results, std::ostream& os) {
  bool all = true;
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof(line), "%s  %-48s max deviation %.3e  tolerance %.0e\n",
                  r.passed ? "PASS" : "FAIL", r.name.c_str(), r.observed, r.tolerance);
    os << line;
    all = all && r.passed;
  }
  os << (all ? "verify: all checks passed\n" : "verify: FAILED\n");
  return all ? 0 : 1;
}

}  // namespace mixgan::cli
