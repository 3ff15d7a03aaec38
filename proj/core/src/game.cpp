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
#include "mixgan/game.hpp"

#include <cmath>

#include "mixgan/data.hpp"
#include "mixgan/errors.hpp"

namespace mixgan {

namespace {

Var mean_log(Var x) { return mean(log_clamped(x)); }
Var mean_log_one_minus(Var x) { return mean(log_clamped(one_minus(x))); }

std::vector<Tensor> collect_grads(const BoundMlp& b) {
  std::vector<Tensor> grads;
  for (Var p : b.parameters()) grads.push_back(p.grad());
  return grads;
}

void require_finite(double v, const std::string& sub_model, std::size_t iteration) {
  if (!std::isfinite(v)) {
    throw NumericalError(sub_model, static_cast<long>(iteration),
                         "non-finite loss for " + sub_model + " at iteration " +
                             std::to_string(iteration));
  }
}

MlpSpec with_hidden_width(MlpSpec spec, std::size_t width) {
  if (width == 0) return spec;
  for (std::size_t i = 1; i + 1 < spec.layer_sizes.size(); ++i) spec.layer_sizes[i] = width;
  return spec;
}

// One batch per generator from fresh latents, as constants.
std::vector<Tensor> per_generator_batches(GameState& s) {
  std::vector<Tensor> out;
  for (const auto& g : s.generators) out.push_back(g.net.forward(s.latent.sample(s.config.batch_size)));
  return out;
}

}  // namespace

const char* supplementary_mode_name(SupplementaryMode m) {
  switch (m) {
    case SupplementaryMode::kFull: return "full";
    case SupplementaryMode::kPairwiseSingle: return "pairwise_single";
  }
  return "?";
}

SupplementaryMode parse_supplementary_mode(const std::string& name) {
  if (name == "full") return SupplementaryMode::kFull;
  if (name == "pairwise_single") return SupplementaryMode::kPairwiseSingle;
  throw ConfigError("unknown supplementary mode '" + name + "' (expected full or pairwise_single)");
}

std::size_t GameConfig::num_supplementary() const {
  if (num_generators < 2) return 0;
  return supplementary_mode == SupplementaryMode::kFull ? num_generators : 1;
}

MlpSpec GameConfig::adversary_spec() const {
  return with_hidden_width(discriminator_spec(generator), adversary_hidden);
}

MlpSpec GameConfig::supplementary_spec() const {
  return with_hidden_width(discriminator_spec(generator), supplementary_hidden);
}

void GameConfig::validate() const {
  if (num_generators == 0) throw ConfigError("K must be at least 1");
  if (supplementary_mode == SupplementaryMode::kPairwiseSingle && num_generators != 2) {
    throw ConfigError("pairwise_single supplementary mode requires K == 2, got K = " +
                      std::to_string(num_generators));
  }
  if (batch_size < num_generators) {
    throw ConfigError("batch_size " + std::to_string(batch_size) + " is smaller than K = " +
                      std::to_string(num_generators));
  }
  if (!(optimizer.lr >= 0.0) || !(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0) ||
      !(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0) || !(optimizer.epsilon > 0.0)) {
    throw ConfigError("invalid Adam hyperparameters");
  }
  try {
    generator.validate();
  } catch (const SpecError& e) {
    throw ConfigError(std::string("generator architecture: ") + e.what());
  }
}

TrainedModel::TrainedModel(Mlp model, const AdamHyper& hyper) : net(std::move(model)) {
  for (const Tensor* p : net.parameters()) opt.emplace_back(p->shape(), hyper);
}

void TrainedModel::step(const std::vector<Tensor>& grads) {
  auto params = net.parameters();
  if (grads.size() != params.size()) throw ContractError("gradient count does not match parameters");
  for (std::size_t i = 0; i < params.size(); ++i) adam_step(*params[i], grads[i], opt[i]);
}

std::uint64_t model_init_seed(std::uint64_t root, const std::string& model_name) {
  return derive_seed(root, "init/" + model_name);
}
std::uint64_t latent_seed(std::uint64_t root) { return derive_seed(root, "latent"); }
std::uint64_t mixture_seed(std::uint64_t root) { return derive_seed(root, "mixture"); }
std::uint64_t shuffle_seed(std::uint64_t root) { return derive_seed(root, "shuffle"); }

std::string generator_name(std::size_t k) { return "g" + std::to_string(k + 1); }
std::string supplementary_name(std::size_t k) { return "h" + std::to_string(k + 1); }

GameState init_game(const GameConfig& config) {
  config.validate();
  const AdamHyper& hyper = config.optimizer;
  GameState s{config,
              {},
              {},
              TrainedModel(build_mlp(config.adversary_spec(), model_init_seed(config.seed, "h")), hyper),
              0,
              LatentSampler(config.latent_dim(), latent_seed(config.seed)),
              Rng(mixture_seed(config.seed))};
  for (std::size_t k = 0; k < config.num_generators; ++k) {
    s.generators.emplace_back(
        build_generator(config.generator, model_init_seed(config.seed, generator_name(k))), hyper);
  }
  for (std::size_t k = 0; k < config.num_supplementary(); ++k) {
    s.supplementary.emplace_back(
        build_mlp(config.supplementary_spec(), model_init_seed(config.seed, supplementary_name(k))),
        hyper);
  }
  return s;
}

Var supplementary_loss(const BoundMlp& h_k, std::span<const Var> batches, std::size_t k) {
  if (k >= batches.size()) throw ContractError("supplementary_loss: generator index out of range");
  const std::size_t n = batches[0].value().rows();
  for (Var b : batches) {
    if (b.value().rows() != n) {
      throw ContractError("supplementary_loss: generator batches differ in size");
    }
  }
  Var loss = mean_log(h_k.forward(batches[k]));
  for (std::size_t j = 0; j < batches.size(); ++j) {
    if (j == k) continue;
    loss = loss + mean_log_one_minus(h_k.forward(batches[j]));
  }
  return loss;
}

Var adversarial_loss(const BoundMlp& h, Var real, Var fake) {
  if (real.value().rows() != fake.value().rows()) {
    throw ContractError("adversarial_loss: real and fake batches differ in size");
  }
  return mean_log(h.forward(real)) + mean_log_one_minus(h.forward(fake));
}

Var generator_objective(Var samples, const BoundMlp& h, std::span<const BoundMlp> supplementary,
                        std::size_t k, SupplementaryMode mode, bool flip_labels) {
  if (mode == SupplementaryMode::kPairwiseSingle && supplementary.size() > 1) {
    throw ContractError("pairwise_single mode takes a single supplementary discriminator");
  }
  const Var fake_score = h.forward(samples);
  Var objective = flip_labels ? -mean_log(fake_score) : mean_log_one_minus(fake_score);
  for (std::size_t j = 0; j < supplementary.size(); ++j) {
    const Var score = supplementary[j].forward(samples);
    objective = objective - (j == k ? mean_log(score) : mean_log_one_minus(score));
  }
  return objective;
}

MixtureBatch sample_mixture(std::span<const Mlp> generators, LatentSampler& latent, Rng& rng,
                            std::size_t n, MixtureChoice choice) {
  if (generators.empty()) throw ContractError("sample_mixture needs at least one generator");
  if (n == 0) throw ContractError("sample_mixture needs n >= 1");
  const std::size_t K = generators.size();
  MixtureBatch out;
  out.provenance.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.provenance[i] = choice == MixtureChoice::kRoundRobin ? i % K : (K == 1 ? 0 : rng.index(K));
  }
  const Tensor z = latent.sample(n);
  const std::size_t dim = z.cols();
  const std::size_t out_dim = generators[0].spec().output_dim();
  out.samples = Tensor(Shape{n, out_dim});
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i)
      if (out.provenance[i] == k) rows.push_back(i);
    if (rows.empty()) continue;
    Tensor zk(Shape{rows.size(), dim});
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < dim; ++c) zk.at(r, c) = z.at(rows[r], c);
    const Tensor xk = generators[k].forward(zk);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < out_dim; ++c) out.samples.at(rows[r], c) = xk.at(r, c);
  }
  return out;
}

MixtureBatch sample_mixture(GameState& state, std::size_t n, MixtureChoice choice) {
  std::vector<Mlp> nets;
  nets.reserve(state.generators.size());
  for (const auto& g : state.generators) nets.push_back(g.net);
  return sample_mixture(nets, state.latent, state.mixture_rng, n, choice);
}

StepLosses train_step(GameState& s, const Tensor& real_batch) {
  const GameConfig& cfg = s.config;
  if (real_batch.rank() != 2 || real_batch.rows() != cfg.batch_size ||
      real_batch.cols() != cfg.data_dim()) {
    throw ContractError("train_step: real batch has shape " + shape_to_string(real_batch.shape()) +
                        ", expected [" + std::to_string(cfg.batch_size) + "x" +
                        std::to_string(cfg.data_dim()) + "]");
  }
  const std::size_t iteration = s.iteration + 1;
  StepLosses losses;

  // (1) adversarial discriminator: ascent on L_h.
  {
    const MixtureBatch fake = sample_mixture(s, cfg.batch_size);
    Tape tape;
    const BoundMlp h = s.adversary.net.bind(tape);
    const Var l_h = adversarial_loss(h, tape.leaf(real_batch), tape.leaf(fake.samples));
    losses.adversarial = l_h.value().item();
    require_finite(losses.adversarial, "h", iteration);
    tape.backward(-l_h);
    s.adversary.step(collect_grads(h));
  }

  // (2) supplementary discriminators: ascent on their own L_hk.
  const std::size_t K = cfg.num_generators;
  for (std::size_t j = 0; j < s.supplementary.size(); ++j) {
    const std::vector<Tensor> batches = per_generator_batches(s);
    Tape tape;
    std::vector<Var> leaves;
    for (const auto& b : batches) leaves.push_back(tape.leaf(b));
    const BoundMlp hj = s.supplementary[j].net.bind(tape);
    const Var l = supplementary_loss(hj, leaves, j);
    losses.supplementary.push_back(l.value().item());
    require_finite(losses.supplementary.back(), supplementary_name(j), iteration);
    tape.backward(-l);
    s.supplementary[j].step(collect_grads(hj));
  }

  // (3) generators: descent on their slice of V against the current
  // discriminators, all gradients taken before any generator moves.
  std::vector<std::vector<Tensor>> gen_grads;
  for (std::size_t k = 0; k < K; ++k) {
    const Tensor z = s.latent.sample(cfg.batch_size);
    Tape tape;
    const BoundMlp g = s.generators[k].net.bind(tape);
    const BoundMlp h = s.adversary.net.bind(tape);
    std::vector<BoundMlp> supp;
    for (const auto& m : s.supplementary) supp.push_back(m.net.bind(tape));
    const Var obj = generator_objective(g.forward(tape.leaf(z)), h, supp, k, cfg.supplementary_mode,
                                        cfg.flip_labels);
    losses.generator.push_back(obj.value().item());
    require_finite(losses.generator.back(), generator_name(k), iteration);
    tape.backward(obj);
    gen_grads.push_back(collect_grads(g));
  }
  for (std::size_t k = 0; k < K; ++k) s.generators[k].step(gen_grads[k]);

  s.iteration = iteration;
  return losses;
}

RunResult run(const GameConfig& config, const Tensor& dataset, const RunHooks& hooks) {
  config.validate();
  if (dataset.rank() != 2 || dataset.cols() != config.data_dim()) {
    throw ConfigError("dataset rows have width " + std::to_string(dataset.cols()) +
                      ", generator emits " + std::to_string(config.data_dim()));
  }
  if (dataset.rows() < config.batch_size) {
    throw ConfigError("dataset has " + std::to_string(dataset.rows()) +
                      " rows, fewer than batch_size " + std::to_string(config.batch_size));
  }
  RunResult result{init_game(config), {}, {}};
  GameState& s = result.state;
  auto snapshot = [&] {
    if (hooks.snapshot) result.snapshots.push_back({s.iteration, hooks.snapshot(s)});
  };

  snapshot();
  BatchIterator batches(dataset, config.batch_size, shuffle_seed(config.seed));
  for (std::size_t it = 0; it < config.total_iterations; ++it) {
    const Tensor real = batches.next();
    result.losses.push_back({s.iteration + 1, train_step(s, real)});
    const bool last = it + 1 == config.total_iterations;
    if ((config.snapshot_interval && s.iteration % config.snapshot_interval == 0) || last) snapshot();
    if (hooks.checkpoint && hooks.checkpoint_interval &&
        s.iteration % hooks.checkpoint_interval == 0) {
      hooks.checkpoint(s);
    }
  }
  return result;
}

std::vector<std::string> loss_columns(const GameConfig& config) {
  std::vector<std::string> cols{"iteration", "adversarial_loss"};
  for (std::size_t j = 0; j < config.num_supplementary(); ++j)
    cols.push_back("supplementary_loss_" + std::to_string(j + 1));
  for (std::size_t k = 0; k < config.num_generators; ++k)
    cols.push_back("generator_objective_" + std::to_string(k + 1));
  return cols;
}

std::vector<NamedTensor> game_checkpoint(const GameState& state) {
  std::vector<NamedTensor> out;
  out.push_back({"meta.iteration", Tensor::scalar(static_cast<double>(state.iteration))});
  for (std::size_t k = 0; k < state.generators.size(); ++k)
    append_mlp(generator_name(k), state.generators[k].net, out);
  append_mlp("h", state.adversary.net, out);
  for (std::size_t j = 0; j < state.supplementary.size(); ++j)
    append_mlp(supplementary_name(j), state.supplementary[j].net, out);
  return out;
}

std::vector<Mlp> load_generators(const std::vector<NamedTensor>& tensors) {
  std::vector<Mlp> out;
  for (std::size_t k = 0; has_mlp(generator_name(k), tensors); ++k) {
    out.push_back(extract_mlp(generator_name(k), tensors));
  }
  if (out.empty()) throw FormatError("checkpoint contains no generators");
  return out;
}

}  // namespace mixgan
