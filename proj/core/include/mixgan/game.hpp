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

// The multi-generator game: K generators and K supplementary discriminators
// on one team minimizing V = L_h - sum_k L_hk, against an adversarial
// discriminator h maximizing it.
//
// Every sub-model takes one Adam step per iteration, in the fixed order
// h, then each h_k, then all g_k (from the same discriminator snapshot).
// Each sub-step draws fresh latents.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixgan/adam.hpp"
#include "mixgan/checkpoint.hpp"
#include "mixgan/models.hpp"
#include "mixgan/random.hpp"
#include "mixgan/tape.hpp"

namespace mixgan {

enum class SupplementaryMode {
  kFull,            // one h_k per generator
  kPairwiseSingle,  // K = 2 only: a single h_1, g_1 against g_2
};

const char* supplementary_mode_name(SupplementaryMode m);
SupplementaryMode parse_supplementary_mode(const std::string& name);

struct GameConfig {
  std::size_t num_generators = 2;
  SupplementaryMode supplementary_mode = SupplementaryMode::kPairwiseSingle;
  bool flip_labels = true;
  std::size_t batch_size = 64;
  std::size_t total_iterations = 1000;
  std::uint64_t seed = 0;
  AdamHyper optimizer;
  /// Generator architecture {latent, hidden..., data}. Discriminators mirror it.
  MlpSpec generator{{100, 240, 784}, Activation::kRelu, Activation::kSigmoid};
  /// Hidden width override for h (0 keeps the mirrored widths).
  std::size_t adversary_hidden = 0;
  /// Hidden width override for the supplementary discriminators (0 keeps the
  /// mirrored widths).
  std::size_t supplementary_hidden = 0;
  /// Metric snapshot period in iterations (0 disables periodic snapshots).
  std::size_t snapshot_interval = 0;

  std::size_t latent_dim() const { return generator.input_dim(); }
  std::size_t data_dim() const { return generator.output_dim(); }
  /// K for full mode, 1 for pairwise_single, 0 when K = 1.
  std::size_t num_supplementary() const;
  MlpSpec adversary_spec() const;
  MlpSpec supplementary_spec() const;
  /// Throws ConfigError on an inconsistent configuration.
  void validate() const;
};

/// Trainable model plus its per-parameter Adam moments.
struct TrainedModel {
  Mlp net;
  std::vector<AdamState> opt;

  TrainedModel(Mlp model, const AdamHyper& hyper);
  /// Applies one Adam step given gradients in Mlp::parameters() order.
  void step(const std::vector<Tensor>& grads);
};

struct GameState {
  GameConfig config;
  std::vector<TrainedModel> generators;
  std::vector<TrainedModel> supplementary;
  TrainedModel adversary;
  std::size_t iteration = 0;
  LatentSampler latent;
  Rng mixture_rng;
};

/// Seeds of the named random sub-streams a game derives from its root seed.
std::uint64_t model_init_seed(std::uint64_t root, const std::string& model_name);
std::uint64_t latent_seed(std::uint64_t root);
std::uint64_t mixture_seed(std::uint64_t root);
std::uint64_t shuffle_seed(std::uint64_t root);

/// Names used in logs, checkpoints and diagnostics: "g1".."gK", "h", "h1"...
std::string generator_name(std::size_t k);
std::string supplementary_name(std::size_t k);

GameState init_game(const GameConfig& config);

// Losses, as recorded on a tape. All expectations are batch means and every
// log is clamped at kDefaultLogFloor.

/// L_hk = mean log h_k(x_k) + sum_{j != k} mean log(1 - h_k(x_j)).
/// batches[j] holds generator j's samples; all batches must have equal size.
Var supplementary_loss(const BoundMlp& h_k, std::span<const Var> batches, std::size_t k);

/// L_h = mean log h(real) + mean log(1 - h(fake)).
Var adversarial_loss(const BoundMlp& h, Var real, Var fake);

/// Generator k's slice of V, minimized by g_k:
///   A(x) - sum_j S_j(x)
/// with A(x) = mean log(1 - h(x)) (or -mean log h(x) when flip_labels) and
/// S_j = mean log h_j(x) for the discriminator owning generator k and
/// mean log(1 - h_j(x)) for the others. samples = g_k(z).
Var generator_objective(Var samples, const BoundMlp& h, std::span<const BoundMlp> supplementary,
                        std::size_t k, SupplementaryMode mode, bool flip_labels);

/// Batch drawn from the equal-weight mixture of generators, in draw order.
struct MixtureBatch {
  Tensor samples;
  std::vector<std::size_t> provenance;  // generator index of each row
};

enum class MixtureChoice { kRandom, kRoundRobin };

/// Picks a generator per row (uniformly from rng, or i mod K), then maps one
/// fresh latent per row through it. Latents are drawn as a single [n x dim]
/// batch.
MixtureBatch sample_mixture(std::span<const Mlp> generators, LatentSampler& latent, Rng& rng,
                            std::size_t n, MixtureChoice choice = MixtureChoice::kRandom);
MixtureBatch sample_mixture(GameState& state, std::size_t n,
                            MixtureChoice choice = MixtureChoice::kRandom);

struct StepLosses {
  double adversarial = 0.0;                 // L_h before h's update
  std::vector<double> supplementary;        // L_hk before each update
  std::vector<double> generator;            // generator objectives before update
};

/// One iteration. Throws NumericalError naming the sub-model and iteration
/// when a loss is not finite; the state is left partially updated.
StepLosses train_step(GameState& state, const Tensor& real_batch);

struct LossRecord {
  std::size_t iteration = 0;  // 1-based index of the completed step
  StepLosses losses;
};

struct MetricSnapshot {
  std::size_t iteration = 0;
  std::vector<std::pair<std::string, double>> values;
};

struct RunHooks {
  /// Called at iteration 0, every snapshot_interval iterations, and after the
  /// final iteration.
  std::function<std::vector<std::pair<std::string, double>>(GameState&)> snapshot;
  /// Called after every checkpoint_interval iterations (0 disables).
  std::function<void(const GameState&)> checkpoint;
  std::size_t checkpoint_interval = 0;
};

struct RunResult {
  GameState state;
  std::vector<LossRecord> losses;
  std::vector<MetricSnapshot> snapshots;
};

/// Trains for config.total_iterations over epoch-shuffled batches of the
/// dataset rows. Throws ConfigError if the dataset has fewer rows than
/// batch_size.
RunResult run(const GameConfig& config, const Tensor& dataset, const RunHooks& hooks = {});

/// Loss timeline as a table: iteration, adversarial_loss,
/// supplementary_loss_1.., generator_objective_1..
std::vector<std::string> loss_columns(const GameConfig& config);

std::vector<NamedTensor> game_checkpoint(const GameState& state);
/// Generators stored in a checkpoint, in index order.
std::vector<Mlp> load_generators(const std::vector<NamedTensor>& tensors);

}  // namespace mixgan
