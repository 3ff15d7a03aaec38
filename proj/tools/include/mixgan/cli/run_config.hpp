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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "mixgan/game.hpp"

namespace mixgan::cli {

enum class Task { kVerify, kTrainSynthetic, kTrainMnist, kSample, kMetrics };

const char* task_name(Task t);
Task parse_task(const std::string& name);

/// Everything a command needs. Defaults depend on the task: train-mnist uses
/// the MNIST setup (K = 2, latent 100, hidden 240, lr 1e-3, flipped labels,
/// single supplementary discriminator); train-synthetic uses the desk-scale
/// two-Gaussian setup.
struct RunConfig {
  Task task = Task::kTrainSynthetic;

  std::size_t k = 2;
  std::string supplementary_mode = "pairwise_single";
  bool flip_labels = true;
  std::size_t latent_dim = 8;
  std::size_t generator_hidden = 32;
  std::size_t adversary_hidden = 0;
  std::size_t supplementary_hidden = 0;
  std::size_t batch_size = 64;
  std::size_t iterations = 5000;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;
  std::size_t snapshot_interval = 500;

  // train-synthetic target
  std::vector<std::vector<double>> centers{{-2.0, 0.0}, {2.0, 0.0}};
  double sigma = 0.1;
  std::size_t synthetic_samples = 10000;
  double radius = 0.5;
  std::size_t eval_samples = 2000;

  // train-mnist data
  std::string mnist_images;
  std::string mnist_labels;
  std::vector<int> digits{0, 1};

  std::string out;

  // sample / metrics
  std::string checkpoint;
  std::size_t n = 1000;
  std::string generator = "mixture";
  std::string samples_a;
  std::string samples_b;
  std::size_t bins = 0;

  static RunConfig defaults_for(Task task);

  /// Throws ConfigError on invalid values.
  void validate() const;
  GameConfig game_config() const;
  /// Seeds to train, honoring --seeds over --seed.
  std::vector<std::uint64_t> seed_list() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Overrides fields of base with keys present in j. Unknown keys are errors.
RunConfig apply_json(RunConfig base, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base);
void write_config_file(const std::filesystem::path& path, const RunConfig& c);

/// --out if given, else $MIXGAN_OUT/<task>, else ./runs/<task>.
std::filesystem::path output_root(const RunConfig& c);

}  // namespace mixgan::cli
