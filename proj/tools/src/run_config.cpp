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
#include "mixgan/cli/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "mixgan/errors.hpp"

namespace mixgan::cli {

using nlohmann::json;

const char* task_name(Task t) {
  switch (t) {
    case Task::kVerify: return "verify";
    case Task::kTrainSynthetic: return "train-synthetic";
    case Task::kTrainMnist: return "train-mnist";
    case Task::kSample: return "sample";
    case Task::kMetrics: return "metrics";
  }
  return "?";
}

Task parse_task(const std::string& name) {
  for (Task t : {Task::kVerify, Task::kTrainSynthetic, Task::kTrainMnist, Task::kSample,
                 Task::kMetrics}) {
    if (name == task_name(t)) return t;
  }
  throw ConfigError("unknown task '" + name +
                    "' (expected verify, train-synthetic, train-mnist, sample or metrics)");
}

RunConfig RunConfig::defaults_for(Task task) {
  RunConfig c;
  c.task = task;
  if (task == Task::kTrainMnist) {
    c.latent_dim = 100;
    c.generator_hidden = 240;
    c.batch_size = 64;
    c.iterations = 20000;
    c.snapshot_interval = 1000;
  }
  return c;
}

void RunConfig::validate() const {
  if (k == 0) throw ConfigError("--k must be at least 1");
  parse_supplementary_mode(supplementary_mode);
  if (latent_dim == 0 || generator_hidden == 0) throw ConfigError("widths must be positive");
  if (batch_size == 0) throw ConfigError("--batch-size must be positive");
  if (!(lr >= 0.0)) throw ConfigError("--lr must be non-negative");
  if (task == Task::kTrainSynthetic) {
    if (centers.empty()) throw ConfigError("synthetic target needs at least one center");
    for (const auto& c : centers) {
      if (c.size() != centers.front().size() || c.empty()) {
        throw ConfigError("synthetic centers must share a positive dimension");
      }
    }
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(radius > 0.0)) throw ConfigError("radius must be positive");
    if (synthetic_samples < batch_size) {
      throw ConfigError("synthetic_samples must be at least batch_size");
    }
  }
  if (task == Task::kTrainMnist) {
    if (digits.size() != 2 || digits[0] == digits[1] || digits[0] < 0 || digits[0] > 9 ||
        digits[1] < 0 || digits[1] > 9) {
      throw ConfigError("--digits needs two distinct digits in 0..9");
    }
  }
  if (task == Task::kTrainSynthetic || task == Task::kTrainMnist) game_config().validate();
}

GameConfig RunConfig::game_config() const {
  GameConfig g;
  g.num_generators = k;
  g.supplementary_mode = parse_supplementary_mode(supplementary_mode);
  g.flip_labels = flip_labels;
  g.batch_size = batch_size;
  g.total_iterations = iterations;
  g.seed = seed;
  g.optimizer.lr = lr;
  g.adversary_hidden = adversary_hidden;
  g.supplementary_hidden = supplementary_hidden;
  g.snapshot_interval = snapshot_interval;
  if (task == Task::kTrainMnist) {
    g.generator = MlpSpec{{latent_dim, generator_hidden, 784}, Activation::kRelu, Activation::kSigmoid};
  } else {
    const std::size_t d = centers.empty() ? 2 : centers.front().size();
    g.generator = MlpSpec{{latent_dim, generator_hidden, d}, Activation::kRelu, Activation::kIdentity};
  }
  return g;
}

std::vector<std::uint64_t> RunConfig::seed_list() const {
  if (!seeds.empty()) return seeds;
  return {seed};
}

json to_json(const RunConfig& c) {
  json j;
  j["task"] = task_name(c.task);
  j["k"] = c.k;
  j["supplementary_mode"] = c.supplementary_mode;
  j["flip_labels"] = c.flip_labels;
  j["latent_dim"] = c.latent_dim;
  j["generator_hidden"] = c.generator_hidden;
  j["adversary_hidden"] = c.adversary_hidden;
  j["supplementary_hidden"] = c.supplementary_hidden;
  j["batch_size"] = c.batch_size;
  j["iterations"] = c.iterations;
  j["lr"] = c.lr;
  j["seed"] = c.seed;
  j["seeds"] = c.seeds;
  j["snapshot_interval"] = c.snapshot_interval;
  j["centers"] = c.centers;
  j["sigma"] = c.sigma;
  j["synthetic_samples"] = c.synthetic_samples;
  j["radius"] = c.radius;
  j["eval_samples"] = c.eval_samples;
  j["mnist_images"] = c.mnist_images;
  j["mnist_labels"] = c.mnist_labels;
  j["digits"] = c.digits;
  j["out"] = c.out;
  j["checkpoint"] = c.checkpoint;
  j["n"] = c.n;
  j["generator"] = c.generator;
  j["samples_a"] = c.samples_a;
  j["samples_b"] = c.samples_b;
  j["bins"] = c.bins;
  return j;
}

RunConfig apply_json(RunConfig c, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = [] {
    std::set<std::string> s;
    const json defaults = to_json(RunConfig{});
    for (const auto& item : defaults.items()) s.insert(item.key());
    return s;
  }();
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ConfigError("unknown config key '" + item.key() + "'");
  }
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    if (j.contains("task")) c.task = parse_task(j.at("task").get<std::string>());
    get("k", c.k);
    get("supplementary_mode", c.supplementary_mode);
    get("flip_labels", c.flip_labels);
    get("latent_dim", c.latent_dim);
    get("generator_hidden", c.generator_hidden);
    get("adversary_hidden", c.adversary_hidden);
    get("supplementary_hidden", c.supplementary_hidden);
    get("batch_size", c.batch_size);
    get("iterations", c.iterations);
    get("lr", c.lr);
    get("seed", c.seed);
    get("seeds", c.seeds);
    get("snapshot_interval", c.snapshot_interval);
    get("centers", c.centers);
    get("sigma", c.sigma);
    get("synthetic_samples", c.synthetic_samples);
    get("radius", c.radius);
    get("eval_samples", c.eval_samples);
    get("mnist_images", c.mnist_images);
    get("mnist_labels", c.mnist_labels);
    get("digits", c.digits);
    get("out", c.out);
    get("checkpoint", c.checkpoint);
    get("n", c.n);
    get("generator", c.generator);
    get("samples_a", c.samples_a);
    get("samples_b", c.samples_b);
    get("bins", c.bins);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return apply_json(std::move(base), j);
}

void write_config_file(const std::filesystem::path& path, const RunConfig& c) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << to_json(c).dump(2) << '\n';
}

std::filesystem::path output_root(const RunConfig& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("MIXGAN_OUT"); env && *env) {
    return std::filesystem::path(env) / task_name(c.task);
  }
  return std::filesystem::path("runs") / task_name(c.task);
}

}  // namespace mixgan::cli
