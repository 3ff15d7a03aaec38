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
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include "mixgan/cli/commands.hpp"
#include "mixgan/cli/run_config.hpp"
#include "mixgan/errors.hpp"

namespace {

template <typename T>
std::vector<T> split_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) {
      throw mixgan::ConfigError(std::string("bad ") + what + " list '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mixgan::cli;

  CLI::App app{"mixgan: multi-generator GAN training, verification and evaluation"};
  app.set_help_flag("-h,--help", "Print this help message and exit");

  std::string task, config_path, supp_mode, seeds, digits, mnist_images, mnist_labels, out,
      generator, checkpoint, samples_a, samples_b;
  std::size_t k = 0, iterations = 0, batch_size = 0, snapshot_interval = 0, latent_dim = 0,
              hidden = 0, adversary_hidden = 0, supplementary_hidden = 0, n = 0, eval_samples = 0,
              bins = 0;
  bool flip_labels = true;
  double lr = 0.0, radius = 0.0;
  std::uint64_t seed = 0;

  auto* o_task = app.add_option("--task", task, "verify | train-synthetic | train-mnist | sample | metrics");
  app.add_option("--config", config_path, "JSON config file (flags override its values)");
  auto* o_k = app.add_option("--k", k, "Number of generators K");
  auto* o_mode = app.add_option("--supplementary-mode", supp_mode, "full | pairwise_single");
  auto* o_flip = app.add_option("--flip-labels", flip_labels, "Use the flipped-target generator loss (true/false)");
  auto* o_iter = app.add_option("--iterations", iterations, "Training iterations");
  auto* o_batch = app.add_option("--batch-size", batch_size, "Minibatch size");
  auto* o_lr = app.add_option("--lr", lr, "Adam learning rate");
  auto* o_seed = app.add_option("--seed", seed, "Root random seed");
  auto* o_seeds = app.add_option("--seeds", seeds, "Comma-separated seeds, trained in parallel");
  auto* o_digits = app.add_option("--digits", digits, "Digit pair a,b for train-mnist");
  auto* o_img = app.add_option("--mnist-images", mnist_images, "MNIST IDX image file");
  auto* o_lbl = app.add_option("--mnist-labels", mnist_labels, "MNIST IDX label file");
  auto* o_out = app.add_option("--out", out, "Output directory (default $MIXGAN_OUT/<task>)");
  auto* o_snap = app.add_option("--snapshot-interval", snapshot_interval, "Metric snapshot period");
  auto* o_gen = app.add_option("--generator", generator, "Generator index 1..K or 'mixture' (sample)");
  auto* o_latent = app.add_option("--latent-dim", latent_dim, "Latent dimension");
  auto* o_hidden = app.add_option("--hidden", hidden, "Generator hidden width");
  auto* o_adv_hidden = app.add_option("--adversary-hidden", adversary_hidden, "Hidden width of h (0 mirrors the generator)");
  auto* o_supp_hidden = app.add_option("--supplementary-hidden", supplementary_hidden, "Hidden width of the supplementary discriminators (0 mirrors the generator)");
  auto* o_ckpt = app.add_option("--checkpoint", checkpoint, "Checkpoint file (sample, metrics)");
  auto* o_n = app.add_option("--n", n, "Number of samples (sample)");
  auto* o_sa = app.add_option("--samples-a", samples_a, "First sample CSV (metrics)");
  auto* o_sb = app.add_option("--samples-b", samples_b, "Second sample CSV (metrics)");
  auto* o_radius = app.add_option("--radius", radius, "Mode assignment radius");
  auto* o_eval = app.add_option("--eval-samples", eval_samples, "Samples per generator for evaluation");
  auto* o_bins = app.add_option("--bins", bins, "Histogram bins per axis (0 picks a default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    mixgan::cli::RunConfig file_cfg;
    nlohmann::json file_json;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw mixgan::ConfigError("cannot open config file '" + config_path + "'");
      try {
        f >> file_json;
      } catch (const nlohmann::json::exception& e) {
        throw mixgan::ConfigError("config file is not valid JSON: " + std::string(e.what()));
      }
    }
    std::string task_text = task;
    if (!o_task->count()) {
      if (file_json.contains("task")) {
        task_text = file_json.at("task").get<std::string>();
      } else {
        throw mixgan::ConfigError("--task is required");
      }
    }
    RunConfig c = RunConfig::defaults_for(parse_task(task_text));
    if (!file_json.is_null()) c = apply_json(c, file_json);
    c.task = parse_task(task_text);

    if (o_k->count()) c.k = k;
    if (o_mode->count()) c.supplementary_mode = supp_mode;
    if (o_flip->count()) c.flip_labels = flip_labels;
    if (o_iter->count()) c.iterations = iterations;
    if (o_batch->count()) c.batch_size = batch_size;
    if (o_lr->count()) c.lr = lr;
    if (o_seed->count()) c.seed = seed;
    if (o_seeds->count()) c.seeds = split_list<std::uint64_t>(seeds, "seed");
    if (o_digits->count()) c.digits = split_list<int>(digits, "digit");
    if (o_img->count()) c.mnist_images = mnist_images;
    if (o_lbl->count()) c.mnist_labels = mnist_labels;
    if (o_out->count()) c.out = out;
    if (o_snap->count()) c.snapshot_interval = snapshot_interval;
    if (o_gen->count()) c.generator = generator;
    if (o_latent->count()) c.latent_dim = latent_dim;
    if (o_hidden->count()) c.generator_hidden = hidden;
    if (o_adv_hidden->count()) c.adversary_hidden = adversary_hidden;
    if (o_supp_hidden->count()) c.supplementary_hidden = supplementary_hidden;
    if (o_ckpt->count()) c.checkpoint = checkpoint;
    if (o_n->count()) c.n = n;
    if (o_sa->count()) c.samples_a = samples_a;
    if (o_sb->count()) c.samples_b = samples_b;
    if (o_radius->count()) c.radius = radius;
    if (o_eval->count()) c.eval_samples = eval_samples;
    if (o_bins->count()) c.bins = bins;

    return run_task(c, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
