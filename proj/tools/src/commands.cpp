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
#include "mixgan/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "mixgan/checkpoint.hpp"
#include "mixgan/data.hpp"
#include "mixgan/errors.hpp"
#include "mixgan/game.hpp"

namespace mixgan::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kCheckpointFile = "checkpoint.mggan";

Binning synthetic_binning(const std::vector<std::vector<double>>& centers, std::size_t bins) {
  Binning b;
  const std::size_t d = centers.front().size();
  if (d > 2) return b;
  const std::size_t per_axis = bins ? bins : (d == 1 ? 64 : 32);
  for (std::size_t j = 0; j < d; ++j) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& c : centers) {
      lo = std::min(lo, c[j]);
      hi = std::max(hi, c[j]);
    }
    b.axes.push_back({lo - 1.0, hi + 1.0, per_axis});
  }
  return b;
}

double maybe_histogram_js(const Tensor& a, const Tensor& b, const Binning& binning) {
  if (binning.axes.empty()) return NAN;
  return histogram_js(a, b, binning);
}

CsvTable snapshots_table(const std::vector<MetricSnapshot>& snaps) {
  CsvTable t;
  t.header.push_back("iteration");
  if (!snaps.empty()) {
    for (const auto& [name, _] : snaps.front().values) t.header.push_back(name);
  }
  for (const auto& s : snaps) {
    std::vector<double> row{static_cast<double>(s.iteration)};
    for (const auto& [_, v] : s.values) row.push_back(v);
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable losses_table(const GameConfig& cfg, const std::vector<LossRecord>& losses) {
  CsvTable t;
  t.header = loss_columns(cfg);
  for (const auto& r : losses) {
    std::vector<double> row{static_cast<double>(r.iteration), r.losses.adversarial};
    row.insert(row.end(), r.losses.supplementary.begin(), r.losses.supplementary.end());
    row.insert(row.end(), r.losses.generator.begin(), r.losses.generator.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<Tensor> eval_samples(const std::vector<Mlp>& generators, std::size_t n,
                                 std::uint64_t seed) {
  LatentSampler z(generators.front().spec().input_dim(), derive_seed(seed, "eval"));
  std::vector<Tensor> out;
  for (const auto& g : generators) out.push_back(g.forward(z.sample(n)));
  return out;
}

std::vector<Mlp> nets_of(const GameState& s) {
  std::vector<Mlp> out;
  for (const auto& g : s.generators) out.push_back(g.net);
  return out;
}

struct SyntheticScore {
  std::vector<ModeHistogram> hists;
  std::optional<SeparationReport> report;
  double hist_js = NAN;
};

SyntheticScore score_synthetic(const std::vector<Tensor>& samples, const RunConfig& c) {
  SyntheticScore s;
  for (const auto& t : samples) s.hists.push_back(assign_modes(t, c.centers, c.radius));
  if (samples.size() >= 2) {
    if (s.hists[0].assigned() > 0 && s.hists[1].assigned() > 0) {
      s.report = separation_report(s.hists[0], s.hists[1]);
    }
    s.hist_js = maybe_histogram_js(samples[0], samples[1], synthetic_binning(c.centers, c.bins));
  }
  return s;
}

std::vector<std::pair<std::string, double>> synthetic_snapshot(const GameState& state,
                                                               const RunConfig& c) {
  const SyntheticScore s = score_synthetic(eval_samples(nets_of(state), c.eval_samples, c.seed), c);
  std::vector<std::pair<std::string, double>> v;
  for (std::size_t k = 0; k < s.hists.size(); ++k) {
    v.emplace_back("unassigned_" + std::to_string(k + 1), static_cast<double>(s.hists[k].unassigned));
  }
  if (s.hists.size() >= 2) {
    const auto& r = s.report;
    v.emplace_back("purity_1", r ? r->purity_a : NAN);
    v.emplace_back("purity_2", r ? r->purity_b : NAN);
    v.emplace_back("dominant_mode_1", r ? static_cast<double>(r->dominant_mode_a) : NAN);
    v.emplace_back("dominant_mode_2", r ? static_cast<double>(r->dominant_mode_b) : NAN);
    v.emplace_back("overlap", r ? r->overlap : NAN);
    v.emplace_back("histogram_js", s.hist_js);
    v.emplace_back("success", r && r->success ? 1.0 : 0.0);
  }
  return v;
}

struct MnistContext {
  ImageDataset data;
  Tensor digit_means;  // two rows, one per selected digit
};

MnistContext load_mnist_context(const RunConfig& c) {
  if (c.mnist_images.empty() || c.mnist_labels.empty()) {
    throw ConfigError("train-mnist needs --mnist-images and --mnist-labels");
  }
  MnistContext ctx{filter_digits(load_mnist(c.mnist_images, c.mnist_labels), c.digits[0], c.digits[1]),
                   Tensor(Shape{2, 784})};
  if (ctx.data.images.cols() != 784) throw DataError("MNIST images must be 28x28");
  const Tensor all_means = class_mean_images(ctx.data);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t j = 0; j < 784; ++j)
      ctx.digit_means.at(r, j) = all_means.at(static_cast<std::size_t>(c.digits[r]), j);
  return ctx;
}

std::vector<std::pair<std::string, double>> mnist_snapshot(const GameState& state,
                                                           const RunConfig& c,
                                                           const MnistContext& ctx) {
  std::vector<std::pair<std::string, double>> v;
  const auto samples = eval_samples(nets_of(state), std::min<std::size_t>(c.eval_samples, 500), c.seed);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto aff = mean_image_affinity(samples[k], ctx.digit_means);
    for (std::size_t d = 0; d < 2; ++d) {
      v.emplace_back("affinity_g" + std::to_string(k + 1) + "_digit" + std::to_string(c.digits[d]),
                     aff[d]);
    }
    v.emplace_back("argmax_digit_g" + std::to_string(k + 1),
                   static_cast<double>(c.digits[aff[1] > aff[0] ? 1 : 0]));
  }
  return v;
}

int train_one(RunConfig c, const fs::path& dir, std::ostream& os) {
  fs::create_directories(dir);
  c.seeds.clear();
  c.out = dir.string();
  write_config_file(dir / "config.json", c);

  const GameConfig game = c.game_config();
  std::optional<MnistContext> mnist;
  Tensor data;
  if (c.task == Task::kTrainMnist) {
    mnist = load_mnist_context(c);
    data = mnist->data.images;
  } else {
    GaussianMixtureSpec spec;
    spec.centers = c.centers;
    spec.sigma = c.sigma;
    data = sample_gaussian_mixture(spec, c.synthetic_samples, derive_seed(c.seed, "data")).samples;
  }

  RunHooks hooks;
  hooks.snapshot = [&](GameState& s) {
    return mnist ? mnist_snapshot(s, c, *mnist) : synthetic_snapshot(s, c);
  };
  hooks.checkpoint = [&](const GameState& s) { write_checkpoint(dir / kCheckpointFile, game_checkpoint(s)); };
  hooks.checkpoint_interval = c.snapshot_interval;

  RunResult result = [&] {
    try {
      return run(game, data, hooks);
    } catch (const NumericalError& e) {
      os << "seed " << c.seed << ": numerical divergence in " << e.sub_model() << " at iteration "
         << e.iteration() << '\n';
      throw;
    }
  }();

  write_checkpoint(dir / kCheckpointFile, game_checkpoint(result.state));
  export_csv(losses_table(game, result.losses), dir / "losses.csv");
  export_csv(snapshots_table(result.snapshots), dir / "metrics.csv");

  const auto nets = nets_of(result.state);
  if (mnist) {
    export_grid(mnist->data.images, 1, std::min<std::size_t>(10, mnist->data.size()), dir / "real.pgm");
    const auto samples = eval_samples(nets, 10, c.seed);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      export_grid(samples[k], 1, 10, dir / ("generator_" + std::to_string(k + 1) + ".pgm"));
    }
    os << "seed " << c.seed << ": trained " << result.state.iteration << " iterations -> "
       << dir.string() << '\n';
    return kExitOk;
  }

  const auto samples = eval_samples(nets, c.eval_samples, c.seed);
  CsvTable sample_table;
  sample_table.header.push_back("generator");
  for (std::size_t j = 0; j < game.data_dim(); ++j) sample_table.header.push_back("x" + std::to_string(j));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    for (std::size_t r = 0; r < samples[k].rows(); ++r) {
      std::vector<double> row{static_cast<double>(k + 1)};
      for (std::size_t j = 0; j < samples[k].cols(); ++j) row.push_back(samples[k].at(r, j));
      sample_table.rows.push_back(std::move(row));
    }
  }
  export_csv(sample_table, dir / "samples.csv");

  const SyntheticScore score = score_synthetic(samples, c);
  if (score.report) {
    export_csv(separation_table(*score.report, score.hists[0], score.hists[1], score.hist_js),
               dir / "report.csv");
    os << "seed " << c.seed << ": purity " << score.report->purity_a << "/" << score.report->purity_b
       << " dominant modes " << score.report->dominant_mode_a << "/" << score.report->dominant_mode_b
       << " overlap " << score.report->overlap << (score.report->success ? " SEPARATED" : " not separated")
       << '\n';
  } else {
    os << "seed " << c.seed << ": no separation report (a generator has no samples near any mode)\n";
  }
  return kExitOk;
}

Tensor sample_columns(const CsvTable& t, const fs::path& path) {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (!t.header[i].empty() && t.header[i][0] == 'x') cols.push_back(i);
  }
  if (cols.empty()) throw FormatError("'" + path.string() + "' has no x<j> sample columns");
  if (t.rows.empty()) throw DataError("'" + path.string() + "' has no samples");
  Tensor out(Shape{t.rows.size(), cols.size()});
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    for (std::size_t j = 0; j < cols.size(); ++j) out.at(r, j) = t.rows[r][cols[j]];
  return out;
}

}  // namespace

CsvTable separation_table(const SeparationReport& r, const ModeHistogram& a, const ModeHistogram& b,
                          double hist_js) {
  CsvTable t;
  t.header = {"dominant_mode_a", "dominant_mode_b", "purity_a", "purity_b", "overlap",
              "mode_js", "histogram_js", "unassigned_a", "unassigned_b", "success"};
  t.rows.push_back({static_cast<double>(r.dominant_mode_a), static_cast<double>(r.dominant_mode_b),
                    r.purity_a, r.purity_b, r.overlap, r.mode_js, hist_js,
                    static_cast<double>(a.unassigned), static_cast<double>(b.unassigned),
                    r.success ? 1.0 : 0.0});
  return t;
}

int cmd_verify(std::ostream& os, const ValueForms& forms) {
  return report_verification(run_verification(forms), os);
}

int cmd_train(const RunConfig& config, std::ostream& os) {
  config.validate();
  const fs::path root = output_root(config);
  const auto seeds = config.seed_list();
  if (config.seeds.empty()) {
    RunConfig c = config;
    return train_one(c, root, os);
  }
  std::vector<std::future<std::pair<int, std::string>>> jobs;
  for (auto seed : seeds) {
    RunConfig c = config;
    c.seed = seed;
    jobs.push_back(std::async(std::launch::async, [c, dir = root / ("seed_" + std::to_string(seed))] {
      std::ostringstream log;
      try {
        return std::make_pair(train_one(c, dir, log), log.str());
      } catch (const NumericalError&) {
        return std::make_pair(static_cast<int>(kExitNumerical), log.str());
      }
    }));
  }
  int code = kExitOk;
  for (auto& j : jobs) {
    auto [rc, log] = j.get();
    os << log;
    code = std::max(code, rc);
  }
  return code;
}

int cmd_sample(const RunConfig& config, std::ostream& os) {
  if (config.checkpoint.empty()) throw ConfigError("sample needs --checkpoint");
  const auto generators = load_generators(read_checkpoint(config.checkpoint));
  const std::size_t K = generators.size();
  const bool mixture = config.generator == "mixture";
  std::size_t index = 0;
  if (!mixture) {
    try {
      std::size_t used = 0;
      index = std::stoul(config.generator, &used);
      if (used != config.generator.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("--generator must be 1.." + std::to_string(K) + " or 'mixture'");
    }
    if (index < 1 || index > K) {
      throw ConfigError("--generator " + config.generator + " out of range 1.." + std::to_string(K));
    }
  }

  CsvTable table;
  if (mixture) table.header.push_back("generator");
  const std::size_t d = generators.front().spec().output_dim();
  for (std::size_t j = 0; j < d; ++j) table.header.push_back("x" + std::to_string(j));

  if (config.n > 0) {
    LatentSampler z(generators.front().spec().input_dim(), latent_seed(config.seed));
    Rng choice(mixture_seed(config.seed));
    if (mixture) {
      const MixtureBatch batch = sample_mixture(generators, z, choice, config.n);
      for (std::size_t r = 0; r < config.n; ++r) {
        std::vector<double> row{static_cast<double>(batch.provenance[r] + 1)};
        for (std::size_t j = 0; j < d; ++j) row.push_back(batch.samples.at(r, j));
        table.rows.push_back(std::move(row));
      }
    } else {
      const Tensor x = generators[index - 1].forward(z.sample(config.n));
      for (std::size_t r = 0; r < config.n; ++r) {
        std::vector<double> row;
        for (std::size_t j = 0; j < d; ++j) row.push_back(x.at(r, j));
        table.rows.push_back(std::move(row));
      }
    }
  }
  const fs::path dir = output_root(config);
  fs::create_directories(dir);
  export_csv(table, dir / "samples.csv");
  os << "wrote " << config.n << " samples to " << (dir / "samples.csv").string() << '\n';
  return kExitOk;
}

int cmd_metrics(const RunConfig& config, std::ostream& os) {
  Tensor a, b;
  if (!config.samples_a.empty() || !config.samples_b.empty()) {
    if (config.samples_a.empty() || config.samples_b.empty()) {
      throw ConfigError("metrics needs both --samples-a and --samples-b");
    }
    a = sample_columns(read_csv(config.samples_a), config.samples_a);
    b = sample_columns(read_csv(config.samples_b), config.samples_b);
  } else if (!config.checkpoint.empty()) {
    const auto generators = load_generators(read_checkpoint(config.checkpoint));
    if (generators.size() < 2) throw ConfigError("metrics needs a checkpoint with at least two generators");
    const auto samples = eval_samples(generators, config.eval_samples, config.seed);
    a = samples[0];
    b = samples[1];
  } else {
    throw ConfigError("metrics needs --samples-a/--samples-b or --checkpoint");
  }
  if (a.cols() != b.cols() || a.cols() != config.centers.front().size()) {
    throw DimensionError("sample dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.cols()) + " do not match target dimension " +
                         std::to_string(config.centers.front().size()));
  }
  const ModeHistogram ha = assign_modes(a, config.centers, config.radius);
  const ModeHistogram hb = assign_modes(b, config.centers, config.radius);
  const SeparationReport r = separation_report(ha, hb);
  const double hist_js = maybe_histogram_js(a, b, synthetic_binning(config.centers, config.bins));
  const fs::path dir = output_root(config);
  fs::create_directories(dir);
  export_csv(separation_table(r, ha, hb, hist_js), dir / "report.csv");
  os << "purity " << r.purity_a << "/" << r.purity_b << " overlap " << r.overlap << " histogram_js "
     << hist_js << (r.success ? " SEPARATED" : " not separated") << '\n';
  return kExitOk;
}

int run_task(const RunConfig& config, std::ostream& os, std::ostream& err) {
  try {
    switch (config.task) {
      case Task::kVerify: return cmd_verify(os);
      case Task::kTrainSynthetic:
      case Task::kTrainMnist: return cmd_train(config, os);
      case Task::kSample: return cmd_sample(config, os);
      case Task::kMetrics: return cmd_metrics(config, os);
    }
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mixgan::cli
