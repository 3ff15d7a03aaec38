// Acceptance gate: one PASS/FAIL line per criterion.
//
// Oracles here are written independently of the library code they check:
// hand-rolled expectations over the support, a plain-array vanilla GAN with
// its own backprop and Adam, and central differences.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mixgan/checkpoint.hpp"
#include "mixgan/cli/commands.hpp"
#include "mixgan/cli/run_config.hpp"
#include "mixgan/data.hpp"
#include "mixgan/divergences.hpp"
#include "mixgan/game.hpp"
#include "mixgan/metrics.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;
using mixgan::DiscreteDistribution;
using mixgan::MixtureModel;
using mixgan::Tensor;
using Clock = std::chrono::steady_clock;

enum class Outcome { kPass, kFail, kSkip };

struct Line {
  int id;
  std::string title;
  Outcome outcome;
  std::string detail;
};

std::vector<Line> g_lines;

void report(int id, std::string title, Outcome outcome, std::string detail) {
  const char* tag = outcome == Outcome::kPass ? "PASS" : outcome == Outcome::kFail ? "FAIL" : "SKIP";
  std::printf("%s  criterion %d: %-34s %s\n", tag, id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  g_lines.push_back({id, std::move(title), outcome, std::move(detail)});
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

DiscreteDistribution random_dist(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  for (auto& v : w) v = std::max(u(rng), 1e-3);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= s;
  return DiscreteDistribution::normalized(w);
}

// V evaluated directly from its definition over the support, with optimal
// responses derived here from the densities.
double oracle_value(const DiscreteDistribution& real, const std::vector<DiscreteDistribution>& c) {
  const std::size_t n = real.size(), K = c.size();
  std::vector<double> mix(n, 0.0);
  for (const auto& p : c)
    for (std::size_t x = 0; x < n; ++x) mix[x] += p[x] / K;
  // adversarial objective minus the supplementary objectives
  double v = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double h = real[x] / (real[x] + mix[x]);
    v += real[x] * std::log(h) + mix[x] * std::log(1 - h);
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t x = 0; x < n; ++x) {
      double rest = 0.0;
      for (std::size_t j = 0; j < K; ++j)
        if (j != k) rest += c[j][x] / (K - 1);
      const double hk = c[k][x] / (K * mix[x]);
      v -= c[k][x] * std::log(hk) + rest * std::log(1 - hk);
    }
  }
  return v;
}

void criterion_1() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20170921);
  std::uniform_int_distribution<std::size_t> support(2, 16), comps(2, 4);
  double def_kl = 0.0, kl_js = 0.0, oracle = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = support(rng), K = comps(rng);
    const auto real = random_dist(rng, n);
    std::vector<DiscreteDistribution> c;
    for (std::size_t k = 0; k < K; ++k) c.push_back(random_dist(rng, n));
    MixtureModel m(c);
    const auto h = mixgan::optimal_adversarial(real, mixgan::mixture_pdf(m));
    std::vector<mixgan::ResponseTable> hks;
    for (std::size_t k = 0; k < K; ++k) hks.push_back(mixgan::optimal_supplementary(m, k));
    const double def = mixgan::value_from_definition(real, m, h, hks);
    const double kl = mixgan::value_kl_form(real, m);
    const double js = mixgan::value_js_form(real, m);
    def_kl = std::max(def_kl, std::abs(def - kl));
    kl_js = std::max(kl_js, std::abs(kl - js));
    oracle = std::max(oracle, std::abs(def - oracle_value(real, c)));
  }
  const double secs = seconds_since(t0);
  const bool ok = def_kl <= 1e-9 && kl_js <= 1e-9 && oracle <= 1e-9 && secs < 5.0;
  report(1, "value-function identity", ok ? Outcome::kPass : Outcome::kFail,
         "max|def-kl| " + fmt("%.3g", def_kl) + ", max|kl-js| " + fmt("%.3g", kl_js) +
             ", max|def-oracle| " + fmt("%.3g", oracle) + " (tol 1e-9), " + fmt("%.3f", secs) +
             " s (< 5)");
}

void criterion_2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(7);
  double sum_dev = 0.0, half_dev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 15, K = 2 + i % 3;
    std::vector<DiscreteDistribution> c;
    for (std::size_t k = 0; k < K; ++k) c.push_back(random_dist(rng, n));
    MixtureModel m(c);
    std::vector<double> total(n, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const auto hk = mixgan::optimal_supplementary(m, k);
      for (std::size_t x = 0; x < n; ++x) total[x] += *hk[x];
    }
    for (double t : total) sum_dev = std::max(sum_dev, std::abs(t - 1.0));
    const auto mix = mixgan::mixture_pdf(m);
    for (const auto& v : mixgan::optimal_adversarial(mix, mix)) half_dev = std::max(half_dev, std::abs(*v - 0.5));
  }
  const DiscreteDistribution p({0.1, 0.2, 0.3, 0.4});
  const MixtureModel same({p, p});
  const auto h = mixgan::optimal_adversarial(p, mixgan::mixture_pdf(same));
  std::vector<mixgan::ResponseTable> hks{mixgan::optimal_supplementary(same, 0),
                                          mixgan::optimal_supplementary(same, 1)};
  const double ln4_dev = std::abs(mixgan::value_from_definition(p, same, h, hks) - std::log(4.0));
  const double secs = seconds_since(t0);
  const bool ok = sum_dev <= 1e-12 && half_dev <= 1e-12 && ln4_dev <= 1e-12 && secs < 1.0;
  report(2, "optimal-response algebra", ok ? Outcome::kPass : Outcome::kFail,
         "max|sum h_k*-1| " + fmt("%.3g", sum_dev) + ", max|h*-1/2| " + fmt("%.3g", half_dev) +
             ", |V-ln4| " + fmt("%.3g", ln4_dev) + " (tol 1e-12), " + fmt("%.3f", secs) + " s (< 1)");
}

// ---- criterion 3 -----------------------------------------------------------

struct GameInputs {
  Tensor real;
  std::vector<Tensor> z;  // one latent batch per generator
};

// First-layer pre-activations of a two-layer net.
Tensor hidden_preacts(const mixgan::Mlp& net, const Tensor& x) {
  Tensor pre = mixgan::matmul_values(x, net.layers()[0].weight);
  for (std::size_t i = 0; i < pre.rows(); ++i)
    for (std::size_t j = 0; j < pre.cols(); ++j) pre.at(i, j) += net.layers()[0].bias[j];
  return pre;
}

bool near_kink(const mixgan::GameState& s, const GameInputs& in, double margin) {
  auto check = [&](const mixgan::Mlp& net, const Tensor& x) {
    const Tensor pre = hidden_preacts(net, x);
    for (double v : pre.values())
      if (std::abs(v) < margin) return true;
    return false;
  };
  std::vector<Tensor> fakes;
  for (std::size_t k = 0; k < s.generators.size(); ++k) {
    if (check(s.generators[k].net, in.z[k])) return true;
    fakes.push_back(s.generators[k].net.forward(in.z[k]));
  }
  std::vector<Tensor> inputs = fakes;
  inputs.push_back(in.real);
  for (const auto& x : inputs) {
    if (check(s.adversary.net, x)) return true;
    for (const auto& h : s.supplementary)
      if (check(h.net, x)) return true;
  }
  return false;
}

// All losses of one iteration on fixed inputs. The adversary sees the first
// half of every generator's batch stacked, so the fake batch matches the real
// batch in size and every generator feeds it.
std::vector<mixgan::Var> game_losses(mixgan::Tape& t, const mixgan::GameState& s, const GameInputs& in,
                                     std::vector<mixgan::Var>& params) {
  const auto& cfg = s.config;
  std::vector<mixgan::BoundMlp> gens, supp;
  for (const auto& g : s.generators) gens.push_back(g.net.bind(t));
  const auto h = s.adversary.net.bind(t);
  for (const auto& m : s.supplementary) supp.push_back(m.net.bind(t));
  params.clear();
  for (const auto& g : gens)
    for (auto v : g.parameters()) params.push_back(v);
  for (auto v : h.parameters()) params.push_back(v);
  for (const auto& m : supp)
    for (auto v : m.parameters()) params.push_back(v);

  std::vector<mixgan::Var> fakes;
  for (std::size_t k = 0; k < gens.size(); ++k) fakes.push_back(gens[k].forward(t.leaf(in.z[k])));
  std::vector<mixgan::Var> losses;
  losses.push_back(mixgan::adversarial_loss(h, t.leaf(in.real), mixgan::concat_rows(fakes)));
  for (std::size_t j = 0; j < supp.size(); ++j) losses.push_back(mixgan::supplementary_loss(supp[j], fakes, j));
  for (std::size_t k = 0; k < gens.size(); ++k)
    losses.push_back(mixgan::generator_objective(fakes[k], h, supp, k, cfg.supplementary_mode, cfg.flip_labels));
  return losses;
}

std::vector<Tensor*> mutable_params(mixgan::GameState& s) {
  std::vector<Tensor*> out;
  for (auto& g : s.generators)
    for (auto* p : g.net.parameters()) out.push_back(p);
  for (auto* p : s.adversary.net.parameters()) out.push_back(p);
  for (auto& m : s.supplementary)
    for (auto* p : m.net.parameters()) out.push_back(p);
  return out;
}

double gradient_case(mixgan::GameConfig cfg, std::uint64_t seed, std::size_t* checked) {
  cfg.generator = mixgan::MlpSpec{{3, 5, 2}, mixgan::Activation::kRelu, mixgan::Activation::kIdentity};
  cfg.batch_size = 4;
  const std::size_t K = cfg.num_generators;
  for (std::uint64_t attempt = 0;; ++attempt) {
    cfg.seed = seed * 1000 + attempt;
    auto s = mixgan::init_game(cfg);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GameInputs in{Tensor({K * 4, 2}), {}};
    for (double& v : in.real.values()) v = 2 * u(rng);
    for (std::size_t k = 0; k < K; ++k) {
      Tensor z({4, 3});
      for (double& v : z.values()) v = u(rng);
      in.z.push_back(z);
    }
    if (near_kink(s, in, 1e-3)) continue;

    mixgan::Tape tape;
    std::vector<mixgan::Var> vars;
    const auto losses = game_losses(tape, s, in, vars);
    const auto tensors = mutable_params(s);
    double worst = 0.0;
    for (std::size_t l = 0; l < losses.size(); ++l) {
      tape.backward(losses[l]);
      std::vector<Tensor> analytic;
      for (auto v : vars) analytic.push_back(v.grad());
      for (std::size_t p = 0; p < tensors.size(); ++p) {
        Tensor& param = *tensors[p];
        for (std::size_t i = 0; i < param.size(); ++i) {
          const double saved = param[i], step = 1e-6;
          auto eval = [&] {
            mixgan::Tape t2;
            std::vector<mixgan::Var> unused;
            return game_losses(t2, s, in, unused)[l].value().item();
          };
          param[i] = saved + step;
          const double up = eval();
          param[i] = saved - step;
          const double down = eval();
          param[i] = saved;
          const double numeric = (up - down) / (2 * step);
          const double a = analytic[p][i];
          const double scale = std::max({std::abs(numeric), std::abs(a), 1e-4});
          worst = std::max(worst, std::abs(numeric - a) / scale);
          ++*checked;
        }
      }
    }
    return worst;
  }
}

void criterion_3() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t checked = 0;
  for (bool flip : {true, false}) {
    mixgan::GameConfig pair;
    pair.num_generators = 2;
    pair.supplementary_mode = mixgan::SupplementaryMode::kPairwiseSingle;
    pair.flip_labels = flip;
    worst = std::max(worst, gradient_case(pair, flip ? 1 : 2, &checked));
    for (std::size_t K : {2u, 3u}) {
      mixgan::GameConfig full;
      full.num_generators = K;
      full.supplementary_mode = mixgan::SupplementaryMode::kFull;
      full.flip_labels = flip;
      worst = std::max(worst, gradient_case(full, 10 + K + flip, &checked));
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = worst <= 1e-4 && secs < 10.0;
  report(3, "gradient fidelity", ok ? Outcome::kPass : Outcome::kFail,
         std::to_string(checked) + " loss/parameter pairs, max rel err " + fmt("%.3g", worst) +
             " (tol 1e-4), " + fmt("%.3f", secs) + " s (< 10)");
}

// ---- criterion 4 -----------------------------------------------------------

void criterion_4(const fs::path& scratch) {
  const auto t0 = Clock::now();
  auto c = mixgan::cli::RunConfig::defaults_for(mixgan::cli::Task::kTrainSynthetic);
  c.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  c.out = (scratch / "separation").string();
  std::ostringstream log;
  const int rc = mixgan::cli::cmd_train(c, log);
  int successes = 0;
  std::string per_seed;
  for (auto seed : c.seeds) {
    const fs::path report_path = scratch / "separation" / ("seed_" + std::to_string(seed)) / "report.csv";
    bool ok = false;
    if (fs::exists(report_path)) {
      const auto t = mixgan::read_csv(report_path);
      const auto col = std::find(t.header.begin(), t.header.end(), "success") - t.header.begin();
      ok = !t.rows.empty() && t.rows[0][static_cast<std::size_t>(col)] == 1.0;
    }
    successes += ok;
    per_seed += ok ? '+' : '-';
  }
  const double secs = seconds_since(t0);
  const bool pass = rc == 0 && successes >= 7 && c.iterations <= 20000;
  report(4, "mode separation (2 Gaussians)", pass ? Outcome::kPass : Outcome::kFail,
         std::to_string(successes) + "/10 seeds separated [" + per_seed + "] (need >= 7), " +
             std::to_string(c.iterations) + " iterations, " + fmt("%.1f", secs) + " s (target < 600)");
}

void criterion_5() {
  const auto t0 = Clock::now();
  const auto cfg = mixgan::cli::RunConfig::defaults_for(mixgan::cli::Task::kTrainMnist).game_config();
  const auto s = mixgan::init_game(cfg);
  std::size_t total = s.adversary.net.parameter_count();
  for (const auto& g : s.generators) total += g.net.parameter_count();
  for (const auto& h : s.supplementary) total += h.net.parameter_count();
  // hand count: two [100,240,784] generators, two [784,240,1] discriminators
  const std::size_t hand = 2 * (100 * 240 + 240 + 240 * 784 + 784) + 2 * (784 * 240 + 240 + 240 + 1);
  const double rel = std::abs(static_cast<double>(total) - 8e5) / 8e5;
  const double secs = seconds_since(t0);
  const bool ok = total == hand && total == 803650 && rel <= 0.10 && secs < 1.0;
  report(5, "parameter budget", ok ? Outcome::kPass : Outcome::kFail,
         std::to_string(total) + " parameters (hand count " + std::to_string(hand) + "), " +
             fmt("%.2f", 100 * rel) + "% from 0.8M (tol 10%), " + fmt("%.3f", secs) + " s (< 1)");
}

// ---- criterion 6: vanilla GAN oracle ---------------------------------------

// Two-layer perceptron on plain row-major arrays: relu hidden layer, then
// identity or sigmoid output.
struct PlainNet {
  std::size_t in, hid, out;
  bool sigmoid_out;
  std::vector<double> w0, b0, w1, b1;

  struct Cache {
    std::vector<double> x, pre0, act0, pre1, y;
  };

  Cache forward(const std::vector<double>& x, std::size_t n) const {
    Cache c{x, std::vector<double>(n * hid), std::vector<double>(n * hid), std::vector<double>(n * out),
            std::vector<double>(n * out)};
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t j = 0; j < hid; ++j) {
        double a = b0[j];
        for (std::size_t i = 0; i < in; ++i) a += x[r * in + i] * w0[i * hid + j];
        c.pre0[r * hid + j] = a;
        c.act0[r * hid + j] = a > 0 ? a : 0.0;
      }
      for (std::size_t j = 0; j < out; ++j) {
        double a = b1[j];
        for (std::size_t i = 0; i < hid; ++i) a += c.act0[r * hid + i] * w1[i * out + j];
        c.pre1[r * out + j] = a;
        c.y[r * out + j] = sigmoid_out ? 1.0 / (1.0 + std::exp(-a)) : a;
      }
    }
    return c;
  }

  struct Grads {
    std::vector<double> w0, b0, w1, b1, x;
  };

  // dy: gradient of the loss with respect to the outputs.
  Grads backward(const Cache& c, const std::vector<double>& dy, std::size_t n) const {
    Grads g{std::vector<double>(w0.size()), std::vector<double>(b0.size()), std::vector<double>(w1.size()),
            std::vector<double>(b1.size()), std::vector<double>(n * in)};
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<double> dpre1(out);
      for (std::size_t j = 0; j < out; ++j) {
        const double y = c.y[r * out + j];
        dpre1[j] = sigmoid_out ? dy[r * out + j] * y * (1 - y) : dy[r * out + j];
        g.b1[j] += dpre1[j];
      }
      std::vector<double> dact0(hid, 0.0);
      for (std::size_t i = 0; i < hid; ++i)
        for (std::size_t j = 0; j < out; ++j) {
          g.w1[i * out + j] += c.act0[r * hid + i] * dpre1[j];
          dact0[i] += w1[i * out + j] * dpre1[j];
        }
      for (std::size_t i = 0; i < hid; ++i) {
        const double dpre0 = c.pre0[r * hid + i] > 0 ? dact0[i] : 0.0;
        g.b0[i] += dpre0;
        for (std::size_t k = 0; k < in; ++k) {
          g.w0[k * hid + i] += c.x[r * in + k] * dpre0;
          g.x[r * in + k] += w0[k * hid + i] * dpre0;
        }
      }
    }
    return g;
  }
};

PlainNet from_mlp(const mixgan::Mlp& m) {
  const auto& L = m.layers();
  auto vec = [](const Tensor& t) { return std::vector<double>(t.values().begin(), t.values().end()); };
  return {L[0].weight.dim(0), L[0].weight.dim(1), L[1].weight.dim(1),
          m.spec().output_activation == mixgan::Activation::kSigmoid,
          vec(L[0].weight), vec(L[0].bias), vec(L[1].weight), vec(L[1].bias)};
}

struct PlainAdam {
  std::vector<double> m, v;
  long t = 0;
  void step(std::vector<double>& p, const std::vector<double>& g, long step_index) {
    if (m.empty()) m.assign(p.size(), 0.0), v.assign(p.size(), 0.0);
    t = step_index;
    const double lr = 1e-3, b1 = 0.9, b2 = 0.999, eps = 1e-8;
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = b1 * m[i] + (1 - b1) * g[i];
      v[i] = b2 * v[i] + (1 - b2) * g[i] * g[i];
      const double mh = m[i] / (1 - std::pow(b1, static_cast<double>(t)));
      const double vh = v[i] / (1 - std::pow(b2, static_cast<double>(t)));
      p[i] -= lr * mh / (std::sqrt(vh) + eps);
    }
  }
};

struct PlainModel {
  PlainNet net;
  PlainAdam opt[4];
  void apply(const PlainNet::Grads& g, long t) {
    opt[0].step(net.w0, g.w0, t);
    opt[1].step(net.b0, g.b0, t);
    opt[2].step(net.w1, g.w1, t);
    opt[3].step(net.b1, g.b1, t);
  }
};

std::vector<double> to_vec(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

// One vanilla GAN iteration: discriminator ascent on
// mean log D(x) + mean log(1 - D(G(z))), then one generator step on either
// -mean log D(G(z)) or mean log(1 - D(G(z))).
void vanilla_step(PlainModel& D, PlainModel& G, const std::vector<double>& real, const std::vector<double>& z_d,
                  const std::vector<double>& z_g, std::size_t n, bool flip, long t) {
  {
    const auto fake = G.net.forward(z_d, n).y;
    const auto cr = D.net.forward(real, n);
    const auto cf = D.net.forward(fake, n);
    std::vector<double> dr(n), df(n);
    for (std::size_t i = 0; i < n; ++i) {
      dr[i] = -1.0 / (n * cr.y[i]);
      df[i] = 1.0 / (n * (1 - cf.y[i]));
    }
    auto gr = D.net.backward(cr, dr, n);
    const auto gf = D.net.backward(cf, df, n);
    for (std::size_t i = 0; i < gr.w0.size(); ++i) gr.w0[i] += gf.w0[i];
    for (std::size_t i = 0; i < gr.b0.size(); ++i) gr.b0[i] += gf.b0[i];
    for (std::size_t i = 0; i < gr.w1.size(); ++i) gr.w1[i] += gf.w1[i];
    for (std::size_t i = 0; i < gr.b1.size(); ++i) gr.b1[i] += gf.b1[i];
    D.apply(gr, t);
  }
  {
    const auto cg = G.net.forward(z_g, n);
    const auto cd = D.net.forward(cg.y, n);
    std::vector<double> dd(n);
    for (std::size_t i = 0; i < n; ++i)
      dd[i] = flip ? -1.0 / (n * cd.y[i]) : -1.0 / (n * (1 - cd.y[i]));
    const auto gd = D.net.backward(cd, dd, n);
    G.apply(G.net.backward(cg, gd.x, n), t);
  }
}

double max_delta_gap(const PlainNet& oracle, const PlainNet& start, const mixgan::Mlp& lib) {
  const auto& L = lib.layers();
  double worst = 0.0;
  auto cmp = [&](const std::vector<double>& o, const std::vector<double>& s0, const Tensor& p) {
    for (std::size_t i = 0; i < o.size(); ++i) worst = std::max(worst, std::abs((o[i] - s0[i]) - (p[i] - s0[i])));
  };
  cmp(oracle.w0, start.w0, L[0].weight);
  cmp(oracle.b0, start.b0, L[0].bias);
  cmp(oracle.w1, start.w1, L[1].weight);
  cmp(oracle.b1, start.b1, L[1].bias);
  return worst;
}

void criterion_6() {
  const auto t0 = Clock::now();
  double worst = 0.0, moved = 0.0;
  for (bool flip : {true, false}) {
    mixgan::GameConfig cfg;
    cfg.num_generators = 1;
    cfg.supplementary_mode = mixgan::SupplementaryMode::kFull;
    cfg.flip_labels = flip;
    cfg.batch_size = 16;
    cfg.seed = 424242;
    cfg.generator = mixgan::MlpSpec{{4, 7, 3}, mixgan::Activation::kRelu, mixgan::Activation::kIdentity};
    auto s = mixgan::init_game(cfg);
    if (!s.supplementary.empty()) {
      report(6, "degenerate game == vanilla GAN", Outcome::kFail, "K=1 game created supplementary models");
      return;
    }
    const auto d0 = mixgan::build_mlp(cfg.adversary_spec(), mixgan::model_init_seed(cfg.seed, "h"));
    const auto g0 = mixgan::build_generator(cfg.generator, mixgan::model_init_seed(cfg.seed, "g1"));
    PlainModel D{from_mlp(d0), {}}, G{from_mlp(g0), {}};
    const PlainNet d_start = D.net, g_start = G.net;
    mixgan::LatentSampler latents(cfg.latent_dim(), mixgan::latent_seed(cfg.seed));
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (long step = 1; step <= 5; ++step) {
      Tensor real({cfg.batch_size, 3});
      for (double& v : real.values()) v = nd(rng);
      const auto z_d = to_vec(latents.sample(cfg.batch_size));
      const auto z_g = to_vec(latents.sample(cfg.batch_size));
      vanilla_step(D, G, to_vec(real), z_d, z_g, cfg.batch_size, flip, step);
      mixgan::train_step(s, real);
    }
    worst = std::max({worst, max_delta_gap(D.net, d_start, s.adversary.net),
                      max_delta_gap(G.net, g_start, s.generators[0].net)});
    for (std::size_t i = 0; i < G.net.w0.size(); ++i) moved = std::max(moved, std::abs(G.net.w0[i] - g_start.w0[i]));
  }
  const double secs = seconds_since(t0);
  const bool ok = worst <= 1e-12 && moved > 1e-4 && secs < 5.0;
  report(6, "degenerate game == vanilla GAN", ok ? Outcome::kPass : Outcome::kFail,
         "max parameter-delta gap " + fmt("%.3g", worst) + " over 5 steps x 2 label modes (tol 1e-12), " +
             fmt("%.3f", secs) + " s (< 5)");
}

// ---- criterion 7 -----------------------------------------------------------

fs::path mnist_dir() {
  const char* env = std::getenv("MIXGAN_MNIST_DIR");
  return env ? fs::path(env) : fs::path("data/mnist");
}

void criterion_7(const fs::path& scratch) {
  const auto t0 = Clock::now();
  const fs::path data = MIXGAN_TEST_DATA_DIR;
  std::vector<std::string> problems;

  // hand-written hex fixture
  const std::vector<std::uint8_t> hex = {0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 0x00, 0x7F, 0x80, 0xFF};
  testutil::write_bytes(scratch / "hex.idx", hex);
  const auto parsed = mixgan::load_idx_images(scratch / "hex.idx");
  if (parsed.pixels != std::vector<std::uint8_t>{0x00, 0x7F, 0x80, 0xFF}) problems.push_back("hex fixture pixels");
  mixgan::write_idx_images(scratch / "hex2.idx", parsed);
  if (testutil::read_bytes(scratch / "hex2.idx") != hex) problems.push_back("hex fixture round trip");

  const auto images_path = data / "digits-images.idx3-ubyte", labels_path = data / "digits-labels.idx1-ubyte";
  mixgan::write_idx_images(scratch / "img.idx", mixgan::load_idx_images(images_path));
  mixgan::write_idx_labels(scratch / "lbl.idx", mixgan::load_idx_labels(labels_path));
  if (testutil::read_bytes(scratch / "img.idx") != testutil::read_bytes(images_path)) problems.push_back("image round trip");
  if (testutil::read_bytes(scratch / "lbl.idx") != testutil::read_bytes(labels_path)) problems.push_back("label round trip");

  const auto ds = mixgan::load_mnist(images_path, labels_path);
  for (int pass = 0; pass < 2; ++pass) {
    mixgan::export_grid(ds.images, 1, 1, scratch / "zero.pgm");
    mixgan::export_grid(ds.images, 1, 3, scratch / "row.pgm");
    if (testutil::read_bytes(scratch / "zero.pgm") != testutil::read_bytes(data / "digit-zero.pgm"))
      problems.push_back("digit-zero.pgm differs");
    if (testutil::read_bytes(scratch / "row.pgm") != testutil::read_bytes(data / "digits-row.pgm"))
      problems.push_back("digits-row.pgm differs");
  }

  std::string mnist_note;
  const auto mi = mnist_dir() / "train-images-idx3-ubyte", ml = mnist_dir() / "train-labels-idx1-ubyte";
  if (fs::exists(mi) && fs::exists(ml)) {
    const auto raw = testutil::read_bytes(ml);
    std::size_t scanned = 0;
    for (std::size_t i = 8; i < raw.size(); ++i) scanned += raw[i] <= 1;
    const auto count = mixgan::filter_digits(mixgan::load_mnist(mi, ml), 0, 1).size();
    if (count != scanned || count != 12665) problems.push_back("filter {0,1} gave " + std::to_string(count));
    mnist_note = "full-MNIST {0,1} count " + std::to_string(count) + " (label scan " + std::to_string(scanned) + ")";
  } else {
    mnist_note = "full-MNIST count skipped (no files in " + mnist_dir().string() + ")";
  }
  const double secs = seconds_since(t0);
  std::string detail = "IDX round trips bit-exact, PGM goldens byte-stable; " + mnist_note + ", " + fmt("%.3f", secs) + " s (< 5)";
  if (!problems.empty()) {
    detail = "problems:";
    for (const auto& p : problems) detail += " [" + p + "]";
  }
  report(7, "data plumbing", problems.empty() && secs < 5.0 ? Outcome::kPass : Outcome::kFail, detail);
}

// ---- criterion 8 -----------------------------------------------------------

void criterion_8(const fs::path& scratch) {
  const auto mi = mnist_dir() / "train-images-idx3-ubyte", ml = mnist_dir() / "train-labels-idx1-ubyte";
  if (!std::getenv("MIXGAN_SLOW")) {
    report(8, "MNIST two-digit run (slow)", Outcome::kSkip, "set MIXGAN_SLOW=1 and provide MNIST to run");
    return;
  }
  if (!fs::exists(mi) || !fs::exists(ml)) {
    report(8, "MNIST two-digit run (slow)", Outcome::kSkip, "MNIST files not found in " + mnist_dir().string());
    return;
  }
  const auto t0 = Clock::now();
  auto c = mixgan::cli::RunConfig::defaults_for(mixgan::cli::Task::kTrainMnist);
  c.mnist_images = mi.string();
  c.mnist_labels = ml.string();
  c.digits = {0, 1};
  c.seeds = {1, 2, 3, 4, 5};
  c.out = (scratch / "mnist").string();
  std::ostringstream log;
  const int rc = mixgan::cli::cmd_train(c, log);
  int distinct = 0;
  for (auto seed : c.seeds) {
    const auto t = mixgan::read_csv(scratch / "mnist" / ("seed_" + std::to_string(seed)) / "metrics.csv");
    if (t.rows.empty()) continue;
    auto value = [&](const std::string& name) {
      const auto it = std::find(t.header.begin(), t.header.end(), name);
      return t.rows.back()[static_cast<std::size_t>(it - t.header.begin())];
    };
    const int a = value("affinity_g1_digit0") >= value("affinity_g1_digit1") ? 0 : 1;
    const int b = value("affinity_g2_digit0") >= value("affinity_g2_digit1") ? 0 : 1;
    distinct += a != b;
  }
  const bool ok = rc == 0 && distinct >= 3;
  report(8, "MNIST two-digit run (slow)", ok ? Outcome::kPass : Outcome::kFail,
         std::to_string(distinct) + "/5 seeds with distinct affinity argmax (need >= 3), " +
             fmt("%.0f", seconds_since(t0)) + " s");
}

}  // namespace

int main() {
  testutil::TempDir scratch;
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_5();
  criterion_6();
  criterion_7(scratch.path());
  criterion_4(scratch.path());
  criterion_8(scratch.path());
  std::sort(g_lines.begin(), g_lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  int failed = 0;
  std::printf("\nsummary:\n");
  for (const auto& l : g_lines) {
    const char* tag = l.outcome == Outcome::kPass ? "PASS" : l.outcome == Outcome::kFail ? "FAIL" : "SKIP";
    std::printf("%s  criterion %d: %s\n", tag, l.id, l.title.c_str());
    failed += l.outcome == Outcome::kFail;
  }
  return failed ? 1 : 0;
}
