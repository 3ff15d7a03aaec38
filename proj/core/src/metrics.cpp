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
#include "mixgan/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mixgan/divergences.hpp"
#include "mixgan/errors.hpp"

namespace mixgan {

std::size_t ModeHistogram::assigned() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

ModeHistogram assign_modes(const Tensor& samples, const std::vector<std::vector<double>>& centers,
                           double radius) {
  if (centers.empty()) throw ContractError("assign_modes needs at least one center");
  if (!(radius > 0.0)) throw ContractError("assign_modes radius must be positive");
  const std::size_t d = samples.cols();
  for (const auto& c : centers) {
    if (c.size() != d) {
      throw DimensionError("assign_modes: center dimension " + std::to_string(c.size()) +
                           " vs sample dimension " + std::to_string(d));
    }
  }
  ModeHistogram h;
  h.counts.assign(centers.size(), 0);
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    std::size_t best = 0;
    double best_d2 = INFINITY;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = samples.at(i, j) - centers[c][j];
        d2 += diff * diff;
      }
      if (d2 < best_d2) {  // strict: equal distances keep the lower index
        best_d2 = d2;
        best = c;
      }
    }
    if (best_d2 <= r2) {
      ++h.counts[best];
    } else {
      ++h.unassigned;
    }
  }
  return h;
}

namespace {

std::vector<double> normalized(const ModeHistogram& h) {
  const double n = static_cast<double>(h.assigned());
  std::vector<double> out;
  for (auto c : h.counts) out.push_back(static_cast<double>(c) / n);
  return out;
}

std::size_t argmax(const std::vector<std::size_t>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

DiscreteDistribution smoothed(const std::vector<std::size_t>& counts) {
  std::vector<double> w;
  w.reserve(counts.size());
  for (auto c : counts) w.push_back(static_cast<double>(c) + 1.0);
  return DiscreteDistribution::normalized(std::move(w));
}

}  // namespace

SeparationReport separation_report(const ModeHistogram& a, const ModeHistogram& b,
                                   double purity_threshold) {
  if (a.counts.size() != b.counts.size()) {
    throw ContractError("separation_report: histograms cover different mode sets");
  }
  if (a.assigned() == 0 || b.assigned() == 0) {
    throw ContractError("separation_report undefined: a generator has no assigned samples");
  }
  SeparationReport r;
  r.dominant_mode_a = argmax(a.counts);
  r.dominant_mode_b = argmax(b.counts);
  r.purity_a = static_cast<double>(a.counts[r.dominant_mode_a]) / static_cast<double>(a.assigned());
  r.purity_b = static_cast<double>(b.counts[r.dominant_mode_b]) / static_cast<double>(b.assigned());

  const auto pa = normalized(a);
  const auto pb = normalized(b);
  double tv = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) tv += std::abs(pa[i] - pb[i]);
  r.overlap = std::clamp(1.0 - 0.5 * tv, 0.0, 1.0);
  r.mode_js = js_divergence(smoothed(a.counts), smoothed(b.counts));
  r.success = r.purity_a >= purity_threshold && r.purity_b >= purity_threshold &&
              r.dominant_mode_a != r.dominant_mode_b;
  return r;
}

std::size_t Binning::num_bins() const {
  if (axes.empty()) throw ContractError("binning needs at least one axis");
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.bins;
  return n;
}

std::size_t Binning::bin_of(const double* row) const {
  std::size_t index = 0;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const Axis& a = axes[k];
    const double t = (row[k] - a.lo) / (a.hi - a.lo);
    long b = static_cast<long>(std::floor(t * static_cast<double>(a.bins)));
    b = std::clamp(b, 0L, static_cast<long>(a.bins) - 1);
    index = index * a.bins + static_cast<std::size_t>(b);
  }
  return index;
}

double histogram_js(const Tensor& samples_a, const Tensor& samples_b, const Binning& binning) {
  for (const auto& a : binning.axes) {
    if (a.bins == 0 || !(a.hi > a.lo)) throw ContractError("binning axis must have bins and hi > lo");
  }
  const std::size_t d = binning.axes.size();
  if (samples_a.cols() != d || samples_b.cols() != d) {
    throw DimensionError("histogram_js: samples and binning differ in dimension");
  }
  const std::size_t n = binning.num_bins();
  std::vector<std::size_t> ca(n, 0), cb(n, 0);
  for (std::size_t i = 0; i < samples_a.rows(); ++i) ++ca[binning.bin_of(samples_a.data() + i * d)];
  for (std::size_t i = 0; i < samples_b.rows(); ++i) ++cb[binning.bin_of(samples_b.data() + i * d)];
  return js_divergence(smoothed(ca), smoothed(cb));
}

std::vector<double> mean_image_affinity(const Tensor& samples, const Tensor& class_means) {
  const std::size_t d = samples.cols();
  if (class_means.cols() != d) {
    throw DimensionError("mean_image_affinity: sample dimension " + std::to_string(d) +
                         " vs class mean dimension " + std::to_string(class_means.cols()));
  }
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < samples.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += samples.at(i, j);
  double mean_norm = 0.0;
  for (double& v : mean) {
    v /= static_cast<double>(samples.rows());
    mean_norm += v * v;
  }
  mean_norm = std::sqrt(mean_norm);
  if (mean_norm == 0.0) throw ContractError("mean_image_affinity: mean sample has zero norm");

  std::vector<double> out;
  for (std::size_t c = 0; c < class_means.rows(); ++c) {
    double dot = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      dot += mean[j] * class_means.at(c, j);
      norm += class_means.at(c, j) * class_means.at(c, j);
    }
    if (norm == 0.0) {
      throw ContractError("mean_image_affinity: class mean " + std::to_string(c) + " has zero norm");
    }
    out.push_back(std::clamp(dot / (mean_norm * std::sqrt(norm)), -1.0, 1.0));
  }
  return out;
}

std::vector<unsigned char> encode_grid(const Tensor& samples, std::size_t rows, std::size_t cols,
                                       std::size_t image_rows, std::size_t image_cols) {
  if (rows == 0 || cols == 0) throw ContractError("grid needs at least one row and column");
  if (rows * cols > samples.rows()) {
    throw ContractError("grid of " + std::to_string(rows) + "x" + std::to_string(cols) + " needs " +
                        std::to_string(rows * cols) + " samples, got " +
                        std::to_string(samples.rows()));
  }
  if (samples.cols() != image_rows * image_cols) {
    throw DimensionError("samples of width " + std::to_string(samples.cols()) +
                         " do not reshape to " + std::to_string(image_rows) + "x" +
                         std::to_string(image_cols));
  }
  const std::size_t width = cols * image_cols;
  const std::size_t height = rows * image_rows;
  const std::string header =
      "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(out.size() + width * height);
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t tile_r = y / image_rows, py = y % image_rows;
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t tile_c = x / image_cols, px = x % image_cols;
      const double v = samples.at(tile_r * cols + tile_c, py * image_cols + px);
      const double clamped = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
      out.push_back(static_cast<unsigned char>(std::floor(clamped * 255.0 + 0.5)));
    }
  }
  return out;
}

void export_grid(const Tensor& samples, std::size_t rows, std::size_t cols,
                 const std::filesystem::path& path, std::size_t image_rows,
                 std::size_t image_cols) {
  const auto bytes = encode_grid(samples, rows, cols, image_rows, image_cols);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string encode_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void export_csv(const CsvTable& table, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << encode_csv(table);
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw FormatError("'" + path.string() + "' is empty");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw FormatError("'" + path.string() + "' line " + std::to_string(line_no) +
                          ": not a number: '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != t.header.size()) {
      throw FormatError("'" + path.string() + "' line " + std::to_string(line_no) + " has " +
                        std::to_string(row.size()) + " fields, header has " +
                        std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace mixgan
