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

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mixgan/tensor.hpp"

namespace mixgan {

inline constexpr double kSuccessPurity = 0.9;

/// Per-mode sample counts for one generator plus samples outside every
/// center's radius.
struct ModeHistogram {
  std::vector<std::size_t> counts;
  std::size_t unassigned = 0;

  std::size_t assigned() const;
  std::size_t total() const { return assigned() + unassigned; }
};

/// Nearest center within radius (Euclidean); ties go to the lower index.
ModeHistogram assign_modes(const Tensor& samples, const std::vector<std::vector<double>>& centers,
                           double radius);

struct SeparationReport {
  std::size_t dominant_mode_a = 0;
  std::size_t dominant_mode_b = 0;
  double purity_a = 0.0;
  double purity_b = 0.0;
  /// 1 - total variation between the normalized mode histograms.
  double overlap = 0.0;
  /// JS divergence between the add-one smoothed mode histograms.
  double mode_js = 0.0;
  bool success = false;
};

/// Throws ContractError when either histogram has no assigned samples or the
/// mode sets differ.
SeparationReport separation_report(const ModeHistogram& a, const ModeHistogram& b,
                                   double purity_threshold = kSuccessPurity);

/// Regular grid over a box; values outside the box fall into the edge bins.
struct Binning {
  struct Axis {
    double lo;
    double hi;
    std::size_t bins;
  };
  std::vector<Axis> axes;

  std::size_t num_bins() const;
  std::size_t bin_of(const double* row) const;
};

/// JS divergence (weights 1/2, 1/2) between add-one smoothed histograms of
/// two sample sets on a shared grid.
double histogram_js(const Tensor& samples_a, const Tensor& samples_b, const Binning& binning);

/// Cosine similarity between the mean of the samples and each row of
/// class_means.
std::vector<double> mean_image_affinity(const Tensor& samples, const Tensor& class_means);

/// Writes the first rows*cols samples as a binary PGM (P5, maxval 255) grid
/// of image_rows x image_cols tiles; pixel = floor(clamp(v, 0, 1) * 255 + 0.5).
void export_grid(const Tensor& samples, std::size_t rows, std::size_t cols,
                 const std::filesystem::path& path, std::size_t image_rows = 28,
                 std::size_t image_cols = 28);
std::vector<unsigned char> encode_grid(const Tensor& samples, std::size_t rows, std::size_t cols,
                                       std::size_t image_rows = 28, std::size_t image_cols = 28);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Shortest round-trip decimal for v; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

void export_csv(const CsvTable& table, const std::filesystem::path& path);
std::string encode_csv(const CsvTable& table);
/// Numeric CSV with one header row.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace mixgan
