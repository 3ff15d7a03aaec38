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
#include <cstdint>
#include <filesystem>
#include <vector>

#include "mixgan/random.hpp"
#include "mixgan/tensor.hpp"

namespace mixgan {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Isotropic Gaussian modes in R^d.
struct GaussianMixtureSpec {
  std::vector<std::vector<double>> centers;
  double sigma = 0.1;
  std::vector<double> weights;  // empty means equal weights

  std::size_t dimension() const { return centers.empty() ? 0 : centers.front().size(); }
  std::vector<double> mode_weights() const;
  void validate() const;

  /// Two modes at (-2, 0) and (+2, 0), sigma 0.1, equal weights.
  static GaussianMixtureSpec two_modes();
};

struct LabeledSamples {
  Tensor samples;                 // [n x d]
  std::vector<std::size_t> modes; // source mode of each row
};

LabeledSamples sample_gaussian_mixture(const GaussianMixtureSpec& spec, std::size_t n,
                                       std::uint64_t seed);

/// Raw IDX image file contents.
struct IdxImages {
  std::uint32_t count = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols
};

/// Throws FormatError on a wrong magic number (the message carries the
/// observed value) and LengthError on a truncated payload.
IdxImages load_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path);

void write_idx_images(const std::filesystem::path& path, const IdxImages& images);
void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels);

/// Images flattened to rows with pixels scaled to [0, 1].
struct ImageDataset {
  Tensor images;                     // [n x rows*cols]
  std::vector<std::uint8_t> labels;  // 0..9
  std::size_t image_rows = 28;
  std::size_t image_cols = 28;

  std::size_t size() const { return labels.size(); }
};

ImageDataset make_image_dataset(const IdxImages& images, const std::vector<std::uint8_t>& labels);
ImageDataset load_mnist(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path);

/// Keeps the images labelled a or b, preserving order. Labels are used only
/// for selection. Throws ContractError for a == b or digits outside 0..9,
/// DataError when nothing matches.
ImageDataset filter_digits(const ImageDataset& ds, int a, int b);

/// Per-class mean image, one row per digit 0..9 (zero rows for absent digits).
Tensor class_mean_images(const ImageDataset& ds);

/// Epoch-wise shuffled minibatches over the rows of a data matrix. The last
/// partial batch of each epoch is dropped.
class BatchIterator {
 public:
  BatchIterator(const Tensor& data, std::size_t batch_size, std::uint64_t seed);

  Tensor next();
  std::size_t batch_size() const noexcept { return batch_size_; }
  std::size_t batches_per_epoch() const noexcept { return rows_ / batch_size_; }
  /// Completed epochs (0 during the first).
  std::size_t epoch() const noexcept { return epoch_; }
  /// Row indices of the batch most recently returned by next().
  const std::vector<std::size_t>& last_indices() const noexcept { return last_; }

 private:
  void reshuffle();

  const Tensor* data_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t batch_size_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> last_;
  std::size_t cursor_ = 0;
  std::size_t epoch_ = 0;
  bool started_ = false;
};

}  // namespace mixgan
