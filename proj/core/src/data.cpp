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
#include "mixgan/data.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "mixgan/errors.hpp"

namespace mixgan {

namespace {

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_all(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return (static_cast<std::uint32_t>(b[at]) << 24) | (static_cast<std::uint32_t>(b[at + 1]) << 16) |
         (static_cast<std::uint32_t>(b[at + 2]) << 8) | static_cast<std::uint32_t>(b[at + 3]);
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::string hex(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex;
  os.width(8);
  os.fill('0');
  os << v;
  return os.str();
}

void check_header(const std::vector<std::uint8_t>& bytes, std::size_t header_len,
                  std::uint32_t expected_magic, const std::filesystem::path& path) {
  if (bytes.size() < 4) throw LengthError("'" + path.string() + "' is too short for an IDX header");
  const std::uint32_t magic = be32(bytes, 0);
  if (magic != expected_magic) {
    throw FormatError("'" + path.string() + "': expected IDX magic " + hex(expected_magic) +
                      ", found " + hex(magic));
  }
  if (bytes.size() < header_len) {
    throw LengthError("'" + path.string() + "' is too short for an IDX header");
  }
}

}  // namespace

std::vector<double> GaussianMixtureSpec::mode_weights() const {
  if (!weights.empty()) return weights;
  return std::vector<double>(centers.size(), 1.0 / static_cast<double>(centers.size()));
}

void GaussianMixtureSpec::validate() const {
  if (centers.empty()) throw ConfigError("gaussian mixture needs at least one center");
  const std::size_t d = centers.front().size();
  if (d == 0) throw ConfigError("gaussian mixture centers must have positive dimension");
  for (const auto& c : centers) {
    if (c.size() != d) throw DimensionError("gaussian mixture centers differ in dimension");
  }
  if (!(sigma > 0.0)) throw ConfigError("gaussian mixture sigma must be positive");
  if (!weights.empty()) {
    if (weights.size() != centers.size()) {
      throw DimensionError("gaussian mixture has " + std::to_string(centers.size()) +
                           " centers but " + std::to_string(weights.size()) + " weights");
    }
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) throw ConfigError("gaussian mixture weights must be non-negative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("gaussian mixture weights must sum to 1");
  }
}

GaussianMixtureSpec GaussianMixtureSpec::two_modes() {
  GaussianMixtureSpec s;
  s.centers = {{-2.0, 0.0}, {2.0, 0.0}};
  s.sigma = 0.1;
  s.weights = {0.5, 0.5};
  return s;
}

LabeledSamples sample_gaussian_mixture(const GaussianMixtureSpec& spec, std::size_t n,
                                       std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw ContractError("sample_gaussian_mixture needs n >= 1");
  const std::size_t d = spec.dimension();
  const std::vector<double> w = spec.mode_weights();
  std::vector<double> cumulative(w.size());
  std::partial_sum(w.begin(), w.end(), cumulative.begin());

  Rng rng(seed);
  LabeledSamples out{Tensor(Shape{n, d}), std::vector<std::size_t>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform01() * cumulative.back();
    std::size_t mode = 0;
    while (mode + 1 < cumulative.size() && u >= cumulative[mode]) ++mode;
    out.modes[i] = mode;
    for (std::size_t j = 0; j < d; ++j) {
      out.samples.at(i, j) = spec.centers[mode][j] + spec.sigma * rng.normal();
    }
  }
  return out;
}

IdxImages load_idx_images(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  check_header(bytes, 16, kIdxImagesMagic, path);
  IdxImages img;
  img.count = be32(bytes, 4);
  img.rows = be32(bytes, 8);
  img.cols = be32(bytes, 12);
  const std::size_t payload =
      static_cast<std::size_t>(img.count) * img.rows * img.cols;
  if (bytes.size() - 16 < payload) {
    throw LengthError("'" + path.string() + "': header promises " + std::to_string(payload) +
                      " pixel bytes, file has " + std::to_string(bytes.size() - 16));
  }
  img.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(payload));
  return img;
}

std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  check_header(bytes, 8, kIdxLabelsMagic, path);
  const std::size_t count = be32(bytes, 4);
  if (bytes.size() - 8 < count) {
    throw LengthError("'" + path.string() + "': header promises " + std::to_string(count) +
                      " labels, file has " + std::to_string(bytes.size() - 8));
  }
  return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(count)};
}

void write_idx_images(const std::filesystem::path& path, const IdxImages& images) {
  if (images.pixels.size() != static_cast<std::size_t>(images.count) * images.rows * images.cols) {
    throw DimensionError("IDX image payload does not match its header");
  }
  std::vector<std::uint8_t> out;
  put_be32(out, kIdxImagesMagic);
  put_be32(out, images.count);
  put_be32(out, images.rows);
  put_be32(out, images.cols);
  out.insert(out.end(), images.pixels.begin(), images.pixels.end());
  write_all(path, out);
}

void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels) {
  std::vector<std::uint8_t> out;
  put_be32(out, kIdxLabelsMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  write_all(path, out);
}

ImageDataset make_image_dataset(const IdxImages& images, const std::vector<std::uint8_t>& labels) {
  if (images.count != labels.size()) {
    throw DimensionError("IDX image count " + std::to_string(images.count) +
                         " does not match label count " + std::to_string(labels.size()));
  }
  if (images.count == 0) throw DataError("IDX files contain no images");
  for (auto l : labels) {
    if (l > 9) throw FormatError("label value " + std::to_string(l) + " outside 0..9");
  }
  ImageDataset ds;
  ds.image_rows = images.rows;
  ds.image_cols = images.cols;
  const std::size_t pixels = static_cast<std::size_t>(images.rows) * images.cols;
  ds.images = Tensor(Shape{images.count, pixels});
  for (std::size_t i = 0; i < images.pixels.size(); ++i) {
    ds.images[i] = static_cast<double>(images.pixels[i]) / 255.0;
  }
  ds.labels = labels;
  return ds;
}

ImageDataset load_mnist(const std::filesystem::path& images_path,
                        const std::filesystem::path& labels_path) {
  return make_image_dataset(load_idx_images(images_path), load_idx_labels(labels_path));
}

ImageDataset filter_digits(const ImageDataset& ds, int a, int b) {
  if (a == b) throw ContractError("filter_digits needs two distinct digits");
  if (a < 0 || a > 9 || b < 0 || b > 9) throw ContractError("filter_digits digits must be in 0..9");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < ds.labels.size(); ++i) {
    if (ds.labels[i] == a || ds.labels[i] == b) keep.push_back(i);
  }
  if (keep.empty()) {
    throw DataError("no images with digits " + std::to_string(a) + " or " + std::to_string(b));
  }
  const std::size_t cols = ds.images.cols();
  ImageDataset out;
  out.image_rows = ds.image_rows;
  out.image_cols = ds.image_cols;
  out.images = Tensor(Shape{keep.size(), cols});
  for (std::size_t r = 0; r < keep.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) out.images.at(r, c) = ds.images.at(keep[r], c);
    out.labels.push_back(ds.labels[keep[r]]);
  }
  return out;
}

Tensor class_mean_images(const ImageDataset& ds) {
  const std::size_t cols = ds.images.cols();
  Tensor means(Shape{10, cols});
  std::vector<std::size_t> counts(10, 0);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    const std::size_t d = ds.labels[r];
    ++counts[d];
    for (std::size_t c = 0; c < cols; ++c) means.at(d, c) += ds.images.at(r, c);
  }
  for (std::size_t d = 0; d < 10; ++d) {
    if (counts[d] == 0) continue;
    for (std::size_t c = 0; c < cols; ++c) means.at(d, c) /= static_cast<double>(counts[d]);
  }
  return means;
}

BatchIterator::BatchIterator(const Tensor& data, std::size_t batch_size, std::uint64_t seed)
    : data_(&data), rows_(data.rows()), cols_(data.cols()), batch_size_(batch_size), rng_(seed) {
  if (batch_size_ == 0) throw ContractError("batch size must be positive");
  if (batch_size_ > rows_) {
    throw ConfigError("batch size " + std::to_string(batch_size_) + " exceeds dataset size " +
                      std::to_string(rows_));
  }
  order_.resize(rows_);
}

void BatchIterator::reshuffle() {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  rng_.shuffle(order_);
  cursor_ = 0;
}

Tensor BatchIterator::next() {
  if (!started_) {
    reshuffle();
    started_ = true;
  } else if (cursor_ + batch_size_ > rows_) {
    reshuffle();
    ++epoch_;
  }
  last_.assign(order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
               order_.begin() + static_cast<std::ptrdiff_t>(cursor_ + batch_size_));
  cursor_ += batch_size_;
  Tensor batch(Shape{batch_size_, cols_});
  for (std::size_t r = 0; r < batch_size_; ++r) {
    const double* src = data_->data() + last_[r] * cols_;
    std::copy(src, src + cols_, batch.data() + r * cols_);
  }
  return batch;
}

}  // namespace mixgan
