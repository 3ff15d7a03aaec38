#include <cmath>
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "mixgan/checkpoint.hpp"
#include "mixgan/errors.hpp"
#include "mixgan/models.hpp"
#include "test_util.hpp"

namespace {

using mixgan::Activation;
using mixgan::MlpSpec;
using mixgan::Tensor;

const MlpSpec kMnistGenerator{{100, 240, 784}, Activation::kRelu, Activation::kSigmoid};

TEST(Models, GeneratorParameterCount) {
  EXPECT_EQ(mixgan::parameter_count(kMnistGenerator), 100u * 240 + 240 + 240 * 784 + 784);
  EXPECT_EQ(mixgan::parameter_count(kMnistGenerator), 213184u);
  EXPECT_EQ(mixgan::build_generator(kMnistGenerator, 1).parameter_count(), 213184u);
}

TEST(Models, DiscriminatorMirrorsGenerator) {
  auto spec = mixgan::discriminator_spec(kMnistGenerator);
  EXPECT_EQ(spec.layer_sizes, (std::vector<std::size_t>{784, 240, 1}));
  EXPECT_EQ(spec.output_activation, Activation::kSigmoid);
  EXPECT_EQ(mixgan::parameter_count(spec), 188641u);
}

TEST(Models, DefaultFullModelBudget) {
  const auto g = mixgan::parameter_count(kMnistGenerator);
  const auto d = mixgan::parameter_count(mixgan::discriminator_spec(kMnistGenerator));
  const auto total = 2 * g + 2 * d;
  EXPECT_EQ(total, 803650u);
  EXPECT_GE(total, 720000u);
  EXPECT_LE(total, 880000u);
}

TEST(Models, CountIsAdditiveOverLayers) {
  MlpSpec s{{5, 7, 3, 2}};
  EXPECT_EQ(mixgan::parameter_count(s), (5u * 7 + 7) + (7 * 3 + 3) + (3 * 2 + 2));
}

TEST(Models, SpecValidation) {
  EXPECT_THROW(mixgan::build_generator(MlpSpec{{4, 0, 2}}, 0), mixgan::SpecError);
  EXPECT_THROW(mixgan::build_generator(MlpSpec{{4}}, 0), mixgan::SpecError);
}

TEST(Models, SeedDeterminism) {
  auto a = mixgan::build_generator(kMnistGenerator, 11);
  auto b = mixgan::build_generator(kMnistGenerator, 11);
  auto c = mixgan::build_generator(kMnistGenerator, 12);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
}

TEST(Models, GlorotBoundsAndZeroBias) {
  auto g = mixgan::build_generator(MlpSpec{{10, 30, 4}}, 5);
  for (const auto& layer : g.layers()) {
    const double fan_in = layer.weight.dim(0), fan_out = layer.weight.dim(1);
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (double w : layer.weight.values()) {
      EXPECT_GE(w, -limit);
      EXPECT_LE(w, limit);
    }
    for (double b : layer.bias.values()) EXPECT_EQ(b, 0.0);
  }
}

TEST(Models, ZeroGeneratorOutputsHalf) {
  mixgan::Mlp g(kMnistGenerator);
  mixgan::LatentSampler z(100, 3);
  auto out = g.forward(z.sample(5));
  EXPECT_EQ(out.shape(), (mixgan::Shape{5, 784}));
  for (double v : out.values()) EXPECT_EQ(v, 0.5);
}

TEST(Models, DiscriminatorOutputInUnitInterval) {
  MlpSpec gen{{3, 8, 2}, Activation::kRelu, Activation::kIdentity};
  auto d = mixgan::build_discriminator(gen, 4);
  Tensor x({200, 2});
  mixgan::Rng r(1);
  for (double& v : x.values()) v = r.uniform(-50, 50);
  auto out = d.forward(x);
  EXPECT_EQ(out.shape(), (mixgan::Shape{200, 1}));
  for (double v : out.values()) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

TEST(Models, TapedForwardMatchesPlainForward) {
  auto g = mixgan::build_generator(MlpSpec{{4, 6, 3}, Activation::kRelu, Activation::kIdentity}, 8);
  mixgan::LatentSampler z(4, 9);
  auto batch = z.sample(7);
  mixgan::Tape t;
  auto bound = g.bind(t);
  EXPECT_EQ(bound.forward(t.leaf(batch)).value(), g.forward(batch));
  EXPECT_EQ(bound.parameters().size(), 4u);
}

TEST(Latent, BoundsOverMillionDraws) {
  mixgan::LatentSampler z(100, 21);
  double lo = 1, hi = -1, sum = 0.0;
  const std::size_t rows = 10000;
  auto s = z.sample(rows);
  for (double v : s.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  EXPECT_GE(lo, -1.0);
  EXPECT_LT(hi, 1.0);
  const double n = static_cast<double>(s.size());
  EXPECT_LE(std::abs(sum / n), 3.0 * std::sqrt(1.0 / 3.0) / std::sqrt(n));
}

TEST(Latent, SameSeedSameBatch) {
  mixgan::LatentSampler a(8, 77), b(8, 77);
  EXPECT_EQ(a.sample(4), b.sample(4));
  EXPECT_THROW(a.sample(0), mixgan::ContractError);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  auto g = mixgan::build_generator(MlpSpec{{3, 5, 2}, Activation::kRelu, Activation::kIdentity}, 2);
  std::vector<mixgan::NamedTensor> tensors;
  mixgan::append_mlp("g1", g, tensors);
  tensors.push_back({"odd", Tensor::vector({-0.0, 1e-310, 1.0 / 3.0})});
  auto bytes = mixgan::encode_checkpoint(tensors);
  auto back = mixgan::decode_checkpoint(bytes);
  ASSERT_EQ(back.size(), tensors.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].name, tensors[i].name);
    EXPECT_EQ(back[i].tensor.shape(), tensors[i].tensor.shape());
    EXPECT_EQ(std::memcmp(back[i].tensor.data(), tensors[i].tensor.data(),
                          tensors[i].tensor.size() * sizeof(double)),
              0);
  }
  EXPECT_TRUE(mixgan::extract_mlp("g1", back) == g);
  EXPECT_TRUE(mixgan::has_mlp("g1", back));
  EXPECT_FALSE(mixgan::has_mlp("g2", back));
}

TEST(Checkpoint, FileRoundTrip) {
  testutil::TempDir dir;
  auto d = mixgan::build_discriminator(MlpSpec{{3, 5, 2}}, 4);
  std::vector<mixgan::NamedTensor> tensors;
  mixgan::append_mlp("h", d, tensors);
  mixgan::write_checkpoint(dir / "c.mggan", tensors);
  EXPECT_TRUE(mixgan::extract_mlp("h", mixgan::read_checkpoint(dir / "c.mggan")) == d);
}

TEST(Checkpoint, RejectsBadMagicAndTruncation) {
  std::vector<mixgan::NamedTensor> tensors{{"w", Tensor::vector({1, 2, 3})}};
  auto bytes = mixgan::encode_checkpoint(tensors);
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(mixgan::decode_checkpoint(bad), mixgan::FormatError);
  for (std::size_t cut : {bytes.size() - 1, bytes.size() - 9, std::size_t{8}}) {
    std::vector<std::uint8_t> shortened(bytes.begin(), bytes.begin() + static_cast<long>(cut));
    EXPECT_THROW(mixgan::decode_checkpoint(shortened), mixgan::LengthError) << cut;
  }
}

}  // namespace
