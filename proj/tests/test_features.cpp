#include <gtest/gtest.h>

#include <cmath>

#include "gridlift/error.hpp"
#include "gridlift/features.hpp"
#include "support.hpp"

using namespace gridlift;
using namespace testing_support;

TEST(RgbMean, PixelExamples) {
  const ImageGrid px(1, 1, 3, {30.0 / 255, 60.0 / 255, 90.0 / 255});
  EXPECT_NEAR(z_rgb_mean(px).at(0, 0), 60.0 / 255, 1e-15);

  const FeatureField white = z_rgb_mean(constant_image(4, 5, 1.0));
  for (double v : white.values()) EXPECT_EQ(v, 1.0);
}

TEST(RgbMean, MatchesPerPixelOracle) {
  Gen gen(101);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t k = trial % 4 == 0 ? 1 : 3;
    const ImageGrid img = random_image(gen, gen.index(1, 12), gen.index(1, 12), k);
    const FeatureField z = z_rgb_mean(img);
    const auto want = mean_oracle(img);
    ASSERT_EQ(z.values().size(), want.size());
    for (std::size_t p = 0; p < want.size(); ++p) EXPECT_NEAR(z.values()[p], want[p], 1e-12);
  }
}

TEST(Fourier, ConstantTwoByTwo) {
  const double c = 0.4;
  const FeatureField raw = z_fourier_raw(constant_image(2, 2, c));
  EXPECT_NEAR(raw.at(0, 0), 4 * c * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(raw.at(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(raw.at(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(raw.at(1, 1), 0.0, 1e-12);
}

TEST(Fourier, AllZeroImageGivesZeroField) {
  const FeatureField z = z_fourier(constant_image(5, 3, 0.0));
  for (double v : z.values()) EXPECT_EQ(v, 0.0);
}

TEST(Fourier, RawMatchesNaiveDft) {
  Gen gen(7);
  const std::pair<std::size_t, std::size_t> shapes[] = {{4, 4}, {1, 1}, {1, 7}, {5, 3}, {8, 6}, {9, 9}};
  for (auto [m, n] : shapes) {
    for (std::size_t k : {1u, 3u}) {
      const ImageGrid img = random_image(gen, m, n, k);
      const auto want = naive_dft_magnitude(img);
      const FeatureField raw = z_fourier_raw(img);
      for (std::size_t p = 0; p < want.size(); ++p) {
        EXPECT_NEAR(raw.values()[p], want[p], 1e-9) << m << "x" << n << " bin " << p;
      }
    }
  }
}

TEST(Fourier, RawFieldIsLinearInScale) {
  Gen gen(8);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t m = gen.index(1, 10), n = gen.index(1, 10);
    const ImageGrid img = random_image(gen, m, n);
    const double s = gen.uniform(0.05, 1.0);
    std::vector<double> scaled(img.values().begin(), img.values().end());
    for (double& v : scaled) v *= s;
    const FeatureField a = z_fourier_raw(img);
    const FeatureField b = z_fourier_raw(ImageGrid(m, n, 3, scaled));
    for (std::size_t p = 0; p < m * n; ++p) {
      EXPECT_NEAR(b.values()[p], s * a.values()[p], 1e-9 * (1.0 + a.values()[p]));
    }
  }
}

TEST(Fourier, NormalizedFieldSpansUnitRange) {
  Gen gen(9);
  const FeatureField z = z_fourier(random_image(gen, 16, 16));
  double lo = 1.0, hi = 0.0;
  for (double v : z.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_EQ(lo, 0.0);
  EXPECT_EQ(hi, 1.0);
  EXPECT_EQ(z.at(0, 0), 1.0);
}

TEST(Channel, PixelExamples) {
  const ImageGrid a(1, 1, 3, {0.2, 0.5, 0.9});
  EXPECT_EQ(z_channel(a, ChannelKind::HsvValue).at(0, 0), 0.9);
  EXPECT_EQ(z_channel(constant_image(1, 1, 1.0), ChannelKind::Brightness).at(0, 0), 1.0);
  const ImageGrid red(1, 1, 3, {1.0, 0.0, 0.0});
  EXPECT_NEAR(z_channel(red, ChannelKind::Brightness).at(0, 0), std::sqrt(0.299), 1e-15);
  EXPECT_NEAR(z_channel(red, ChannelKind::Grayscale).at(0, 0), 0.299, 1e-15);
}

TEST(Channel, AchromaticPixelsAgreeAcrossStrategies) {
  Gen gen(10);
  for (int trial = 0; trial < 2000; ++trial) {
    const double v = trial < 256 ? trial / 255.0 : gen.uniform();
    const ImageGrid px = constant_image(1, 1, v);
    EXPECT_EQ(z_rgb_mean(px).at(0, 0), v);
    EXPECT_EQ(z_channel(px, ChannelKind::Grayscale).at(0, 0), v);
    EXPECT_EQ(z_channel(px, ChannelKind::Brightness).at(0, 0), v);
    EXPECT_EQ(z_channel(px, ChannelKind::HsvValue).at(0, 0), v);
  }
}

TEST(Multidim, ChannelOrderAndErrors) {
  const ImageGrid px(1, 1, 3, {0.1, 0.4, 0.7});
  const FeatureField four = lift_multidim(px, 4);
  ASSERT_EQ(four.depth(), 2u);
  EXPECT_EQ(four.at(0, 0, 0), 0.1);
  EXPECT_EQ(four.at(0, 0, 1), 0.7);
  const FeatureField five = lift_multidim(px, 5);
  ASSERT_EQ(five.depth(), 3u);
  EXPECT_EQ(five.at(0, 0, 0), 0.1);
  EXPECT_EQ(five.at(0, 0, 1), 0.4);
  EXPECT_EQ(five.at(0, 0, 2), 0.7);
  EXPECT_THROW(lift_multidim(px, 6), Error);
  try {
    lift_multidim(px, 6);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDims);
  }
}

TEST(Multidim, CopiesIngestChannelsBitForBit) {
  Gen gen(12);
  const ImageGrid img = random_image(gen, 7, 9);
  const FeatureField five = lift_multidim(img, 5);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(five.at(i, j, c), img.at(i, j, c));
    }
  }
}

TEST(Strategy, ExtractStaysInUnitRange) {
  Gen gen(13);
  const FeatureKind kinds[] = {FeatureKind::RgbMean, FeatureKind::Fourier, FeatureKind::Brightness,
                               FeatureKind::Grayscale, FeatureKind::HsvValue};
  for (int trial = 0; trial < 10; ++trial) {
    const ImageGrid img = random_image(gen, gen.index(1, 20), gen.index(1, 20));
    for (FeatureKind kind : kinds) {
      for (int dims : {3, 4, 5}) {
        const FeatureField f = extract_features(img, {kind, dims});
        EXPECT_EQ(f.depth(), static_cast<std::size_t>(dims - 2));
        for (double v : f.values()) {
          EXPECT_GE(v, 0.0);
          EXPECT_LE(v, 1.0);
        }
      }
    }
  }
}

TEST(Strategy, NamesAndLabels) {
  for (const char* name : {"rgb-mean", "fourier", "brightness", "grayscale", "hsv-v"}) {
    EXPECT_EQ(to_string(parse_feature_kind(name)), name);
  }
  EXPECT_THROW(parse_feature_kind("sepia"), Error);
  EXPECT_EQ((FeatureStrategy{FeatureKind::HsvValue, 3}.label()), "hsv-v");
  EXPECT_EQ((FeatureStrategy{FeatureKind::HsvValue, 4}.label()), "rb-4d");
  EXPECT_EQ((FeatureStrategy{FeatureKind::RgbMean, 5}.label()), "rgb-5d");
  EXPECT_THROW((FeatureStrategy{FeatureKind::RgbMean, 2}.validate()), Error);
}
