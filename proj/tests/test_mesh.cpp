#include <gtest/gtest.h>

#include <map>
#include <set>

#include "gridlift/error.hpp"
#include "gridlift/mesh.hpp"
#include "support.hpp"

using namespace gridlift;
using namespace testing_support;

namespace {

const FeatureStrategy kMean{FeatureKind::RgbMean, 3};

SparseCloud random_cloud(Gen& gen, std::size_t m, std::size_t n) {
  return build_sparse_cloud(random_image(gen, m, n), kMean);
}

}  // namespace

TEST(SparseCloud, BlackTwoByTwo) {
  const SparseCloud cloud = build_sparse_cloud(constant_image(2, 2, 0.0), kMean);
  ASSERT_EQ(cloud.size(), 4u);
  std::set<std::pair<double, double>> xy;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto p = cloud.point(k);
    EXPECT_EQ(p[2], 0.0);
    xy.insert({p[0], p[1]});
  }
  EXPECT_EQ(xy, (std::set<std::pair<double, double>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
}

TEST(SparseCloud, SingleWhitePixelCollapses) {
  const SparseCloud cloud = build_sparse_cloud(constant_image(1, 1, 1.0), kMean);
  ASSERT_EQ(cloud.size(), 1u);
  EXPECT_EQ(cloud.point(0)[0], 0.0);
  EXPECT_EQ(cloud.point(0)[1], 0.0);
  EXPECT_EQ(cloud.point(0)[2], 0.0);
}

TEST(SparseCloud, RampScalesToFootprint) {
  const ImageGrid ramp = image_from(3, 3, [](std::size_t, std::size_t j) {
    const double v = static_cast<double>(j) / 2.0;
    return std::array<double, 3>{v, v, v};
  });
  const SparseCloud cloud = build_sparse_cloud(ramp, kMean);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(cloud.feature({i, j}, 0), static_cast<double>(j));
    }
  }
}

TEST(SparseCloud, CartesianFlipAndProjection) {
  Gen gen(20);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = gen.index(1, 30), n = gen.index(1, 30);
    const SparseCloud cloud = random_cloud(gen, m, n);
    const double extent = static_cast<double>(std::max(m, n) - 1);
    std::set<std::pair<double, double>> footprint;
    for (std::size_t k = 0; k < cloud.size(); ++k) {
      const LatticeIndex p = cloud.project(k);
      EXPECT_EQ(cloud.point(k)[0], static_cast<double>(p.col));
      EXPECT_EQ(cloud.point(k)[1], static_cast<double>(m - 1 - p.row));
      EXPECT_GE(cloud.point(k)[2], 0.0);
      EXPECT_LE(cloud.point(k)[2], extent);
      footprint.insert({cloud.point(k)[0], cloud.point(k)[1]});
    }
    EXPECT_EQ(footprint.size(), m * n);
  }
}

TEST(SparseCloud, Deterministic) {
  Gen gen(21);
  const ImageGrid img = random_image(gen, 17, 9);
  for (int dims : {3, 4, 5}) {
    const FeatureStrategy s{FeatureKind::Fourier, dims};
    EXPECT_EQ(build_sparse_cloud(img, s), build_sparse_cloud(img, s));
  }
}

TEST(Adjacent, Examples) {
  const LatticeShape shape{3, 3};
  EXPECT_TRUE(adjacent(shape, {0, 0}, {0, 1}));
  EXPECT_FALSE(adjacent(shape, {0, 0}, {2, 0}));
  EXPECT_TRUE(adjacent(shape, {0, 0}, {0, 0}));
  EXPECT_TRUE(adjacent(shape, {1, 1}, {2, 2}));
  try {
    adjacent(shape, {0, 0}, {3, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
  }
}

TEST(Faces, SmallExamples) {
  Gen gen(22);
  EXPECT_EQ(build_faces(random_cloud(gen, 3, 3), FaceKind::Triangle).face_count(), 8u);
  EXPECT_EQ(build_faces(random_cloud(gen, 3, 3), FaceKind::Square).face_count(), 4u);
  EXPECT_EQ(build_faces(random_cloud(gen, 1, 5), FaceKind::Triangle).face_count(), 0u);
  EXPECT_EQ(build_faces(random_cloud(gen, 1, 5), FaceKind::Square).face_count(), 0u);
  EXPECT_EQ(build_faces(random_cloud(gen, 5, 1), FaceKind::Square).face_count(), 0u);

  const SurfaceMesh quad = build_faces(random_cloud(gen, 2, 2), FaceKind::Square);
  ASSERT_EQ(quad.face_count(), 1u);
  EXPECT_EQ(std::vector<std::uint32_t>(quad.face(0).begin(), quad.face(0).end()),
            (std::vector<std::uint32_t>{0, 1, 3, 2}));
  const SurfaceMesh tri = build_faces(random_cloud(gen, 2, 2), FaceKind::Triangle);
  EXPECT_EQ(tri.indices, (std::vector<std::uint32_t>{0, 1, 3, 0, 3, 2}));
}

TEST(Faces, CountsAdjacencyAndRegularity) {
  Gen gen(23);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = gen.index(2, 64), n = gen.index(2, 64);
    const SparseCloud cloud = build_sparse_cloud(constant_image(m, n, 0.5), kMean);
    const LatticeShape shape = cloud.shape();
    for (FaceKind kind : {FaceKind::Triangle, FaceKind::Square}) {
      const SurfaceMesh mesh = build_faces(cloud, kind);
      const std::size_t cells = (m - 1) * (n - 1);
      EXPECT_EQ(mesh.face_count(), kind == FaceKind::Triangle ? 2 * cells : cells);
      std::map<std::uint32_t, int> incidence;
      for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        const auto face = mesh.face(f);
        for (std::size_t a = 0; a < face.size(); ++a) {
          ++incidence[face[a]];
          for (std::size_t b = a + 1; b < face.size(); ++b) {
            ASSERT_NE(face[a], face[b]);
            ASSERT_TRUE(adjacent(shape, shape.unflatten(face[a]), shape.unflatten(face[b])));
          }
        }
      }
      for (std::size_t i = 1; i + 1 < m; ++i) {
        for (std::size_t j = 1; j + 1 < n; ++j) {
          EXPECT_EQ(incidence[static_cast<std::uint32_t>(shape.flatten({i, j}))],
                    kind == FaceKind::Triangle ? 6 : 4);
        }
      }
    }
  }
}

TEST(Faces, KindNames) {
  EXPECT_EQ(parse_face_kind("triangle"), FaceKind::Triangle);
  EXPECT_EQ(parse_face_kind("square"), FaceKind::Square);
  EXPECT_EQ(to_string(FaceKind::Triangle), "triangle");
  EXPECT_THROW(parse_face_kind("hexagon"), Error);
}
