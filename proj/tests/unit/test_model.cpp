#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "panoclust/errors.hpp"
#include "panoclust/spatial_grid.hpp"
#include "panoclust/voxel.hpp"
#include "test_support.hpp"

using namespace panoclust;

TEST(ValidateCloud, FinitePointsHaveNoViolations) {
  PointCloud cloud{{{1, 2, 3, 0}, {0, 0, 0, 0}, {-4, 5, 6, 1}}};
  EXPECT_TRUE(validate_cloud(cloud).empty());
}

TEST(ValidateCloud, NanCoordinateIsReportedAtItsIndex) {
  PointCloud cloud{{{1, 2, 3, 0}, {std::numeric_limits<float>::quiet_NaN(), 0, 0, 0}, {4, 5, 6, 0}}};
  const auto v = validate_cloud(cloud);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].index, 1u);
}

TEST(ValidateCloud, InfinityCountsToo) {
  PointCloud cloud{{{0, std::numeric_limits<float>::infinity(), 0, 0}, {0, 0, -std::numeric_limits<float>::infinity(), 0}}};
  EXPECT_EQ(validate_cloud(cloud).size(), 2u);
}

TEST(ValidateCloud, EmptyCloudIsValid) { EXPECT_TRUE(validate_cloud(PointCloud{}).empty()); }

TEST(VoxelDownsample, CoLocatedPairCollapses) {
  PointCloud cloud{{{0.01f, 0.01f, 0.01f, 0}, {0.05f, 0.02f, 0.03f, 0}}};
  const auto s = voxel_downsample(cloud, 0.1);
  ASSERT_EQ(s.sample.size(), 1u);
  EXPECT_EQ(s.members_of[0], (std::vector<std::size_t>{0, 1}));
}

TEST(VoxelDownsample, SeparatedPairStaysApart) {
  PointCloud cloud{{{0, 0, 0, 0}, {1, 0, 0, 0}}};
  EXPECT_EQ(voxel_downsample(cloud, 0.1).sample.size(), 2u);
}

TEST(VoxelDownsample, SampleSizeMatchesIndependentOccupancyCount) {
  const auto cloud = support::uniform_cloud(10000, 1.0, 42);
  const auto s = voxel_downsample(cloud, 0.1);
  EXPECT_EQ(s.sample.size(), oracle::voxel_count(cloud, 0.1));
}

TEST(VoxelDownsample, NonPositiveEdgeThrows) {
  PointCloud cloud{{{0, 0, 0, 0}}};
  EXPECT_THROW(voxel_downsample(cloud, 0.0), ParameterError);
  EXPECT_THROW(voxel_downsample(cloud, -1.0), ParameterError);
}

TEST(VoxelDownsample, RepresentativesAreMembersAndMembersPartition) {
  const auto cloud = support::uniform_cloud(3000, 2.0, 7);
  const auto s = voxel_downsample(cloud, 0.25, 99);
  std::vector<int> seen(cloud.size(), 0);
  for (std::size_t v = 0; v < s.members_of.size(); ++v) {
    const auto& m = s.members_of[v];
    EXPECT_NE(std::find(m.begin(), m.end(), s.representative_of[v]), m.end());
    EXPECT_EQ(s.sample[v], cloud[s.representative_of[v]]);
    for (const auto i : m) ++seen[i];
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}

TEST(VoxelDownsample, EdgeAtLeastTheDiagonalGivesOnePoint) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto cloud = support::uniform_cloud(200, 3.0 + double(seed), seed);
    double lo[3] = {1e9, 1e9, 1e9}, hi[3] = {-1e9, -1e9, -1e9};
    for (const auto& p : cloud.points) {
      const double c[3] = {p.x, p.y, p.z};
      for (int a = 0; a < 3; ++a) lo[a] = std::min(lo[a], c[a]), hi[a] = std::max(hi[a], c[a]);
    }
    const double diag = std::hypot(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]);
    EXPECT_EQ(voxel_downsample(cloud, diag).sample.size(), 1u);
  }
}

TEST(VoxelDownsample, FixedSeedIsDeterministicAndSeedMatters) {
  const auto cloud = support::uniform_cloud(5000, 1.0, 3);
  const auto a = voxel_downsample(cloud, 0.2, 5);
  const auto b = voxel_downsample(cloud, 0.2, 5);
  EXPECT_EQ(a.representative_of, b.representative_of);
  EXPECT_EQ(a.sample.points, b.sample.points);
  const auto c = voxel_downsample(cloud, 0.2, 6);
  EXPECT_NE(a.representative_of, c.representative_of);
}

TEST(PropagateLabels, OneVoxelThreeMembers) {
  EXPECT_EQ(propagate_labels({7}, {{0, 1, 2}}), (InstanceLabeling{7, 7, 7}));
}

TEST(PropagateLabels, TwoVoxelsInterleaved) {
  EXPECT_EQ(propagate_labels({1, 2}, {{0, 2}, {1}}), (InstanceLabeling{1, 2, 1}));
}

TEST(PropagateLabels, SizeMismatchThrows) {
  EXPECT_THROW(propagate_labels({1, 2}, {{0, 1}}), ParameterError);
}

TEST(PropagateLabels, RandomPartitionMatchesDirectLookup) {
  std::mt19937_64 rng(11);
  const std::size_t n = 500;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> group_of(n);
  for (std::size_t pos = 0; pos < n;) {
    const auto len = std::min<std::size_t>(1 + rng() % 9, n - pos);
    members.emplace_back(order.begin() + long(pos), order.begin() + long(pos + len));
    for (std::size_t k = pos; k < pos + len; ++k) group_of[order[k]] = members.size() - 1;
    pos += len;
  }
  InstanceLabeling sample(members.size());
  for (auto& l : sample) l = static_cast<Label>(rng() % 1000);
  const auto full = propagate_labels(sample, members);
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(full[i], sample[group_of[i]]);
}

TEST(PropagateLabels, ComposedWithDownsampleLabelsEveryPointOnce) {
  const auto cloud = support::uniform_cloud(2000, 1.5, 8);
  const auto s = voxel_downsample(cloud, 0.1);
  InstanceLabeling sample(s.sample.size());
  std::iota(sample.begin(), sample.end(), Label{1});
  const auto full = propagate_labels(sample, s.members_of);
  ASSERT_EQ(full.size(), cloud.size());
  for (std::size_t v = 0; v < s.members_of.size(); ++v)
    for (const auto i : s.members_of[v]) EXPECT_EQ(full[i], sample[v]);
}

TEST(SpatialGrid, RadiusQueryMatchesBruteForce) {
  const auto pts = support::positions_of(support::uniform_cloud(800, 5.0, 21));
  const SpatialGrid grid(pts, 0.4);
  for (std::size_t q = 0; q < pts.size(); q += 37) {
    for (const double r : {0.2, 0.4, 1.1}) {
      std::vector<std::size_t> got;
      grid.for_each_within(pts[q], r, [&](std::size_t i, double) { got.push_back(i); });
      std::sort(got.begin(), got.end());
      std::vector<std::size_t> want;
      for (std::size_t i = 0; i < pts.size(); ++i)
        if ((pts[i] - pts[q]).norm() < r) want.push_back(i);
      EXPECT_EQ(got, want);
    }
  }
}

TEST(SpatialGrid, NearestMatchesSortedBruteForce) {
  const auto pts = support::positions_of(support::uniform_cloud(600, 4.0, 5));
  const SpatialGrid grid(pts, 0.3);
  for (std::size_t q = 0; q < pts.size(); q += 29) {
    std::vector<std::size_t> all(pts.size());
    std::iota(all.begin(), all.end(), 0);
    std::sort(all.begin(), all.end(), [&](std::size_t a, std::size_t b) {
      const double da = (pts[a] - pts[q]).squared_norm(), db = (pts[b] - pts[q]).squared_norm();
      return da != db ? da < db : a < b;
    });
    all.resize(10);
    EXPECT_EQ(grid.nearest(pts[q], 10), all);
  }
}

TEST(SpatialGrid, NearestReturnsEverythingWhenKExceedsSize) {
  const std::vector<Vec3> pts{{0, 0, 0}, {10, 0, 0}, {0, 30, 0}};
  const SpatialGrid grid(pts, 0.5);
  EXPECT_EQ(grid.nearest({1, 0, 0}, 10), (std::vector<std::size_t>{0, 1, 2}));
}
