#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "panoclust/errors.hpp"
#include "panoclust/slr.hpp"
#include "panoclust/synth.hpp"
#include "test_support.hpp"

using namespace panoclust;

namespace {

using Row = std::vector<std::optional<Point3>>;

// Points on a flat patch 10 m ahead; neighboring columns and rows are 0.3 m apart.
RangeImage patch_image(int rows, int cols, const std::vector<std::vector<int>>& occupied_columns) {
  std::vector<std::optional<Point3>> pixels(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (const int c : occupied_columns[r])
      pixels[static_cast<std::size_t>(r) * cols + c] = Point3{10.0f, 0.3f * c, -0.3f * r, 0};
  return RangeImage::from_pixels(ProjectionConfig{rows, cols, 3, -25}, pixels);
}

std::vector<int> span(int from, int to) {
  std::vector<int> out;
  for (int c = from; c <= to; ++c) out.push_back(c);
  return out;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST(LabelStore, SmallerRootWins) {
  LabelStore s;
  const auto a = s.make(), b = s.make(), c = s.make();
  EXPECT_EQ(s.merge(c, b), b);
  EXPECT_EQ(s.find(c), b);
  EXPECT_EQ(s.merge(b, a), a);
  EXPECT_EQ(s.find(c), a);
  EXPECT_EQ(s.find(s.find(c)), s.find(c));
  EXPECT_EQ(s.size(), 3u);
}

TEST(FindRuns, SplitsOnRangeJump) {
  Row row{Point3{5.0f, 0, 0, 0}, Point3{5.2f, 0.001f, 0, 0}, Point3{9.0f, 0.002f, 0, 0}, Point3{9.1f, 0.003f, 0, 0}};
  const auto runs = find_runs(row);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].columns, (std::vector<int>{0, 1}));
  EXPECT_EQ(runs[1].columns, (std::vector<int>{2, 3}));
}

TEST(FindRuns, CloseNeighborsFormOneRun) {
  Row row;
  for (int c = 0; c < 20; ++c) row.push_back(Point3{10.0f, 0.2f * c, 0, 0});
  const auto runs = find_runs(row);
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].columns.size(), 20u);
}

TEST(FindRuns, EmptyRowHasNoRuns) {
  EXPECT_TRUE(find_runs(Row(16)).empty());
  EXPECT_TRUE(find_runs(Row{}).empty());
}

TEST(FindRuns, GapsUpToMaxGapAreBridged) {
  Row row(20);
  row[0] = Point3{10.0f, 0.0f, 0, 0};
  row[4] = Point3{10.0f, 0.1f, 0, 0};   // 3 empty columns
  row[12] = Point3{10.0f, 0.2f, 0, 0};  // 7 empty columns
  SlrParams p;
  p.max_gap = 5;
  const auto runs = find_runs(row, p);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].columns, (std::vector<int>{0, 4}));
  EXPECT_EQ(runs[1].columns, (std::vector<int>{12}));
}

TEST(FindRuns, RowIsCircular) {
  Row row(10);
  row[0] = Point3{10.0f, 0.0f, 0, 0};
  row[1] = Point3{10.0f, 0.1f, 0, 0};
  row[5] = Point3{30.0f, 0.0f, 0, 0};
  row[9] = Point3{10.0f, -0.1f, 0, 0};
  const auto runs = find_runs(row);
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].columns, (std::vector<int>{9, 0, 1}));
  EXPECT_EQ(runs[1].columns, (std::vector<int>{5}));
}

TEST(FindRuns, ScalarRangeModeIgnoresDirection) {
  // Equal range, opposite azimuth.
  Row row{Point3{10.0f, 0, 0, 0}, Point3{-10.0f, 0, 0, 0}};
  SlrParams p;
  EXPECT_EQ(find_runs(row, p).size(), 2u);
  p.use_range_scalar = true;
  EXPECT_EQ(find_runs(row, p).size(), 1u);
}

TEST(SlrParams, Validation) {
  EXPECT_THROW((SlrParams{0.0}.validate()), ParameterError);
  EXPECT_THROW((SlrParams{0.5, 0.0}.validate()), ParameterError);
  EXPECT_THROW((SlrParams{0.5, 1.0, 0}.validate()), ParameterError);
  EXPECT_NO_THROW(SlrParams{}.validate());
}

TEST(SlrCluster, ThreeRowMergeTakesTheSmallerLabel) {
  // Row 0: run1 (C1), run2 (C2). Row 1: run3 under run1, run4 under run2,
  // run5 far away (C3). Row 2: one run touching both C1 and C2.
  const auto image = patch_image(3, 40, {concat(span(2, 6), span(12, 16)),
                                         concat(concat(span(2, 6), span(12, 16)), span(24, 27)),
                                         span(4, 14)});
  const auto labels = slr_cluster(image);
  for (const int c : concat(span(2, 6), span(12, 16))) {
    EXPECT_EQ(labels.at(0, c), 1u) << "row 0 col " << c;
    EXPECT_EQ(labels.at(1, c), 1u) << "row 1 col " << c;
  }
  for (const int c : span(24, 27)) EXPECT_EQ(labels.at(1, c), 3u);
  for (const int c : span(4, 14)) EXPECT_EQ(labels.at(2, c), 1u);
  EXPECT_EQ(oracle::count_clusters(labels.data()), 2u);
}

TEST(SlrCluster, BeforeTheThirdRowTheClustersAreSeparate) {
  const auto image = patch_image(2, 40, {concat(span(2, 6), span(12, 16)),
                                         concat(concat(span(2, 6), span(12, 16)), span(24, 27))});
  const auto labels = slr_cluster(image);
  EXPECT_EQ(labels.at(1, 3), 1u);
  EXPECT_EQ(labels.at(1, 13), 2u);
  EXPECT_EQ(labels.at(1, 25), 3u);
}

TEST(SlrCluster, FlatWallIsOneCluster) {
  const auto image = support::image_from_ranges(ProjectionConfig{64, 512, 3, -25}, [](int, int) { return 8.0; });
  EXPECT_EQ(oracle::count_clusters(slr_cluster(image).data()), 1u);
}

TEST(SlrCluster, MakeUpSearchReachesTwoRowsUp) {
  // Row 1 is empty under the patch, so row 2 can only join row 0 via the make-up search.
  const auto image = patch_image(3, 20, {span(2, 8), span(14, 16), span(2, 8)});
  SlrStats stats;
  auto labels = slr_cluster(image, SlrParams{}, &stats);
  EXPECT_EQ(labels.at(2, 5), labels.at(0, 5));
  EXPECT_GE(stats.makeup_triggers, 1u);
  SlrParams off;
  off.makeup_search = false;
  labels = slr_cluster(image, off);
  EXPECT_NE(labels.at(2, 5), labels.at(0, 5));
}

TEST(SlrCluster, MatchesRunMergeGraphOracle) {
  const ProjectionConfig cfg{64, 256, 3, -25};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto image = random_dense_image(cfg, seed);
    for (const bool makeup : {true, false}) {
      SlrParams p;
      p.makeup_search = makeup;
      oracle::SlrGraphOptions o;
      o.makeup = makeup;
      EXPECT_TRUE(oracle::same_partition(slr_cluster(image, p).data(), oracle::slr_graph_components(image, o)))
          << "seed " << seed << " makeup " << makeup;
    }
  }
}

TEST(SlrCluster, MatchesOracleOnSparseImages) {
  const ProjectionConfig cfg{32, 128, 3, -25};
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto dense = random_dense_image(cfg, seed);
    std::vector<std::optional<Point3>> pixels(static_cast<std::size_t>(cfg.rows) * cfg.cols);
    for (int r = 0; r < cfg.rows; ++r)
      for (int c = 0; c < cfg.cols; ++c)
        if (rng() % 4 != 0) pixels[static_cast<std::size_t>(r) * cfg.cols + c] = dense.point(r, c);
    const auto image = RangeImage::from_pixels(cfg, pixels);
    EXPECT_TRUE(oracle::same_partition(slr_cluster(image).data(), oracle::slr_graph_components(image, {})))
        << "seed " << seed;
  }
}

TEST(SlrCluster, ClusterIdsAreTheirEarliestRunLabel) {
  // Fresh labels are handed out in raster order, so with smaller-wins merging
  // each cluster's first appearance in raster order comes in increasing id order.
  const ProjectionConfig cfg{64, 256, 3, -25};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto labels = slr_cluster(random_dense_image(cfg, seed)).data();
    std::set<Label> seen;
    Label last = 0;
    for (const auto l : labels) {
      if (l == 0 || !seen.insert(l).second) continue;
      EXPECT_GT(l, last);
      last = l;
    }
    EXPECT_EQ(*seen.begin(), 1u);
  }
}

TEST(SlrCluster, OutputLabelsAreRoots) {
  // Reclustering the partition as a union-find forest: every label must be the
  // minimum of the ids it is connected to through the run graph.
  const ProjectionConfig cfg{64, 256, 3, -25};
  const auto image = random_dense_image(cfg, 12);
  const auto labels = slr_cluster(image).data();
  const auto oracle_labels = oracle::slr_graph_components(image, {});
  std::map<Label, Label> min_of_component;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) continue;
    auto [it, fresh] = min_of_component.try_emplace(oracle_labels[i], labels[i]);
    it->second = std::min(it->second, labels[i]);
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != 0) EXPECT_EQ(labels[i], min_of_component[oracle_labels[i]]);
}

TEST(SlrCluster, QueryCountersStayLinear) {
  const ProjectionConfig cfg{64, 512, 3, -25};
  const auto image = random_dense_image(cfg, 2);
  SlrStats stats;
  slr_cluster(image, SlrParams{}, &stats);
  std::size_t below_first_row = 0;
  for (int r = 1; r < cfg.rows; ++r)
    for (int c = 0; c < cfg.cols; ++c) below_first_row += image.occupied(r, c);
  EXPECT_EQ(stats.nn_queries, below_first_row);
  EXPECT_LE(stats.makeup_queries, below_first_row);
  EXPECT_LE(stats.makeup_triggers, stats.runs);
  EXPECT_LE(stats.nn_queries + stats.makeup_queries, 2 * image.occupied_count());
}
