#include <gtest/gtest.h>

#include <set>

#include "panoclust/errors.hpp"
#include "panoclust/params.hpp"
#include "test_support.hpp"

using namespace panoclust;

TEST(Algorithm, NamesRoundTrip) {
  for (const auto a : {Algorithm::euclidean, Algorithm::supervoxel, Algorithm::depth, Algorithm::slr})
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_THROW(parse_algorithm("kmeans"), ParameterError);
}

TEST(Settings, DefaultsMatchTheReferenceConfiguration) {
  const Settings s;
  EXPECT_EQ(s.algorithm, Algorithm::slr);
  EXPECT_DOUBLE_EQ(s.euclidean.d_th, 0.5);
  EXPECT_DOUBLE_EQ(s.euclidean.voxel_edge, 0.1);
  EXPECT_DOUBLE_EQ(s.supervoxel.w_s, 1.0);
  EXPECT_DOUBLE_EQ(s.supervoxel.w_n, 0.0);
  EXPECT_DOUBLE_EQ(s.supervoxel.voxel_resolution, 0.5);
  EXPECT_DOUBLE_EQ(s.supervoxel.seed_resolution, 8.0);
  EXPECT_DOUBLE_EQ(s.depth.theta_deg, 10.0);
  EXPECT_DOUBLE_EQ(s.slr.th_run, 0.5);
  EXPECT_DOUBLE_EQ(s.slr.th_merge, 1.0);
  EXPECT_EQ(s.projection.rows, 64);
  EXPECT_EQ(s.projection.cols, 2048);
  EXPECT_TRUE(s.per_class);
  EXPECT_FALSE(s.majority_vote);
  EXPECT_EQ(s.min_points, 50u);
}

TEST(Settings, ClusterParamsFollowTheAlgorithm) {
  Settings s;
  s.algorithm = Algorithm::depth;
  s.depth.theta_deg = 12;
  const auto p = s.cluster_params();
  ASSERT_TRUE(std::holds_alternative<DepthParams>(p));
  EXPECT_DOUBLE_EQ(std::get<DepthParams>(p).theta_deg, 12);
  EXPECT_EQ(algorithm_of(p), Algorithm::depth);
}

TEST(Settings, EveryKeyIsSettableAndDescribed) {
  const auto& keys = setting_keys();
  EXPECT_EQ(std::set<std::string>(keys.begin(), keys.end()).size(), keys.size());
  const auto described = describe(Settings{});
  ASSERT_EQ(described.size(), keys.size());
  // Writing back what describe reports leaves the settings unchanged.
  Settings s;
  for (const auto& [k, v] : described) apply_setting(s, k, v);
  EXPECT_EQ(describe(s), described);
}

TEST(Settings, ApplySettingParsesTypes) {
  Settings s;
  apply_setting(s, "algorithm", "euclidean");
  apply_setting(s, "euclidean.d_th", "0.75");
  apply_setting(s, "euclidean.seed", "123");
  apply_setting(s, "slr.use_range_scalar", "true");
  apply_setting(s, "pipeline.per_class", "off");
  apply_setting(s, "cols", " 1024 ");
  EXPECT_EQ(s.algorithm, Algorithm::euclidean);
  EXPECT_DOUBLE_EQ(s.euclidean.d_th, 0.75);
  EXPECT_EQ(s.euclidean.seed, 123u);
  EXPECT_TRUE(s.slr.use_range_scalar);
  EXPECT_FALSE(s.per_class);
  EXPECT_EQ(s.projection.cols, 1024);
}

TEST(Settings, ErrorsNameTheKey) {
  Settings s;
  for (const auto& [key, value] : std::vector<std::pair<std::string, std::string>>{
           {"depth.theta", "10"}, {"depth.theta_deg", "ten"}, {"slr.makeup_search", "maybe"}, {"algorithm", "x"}}) {
    try {
      apply_setting(s, key, value);
      FAIL() << key;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(key), std::string::npos) << e.what();
    }
  }
}

TEST(Settings, ParseSettingsText) {
  const auto s = parse_settings(
      "# comment\n"
      "algorithm = depth   # trailing comment\n"
      "\n"
      "depth.max_skip=3\n");
  EXPECT_EQ(s.algorithm, Algorithm::depth);
  EXPECT_EQ(s.depth.max_skip, 3);
  EXPECT_THROW(parse_settings("algorithm depth\n"), ConfigError);
}

TEST(Settings, ValidateRejectsBadValues) {
  Settings s;
  s.workers = 0;
  EXPECT_THROW(s.validate(), ParameterError);
  s = {};
  s.repetitions = 0;
  EXPECT_THROW(s.validate(), ParameterError);
  s = {};
  s.slr.th_merge = -1;
  EXPECT_THROW(s.validate(), ParameterError);
}

TEST(Settings, ShippedDefaultFileEqualsBuiltInDefaults) {
  const auto s = load_settings(std::filesystem::path(PANOCLUST_SOURCE_DIR) / "config" / "default.cfg");
  EXPECT_EQ(describe(s), describe(Settings{}));
}

TEST(Settings, MapOverridesBase) {
  Settings base;
  base.algorithm = Algorithm::supervoxel;
  const auto s = settings_from_map({{"supervoxel.w_n", "0.5"}}, base);
  EXPECT_EQ(s.algorithm, Algorithm::supervoxel);
  EXPECT_DOUBLE_EQ(s.supervoxel.w_n, 0.5);
}
