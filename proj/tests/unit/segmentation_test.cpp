#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vinsta/error.hpp"
#include "vinsta/segmentation.hpp"

namespace vinsta::segmentation {
namespace {

using testing::make_seq;

// Three frames, two identical and one 5 units away.
FrameEmbeddingSeq two_plus_one() {
  return make_seq({{0.0, 0.0}, {0.0, 0.0}, {5.0, 0.0}});
}

TEST(Density, MatchesHandComputedValues) {
  const auto rho = compute_density(two_plus_one(), 1);
  ASSERT_EQ(rho.size(), 3u);
  EXPECT_DOUBLE_EQ(rho[0], 1.0);
  EXPECT_DOUBLE_EQ(rho[1], 1.0);
  EXPECT_DOUBLE_EQ(rho[2], std::exp(-25.0));
}

TEST(Delta, FallsBackToFarthestForDensestFrames) {
  const auto seq = two_plus_one();
  const auto delta = compute_delta(seq, compute_density(seq, 1));
  EXPECT_EQ(delta, (std::vector<double>{25.0, 25.0, 25.0}));
}

TEST(Delta, SingleFrame) {
  const auto seq = make_seq({{1.0}});
  EXPECT_EQ(compute_delta(seq, {1.0}), std::vector<double>{0.0});
}

TEST(Density, RejectsBadNeighbourCount) {
  EXPECT_THROW(compute_density(two_plus_one(), 0), ParameterError);
  EXPECT_THROW(compute_density(two_plus_one(), 3), ParameterError);
}

TEST(Centers, LowerIndexWinsTies) {
  const auto profile = compute_profile(two_plus_one(), 1);
  EXPECT_EQ(select_centers(profile, 2), (std::vector<std::size_t>{0, 1}));
  EXPECT_THROW(select_centers(profile, 4), ParameterError);
}

TEST(Cdpcknn, SplitsAtLowDensityFrame) {
  SegmentationConfig config{Method::cdpcknn, 2, 1, 0};
  const auto result = segment_cdpcknn(two_plus_one(), config);
  EXPECT_EQ(result.partition.boundaries, std::vector<std::size_t>{2});
  EXPECT_EQ(result.centers, (std::vector<std::size_t>{0, 1}));
  // Both centers sit in the first event.
  ASSERT_EQ(result.warnings.size(), 1u);
}

TEST(Cdpcknn, TwoBlobsWithDisplacedFrame) {
  testing::Frames frames;
  for (int i = 0; i < 6; ++i) frames.push_back({0.01 * i, 0.0});
  for (int i = 0; i < 6; ++i) frames.push_back({10.0 + 0.01 * i, 0.0});
  frames[6] = {5.0, 5.0};
  const auto result = segment_cdpcknn(make_seq(frames), {Method::cdpcknn, 2, {}, 0});
  EXPECT_EQ(result.partition.boundaries, std::vector<std::size_t>{6});
}

TEST(Cdpcknn, InfeasibleWhenMoreEventsThanFrames) {
  EXPECT_THROW(segment_cdpcknn(two_plus_one(), {Method::cdpcknn, 4, 1, 0}), InfeasiblePartitionError);
  EXPECT_THROW(segment_cdpcknn(two_plus_one(), {Method::cdpcknn, 0, 1, 0}), ParameterError);
}

TEST(Cdpcknn, OneEventPerFrame) {
  const auto result = segment_cdpcknn(two_plus_one(), {Method::cdpcknn, 3, 1, 0});
  EXPECT_EQ(result.partition.boundaries, (std::vector<std::size_t>{1, 2}));
}

TEST(Cdpcknn, SingleFrameSingleEvent) {
  const auto result = segment(make_seq({{1.0, 2.0}}), {Method::cdpcknn, 1, {}, 0});
  EXPECT_TRUE(result.partition.boundaries.empty());
  EXPECT_EQ(result.centers, std::vector<std::size_t>{0});
}

TEST(Candidates, PlateauAndLastIndex) {
  EXPECT_EQ(boundary_candidates({1.0, 0.5, 0.5, 0.9}, 1), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(boundary_candidates({1.0, 0.9, 0.8}, 1), std::vector<std::size_t>{2});
  // Not enough minima: every interior index qualifies.
  EXPECT_EQ(boundary_candidates({1.0, 0.9, 0.8}, 2), (std::vector<std::size_t>{1, 2}));
}

TEST(Uniform, RemainderGoesToLeadingEvents) {
  testing::Frames frames(10, std::vector<double>{0.0});
  for (std::size_t i = 0; i < 10; ++i) frames[i][0] = static_cast<double>(i);
  const auto seq = make_seq(frames);
  EXPECT_EQ(segment_uniform(seq, 2).partition.boundaries, std::vector<std::size_t>{5});
  EXPECT_EQ(segment_uniform(seq, 3).partition.boundaries, (std::vector<std::size_t>{4, 7}));
  EXPECT_THROW(segment_uniform(seq, 11), ParameterError);
}

TEST(Dpcknn, IdenticalFramesBecomeSingletons) {
  const auto seq = make_seq({{1.0, 1.0}, {1.0, 1.0}});
  const auto result = segment_dpcknn(seq, {Method::dpcknn, 2, {}, 0});
  EXPECT_EQ(result.partition.boundaries, std::vector<std::size_t>{1});
  EXPECT_EQ(result.raw_labels, (std::vector<std::size_t>{0, 1}));
}

TEST(Dpcknn, AssignsToNearestCenter) {
  testing::Frames frames{{0.0}, {0.1}, {0.2}, {9.0}, {9.1}, {9.2}};
  const auto result = segment_dpcknn(make_seq(frames), {Method::dpcknn, 2, 2, 0});
  EXPECT_EQ(result.partition.boundaries, std::vector<std::size_t>{3});
}

TEST(Knn, SeparatesBlobsAndIsSeedDeterministic) {
  testing::Frames frames{{0.0}, {0.1}, {0.2}, {9.0}, {9.1}, {9.2}, {20.0}, {20.1}};
  const auto seq = make_seq(frames);
  for (std::uint64_t seed : {0u, 1u, 7u}) {
    const auto a = segment_knn(seq, {Method::knn, 3, {}, seed});
    const auto b = segment_knn(seq, {Method::knn, 3, {}, seed});
    EXPECT_EQ(a.partition, b.partition);
    EXPECT_EQ(a.partition.boundaries, (std::vector<std::size_t>{3, 6}));
  }
}

TEST(Coerce, ScatteredLabelsBecomeSpans) {
  EXPECT_EQ(coerce_to_spans({0, 0, 1, 0, 1, 1}, 2).boundaries, std::vector<std::size_t>{2});
  EXPECT_EQ(coerce_to_spans({1, 1, 0, 0}, 2).boundaries, std::vector<std::size_t>{2});
  // Every event is non-empty even when a cluster is empty.
  EXPECT_EQ(coerce_to_spans({0, 0, 0}, 3).boundaries, (std::vector<std::size_t>{1, 2}));
  EXPECT_THROW(coerce_to_spans({0, 5}, 2), InputError);
}

TEST(Methods, NamesRoundTrip) {
  for (Method m : {Method::uniform, Method::knn, Method::dpcknn, Method::cdpcknn}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_method("spectral"), ParameterError);
}

TEST(Profile, AgreesWithBruteForce) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto frames = testing::random_frames(rng, 3 + rng() % 20, 1 + rng() % 5);
    const auto seq = make_seq(frames);
    const std::size_t k = 1 + rng() % (frames.size() - 1);
    const auto rho = compute_density(seq, k);
    const auto want = testing::brute_density(frames, k);
    for (std::size_t i = 0; i < rho.size(); ++i) EXPECT_NEAR(rho[i], want[i], 1e-12 * want[i]);
    EXPECT_EQ(compute_delta(seq, rho), testing::brute_delta(frames, rho));
  }
}

TEST(Diagnostics, OneLinePerFrame) {
  const auto result = segment_cdpcknn(two_plus_one(), {Method::cdpcknn, 2, 1, 0});
  const auto dump = diagnostic_dump(result);
  EXPECT_EQ(std::count(dump.begin(), dump.end(), '\n'), 3);
  EXPECT_NE(dump.find("\"is_boundary\":true"), std::string::npos);
}

}  // namespace
}  // namespace vinsta::segmentation
