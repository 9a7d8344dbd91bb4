#include <gtest/gtest.h>

#include "vinsta/error.hpp"
#include "vinsta/grounding.hpp"

namespace vinsta::grounding {
namespace {

EventPartition three_events() {
  // Events [0,2), [2,4), [4,6) at 1 fps.
  return EventPartition::from_boundaries(6, {2, 4});
}

MomentSet moments(std::initializer_list<Interval> intervals) {
  MomentSet set;
  for (const auto& iv : intervals) set.moments.push_back({iv, 1.0});
  return set;
}

TEST(Inherit, SplitsOverlapAcrossEvents) {
  const auto r = inherit_relevance(three_events(), moments({{1.0, 3.0}}), 1.0, 6.0);
  ASSERT_EQ(r.events.size(), 3u);
  EXPECT_DOUBLE_EQ(r.events[0].fraction, 0.5);
  EXPECT_DOUBLE_EQ(r.events[1].fraction, 0.5);
  EXPECT_DOUBLE_EQ(r.events[2].fraction, 0.0);
  EXPECT_DOUBLE_EQ(r.union_duration, 2.0);
  EXPECT_TRUE(r.flags.empty());
}

TEST(Inherit, DisjointMoments) {
  const auto r = inherit_relevance(three_events(), moments({{0.0, 1.0}, {5.0, 6.0}}), 1.0, 6.0);
  EXPECT_DOUBLE_EQ(r.events[0].fraction, 0.5);
  EXPECT_DOUBLE_EQ(r.events[1].fraction, 0.0);
  EXPECT_DOUBLE_EQ(r.events[2].fraction, 0.5);
}

TEST(Inherit, OverlappingMomentsCountOnce) {
  const auto r = inherit_relevance(three_events(), moments({{0.0, 2.0}, {1.0, 2.0}}), 1.0, 6.0);
  EXPECT_DOUBLE_EQ(r.union_duration, 2.0);
  EXPECT_DOUBLE_EQ(r.events[0].fraction, 1.0);
}

TEST(Inherit, ClipsMomentsToTimeline) {
  const auto r = inherit_relevance(three_events(), moments({{5.0, 9.0}}), 1.0, 6.0);
  EXPECT_DOUBLE_EQ(r.events[2].fraction, 1.0);
  ASSERT_EQ(r.flags.size(), 1u);
  EXPECT_EQ(r.flags[0], "moments clipped to the video timeline");
}

TEST(Inherit, ZeroUnionIsFlagged) {
  const auto r = inherit_relevance(three_events(), moments({{3.0, 3.0}}), 1.0, 6.0);
  for (const auto& e : r.events) EXPECT_EQ(e.fraction, 0.0);
  EXPECT_EQ(r.flags.back(), "retrieved moments have zero total duration");
}

TEST(Inherit, RejectsBadFps) {
  EXPECT_THROW(inherit_relevance(three_events(), moments({{0.0, 1.0}}), 0.0, 6.0), ParameterError);
}

TEST(Rank, ForegroundDescendingEarlierFirstOnTies) {
  GroundingTrack track{"v", {{{0, 2}, 0.5, 0}, {{2, 4}, 0.9, 0}, {{4, 6}, 0.5, 0}, {{6, 8}, 0.1, 0}}};
  const auto top = rank_moments(track, 3);
  ASSERT_EQ(top.moments.size(), 3u);
  EXPECT_EQ(top.moments[0].interval, (Interval{2, 4}));
  EXPECT_EQ(top.moments[1].interval, (Interval{0, 2}));
  EXPECT_EQ(top.moments[2].interval, (Interval{4, 6}));
  EXPECT_EQ(rank_moments(track, 10).moments.size(), 4u);
  EXPECT_THROW(rank_moments(track, 0), ParameterError);
  EXPECT_THROW(rank_moments(GroundingTrack{"v", {}}, 1), InputError);
}

TEST(Union, MergesOverlaps) {
  EXPECT_DOUBLE_EQ(union_length({{0, 2}, {1, 3}, {5, 6}, {4, 4}}), 4.0);
}

TEST(Buckets, Thresholds) {
  EXPECT_EQ(relevance_bucket(0.0), "none");
  EXPECT_EQ(relevance_bucket(0.25), "low");
  EXPECT_EQ(relevance_bucket(0.2501), "medium");
  EXPECT_EQ(relevance_bucket(0.6), "medium");
  EXPECT_EQ(relevance_bucket(0.61), "high");
}

TEST(Text, RelevanceSentence) {
  EXPECT_EQ(relevance_to_text(0.5, 0, {0.0, 12.5}),
            "Clip 1 spans 0.0s–12.5s. Query-relevance: medium (50.0% of the retrieved key moments fall in this clip).");
  EXPECT_EQ(neutral_text(2, {10.0, 20.0}),
            "Clip 3 spans 10.0s–20.0s. Query-relevance: unknown (no grounding information is available).");
}

}  // namespace
}  // namespace vinsta::grounding
