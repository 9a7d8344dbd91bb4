#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vinsta/error.hpp"
#include "vinsta/validate.hpp"

namespace vinsta {
namespace {

TEST(Sequence, Invariants) {
  auto seq = testing::make_seq({{0.0}, {1.0}});
  EXPECT_TRUE(validate(seq).empty());
  seq.values[1] = std::nanf("");
  EXPECT_EQ(validate(seq), ValidationReport{"non-finite embedding component"});
  seq = testing::make_seq({{0.0}, {1.0}, {2.0}}, 1.0, 1.0);
  EXPECT_EQ(validate(seq), ValidationReport{"frame count exceeds duration"});
  seq.fps_sampled = 0.0;
  EXPECT_FALSE(validate(seq).empty());
}

TEST(Partition, Invariants) {
  EXPECT_TRUE(validate(EventPartition{5, {1, 3}}).empty());
  EXPECT_EQ(validate(EventPartition{5, {3, 3}}), ValidationReport{"boundaries not strictly increasing"});
  EXPECT_EQ(validate(EventPartition{5, {0}}), ValidationReport{"boundary outside (0, M)"});
  EXPECT_THROW(EventPartition::from_boundaries(5, {5}), InputError);
  const auto p = EventPartition::from_boundaries(5, {2});
  EXPECT_EQ(p.events(), (std::vector<FrameRange>{{0, 2}, {2, 5}}));
}

TEST(Partition, IntervalsCoverTheVideo) {
  const auto p = EventPartition::from_boundaries(4, {2});
  const auto iv = event_intervals(p, 2.0, 2.3);
  EXPECT_EQ(iv, (std::vector<Interval>{{0.0, 1.0}, {1.0, 2.3}}));
  EXPECT_EQ(event_intervals(p, 2.0, 1.0).back().end_s, 2.0);
}

TEST(Grounding, Invariants) {
  EXPECT_TRUE(validate(GroundingTrack{"v", {{{0, 1}, 0.3, 0.5}}}).empty());
  EXPECT_EQ(validate(GroundingTrack{"v", {{{0, 1}, 0.3, 1.5}}}), ValidationReport{"salience out of [0,1]"});
  EXPECT_EQ(validate(GroundingTrack{"v", {{{1, 1}, 0.3, 0.5}}}),
            ValidationReport{"clip interval must satisfy start < end"});
}

TEST(Clip, Invariants) {
  ClipInfoState clip = testing::plain_clips(1)[0];
  clip.action_captions = {{{8, 11}, "x"}};
  EXPECT_TRUE(validate(clip).empty());
  clip.action_captions = {{{10, 12}, "x"}};
  clip.informative_score = 4;
  EXPECT_EQ(validate(clip), (ValidationReport{"action caption outside clip interval", "informative score out of {1,2,3}"}));
}

TEST(TaskCheck, Invariants) {
  auto task = testing::closed_task();
  EXPECT_TRUE(validate(task).empty());
  task.ground_truth = Answer{std::size_t{5}};
  EXPECT_EQ(validate(task), ValidationReport{"ground truth must be an option index"});
  task.ground_truth = Answer{std::string("b")};
  EXPECT_EQ(validate(task), ValidationReport{"ground truth must be an option index"});
  task.options.reset();
  EXPECT_TRUE(validate(task).empty());
}

TEST(Trace, Invariants) {
  ReasoningTrace t;
  EXPECT_EQ(validate(t, 2), ValidationReport{"trace has no rounds"});
  t.informative_scores = {1, 2};
  t.rounds = {{{1}, "", "", std::size_t{0}, "", 1}, {{0, 1}, "", "", std::size_t{0}, "", 1}};
  EXPECT_TRUE(validate(t, 2).empty());
  t.rounds.pop_back();
  EXPECT_EQ(validate(t, 2), ValidationReport{"final round neither confident nor exhaustive"});
  t.rounds.push_back({{1}, "", "", std::size_t{0}, "", 3});
  EXPECT_EQ(validate(t, 2), ValidationReport{"merged sets not strictly increasing"});
}

TEST(Letters, OptionLetters) {
  EXPECT_EQ(option_letter(0), 'A');
  EXPECT_EQ(option_letter(4), 'E');
}

}  // namespace
}  // namespace vinsta
