#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vinsta/reasoner.hpp"

namespace vinsta::reasoner {
namespace {

using testing::closed_task;
using testing::loop_backend;
using testing::plain_clips;

std::vector<std::vector<std::size_t>> round_sets(const ReasoningTrace& trace) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& r : trace.rounds) out.push_back(r.merged_events);
  return out;
}

struct Run {
  ReasoningTrace trace;
  std::int64_t calls = 0;
};

Run run(const std::vector<int>& scores, const std::vector<int>& confidences, ReasonerOptions options = {}) {
  llm::ChatClient client(loop_backend(scores, confidences));
  llm::Session session(client, "m");
  auto clips = plain_clips(scores.size());
  Run r;
  r.trace = reason(clips, closed_task(), options, session);
  r.calls = session.calls();
  return r;
}

TEST(Order, StableByScore) {
  EXPECT_EQ(sort_by_informativeness({1, 3, 2, 3}), (std::vector<std::size_t>{1, 3, 2, 0}));
}

TEST(Loop, TopClipsAreMergedBeforeTheFirstRound) {
  const auto r = run({3, 3, 2, 1}, {3});
  EXPECT_EQ(round_sets(r.trace), (std::vector<std::vector<std::size_t>>{{0, 1}}));
  EXPECT_EQ(r.trace.termination, Termination::confident);
  EXPECT_EQ(r.calls, 4 + 2);
}

TEST(Loop, AddsOneClipPerRoundAfterTheTopGroup) {
  const auto r = run({3, 3, 2, 1}, {2, 2, 3});
  EXPECT_EQ(round_sets(r.trace), (std::vector<std::vector<std::size_t>>{{0, 1}, {0, 1, 2}, {0, 1, 2, 3}}));
  EXPECT_EQ(r.trace.termination, Termination::confident);
  EXPECT_EQ(r.trace.evaluation_order, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Loop, ExhaustsWithoutConfidence) {
  const auto r = run({1, 1, 1, 1}, {1, 1, 1, 1});
  EXPECT_EQ(round_sets(r.trace), (std::vector<std::vector<std::size_t>>{{0}, {0, 1}, {0, 1, 2}, {0, 1, 2, 3}}));
  EXPECT_EQ(r.trace.termination, Termination::exhausted);
  EXPECT_EQ(r.trace.final_answer, Answer{std::size_t{0}});
}

TEST(Loop, MergedClipsAreInTemporalOrder) {
  const auto r = run({1, 2, 1, 3}, {1, 3});
  EXPECT_EQ(round_sets(r.trace), (std::vector<std::vector<std::size_t>>{{3}, {1, 3}}));
  const auto& prompt = r.trace.rounds[1].qa_prompt;
  EXPECT_LT(prompt.find("Clip 2 spans"), prompt.find("Clip 4 spans"));
  EXPECT_NE(prompt.find("### Information about one of four clips of the video"), std::string::npos);
}

TEST(Loop, ParallelScoringGivesTheSameTrace) {
  ReasonerOptions options;
  options.max_parallel = 4;
  EXPECT_EQ(run({2, 3, 1, 3}, {1, 2, 3}, options).trace, run({2, 3, 1, 3}, {1, 2, 3}).trace);
}

TEST(Fallbacks, UnparseableRepliesUseDefaults) {
  auto backend = std::make_shared<llm::ScriptedBackend>();
  backend->add_rule({{"Assessment of Decision-Making"}, {"very sure"}, true});
  backend->add_rule({{"'best_answer'"}, {"I think D) is right, maybe B) too"}, true});
  backend->add_rule({{"answerability"}, {"hard to say"}, true});
  llm::ChatClient client(backend);
  llm::Session session(client, "m");
  auto clips = plain_clips(2);
  const auto trace = reason(clips, closed_task(), {}, session);
  EXPECT_EQ(trace.informative_scores, (std::vector<int>{2, 2}));
  EXPECT_EQ(trace.rounds.size(), 2u);
  EXPECT_EQ(trace.final_answer, Answer{std::size_t{1}});
  EXPECT_EQ(trace.rounds[0].confidence, 1);
  ASSERT_GE(trace.flags.size(), 4u);
  EXPECT_EQ(trace.flags[0], "event 0: answerability not parseable, using 2");
  EXPECT_EQ(trace.flags[1], "event 1: answerability not parseable, using 2");
  EXPECT_EQ(trace.flags[2], "round 1: answer not parseable, fell back to option B");
  EXPECT_EQ(trace.flags[3], "round 1: confidence not parseable, using 1");
  // Deterministic sampling asks once per prompt.
  EXPECT_EQ(session.calls(), 2 + 2 * 2);
}

TEST(Fallbacks, StochasticSamplingRetriesParsing) {
  auto backend = std::make_shared<llm::ScriptedBackend>();
  backend->add_rule({{"Assessment of Decision-Making"}, {"{'confidence': 3}"}, true});
  backend->add_rule({{"'best_answer'"}, {"hmm", "not sure", "{'best_answer': 'E'}"}, true});
  backend->add_rule({{"answerability"}, {"{'answerability': 3}"}, true});
  llm::ChatClient client(backend);
  llm::Session session(client, "m");
  auto clips = plain_clips(1);
  ReasonerOptions options;
  options.temperature = 0.7;
  const auto trace = reason(clips, closed_task(), options, session);
  EXPECT_EQ(trace.final_answer, Answer{std::size_t{4}});
  EXPECT_TRUE(trace.flags.empty());
  EXPECT_EQ(session.calls(), 1 + 3 + 1);
}

TEST(Fallbacks, OptionScan) {
  EXPECT_EQ(fallback_option("C) and A) look fine"), 0u);
  EXPECT_EQ(fallback_option("nothing"), 0u);
  EXPECT_EQ(fallback_option("E)"), 4u);
}

TEST(Errors, BackendFailuresPropagate) {
  llm::ChatClient client(std::make_shared<llm::ScriptedBackend>());
  llm::Session session(client, "m");
  auto clips = plain_clips(2);
  EXPECT_THROW(reason(clips, closed_task(), {}, session), llm::ScriptExhaustedError);
  std::vector<ClipInfoState> none;
  EXPECT_THROW(merge_and_answer(none, closed_task(), {}, session), InputError);
  auto unscored = plain_clips(1);
  EXPECT_THROW(merge_and_answer(unscored, closed_task(), {}, session), InputError);
}

TEST(OpenTasks, CompletionIsTheAnswer) {
  auto backend = std::make_shared<llm::ScriptedBackend>();
  backend->add_rule({{"Assessment of Decision-Making"}, {"{'confidence': 3}"}, true});
  backend->add_rule({{"answerability"}, {"{'answerability': 3}"}, true});
  backend->push("C is making tea.");
  llm::ChatClient client(backend);
  llm::Session session(client, "m");
  auto task = closed_task();
  task.options.reset();
  task.ground_truth = Answer{std::string("making tea")};
  auto clips = plain_clips(1);
  const auto trace = reason(clips, task, {}, session);
  EXPECT_EQ(trace.final_answer, Answer{std::string("C is making tea.")});
}

TEST(Render, ClipState) {
  ClipInfoState clip = plain_clips(1)[0];
  EXPECT_EQ(render_clip_state(clip),
            "Temporal grounding: Clip 1 spans 0.0s–10.0s. Query-relevance: unknown (no grounding information is "
            "available).\nAction captions: (no action information available)\nAction caption summary: summary 1\n"
            "Object detections:\n(no object information available)\nObject detection summary: objects 1");
  clip.action_captions = {{{0, 1}, "C sits"}};
  clip.object_detections = {{{0, 1}, {"chair", "table"}}};
  const auto state = render_clip_state(clip);
  EXPECT_NE(state.find("Action captions: C sits.\n"), std::string::npos);
  EXPECT_NE(state.find("Object detections:\nchair; table.\n"), std::string::npos);
}

TEST(Render, ReflectionHistory) {
  EXPECT_EQ(reasoning_history("P", "C"), "P\n\n---\n\nC");
  EXPECT_NE(reflection_prompt("PROMPT", "COMPLETION", {}).find("PROMPT\n\n---\n\nCOMPLETION"), std::string::npos);
}

TEST(Families, StrictVariantsDifferOnlyWhereDocumented) {
  ReasonerOptions strict;
  strict.family = ModelFamily::strict_json_coaxing;
  const auto clip = plain_clips(1)[0];
  const auto standard_prompt = informative_prompt(clip, closed_task(), {});
  const auto strict_prompt = informative_prompt(clip, closed_task(), strict);
  EXPECT_NE(standard_prompt, strict_prompt);
  EXPECT_NE(strict_prompt.find("always provide an answerability"), std::string::npos);
}

}  // namespace
}  // namespace vinsta::reasoner
