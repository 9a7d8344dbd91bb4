#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "vinsta/llm/client.hpp"
#include "vinsta/templates.hpp"
#include "vinsta/types.hpp"

namespace vinsta::reasoner {

inline constexpr int kFallbackInformativeScore = 2;
inline constexpr int kFallbackConfidence = 1;
inline constexpr int kTopScore = 3;
inline constexpr std::string_view kHistorySeparator = "\n\n---\n\n";

struct ReasonerOptions {
  ModelFamily family = ModelFamily::standard;
  const TemplateSet* templates = nullptr;  // null means TemplateSet::builtin()
  double temperature = 0.0;
  /// Concurrent informative evaluations; the merge loop is always sequential.
  std::size_t max_parallel = 1;

  const TemplateSet& template_set() const;
  /// Re-asks on unparseable output only when sampling is stochastic.
  int parse_attempts() const { return temperature > 0.0 ? 3 : 1; }
};

/// Text bound to {lexical_node_state_representation}.
std::string render_clip_state(const ClipInfoState& clip);

/// Clips in the given order, each under a "### Information about one of
/// {K} clips of the video" header; bound to {whole_video_state}.
std::string render_whole_video_state(const std::vector<const ClipInfoState*>& clips, std::size_t total_clips);

struct ScoreResult {
  int score = kFallbackInformativeScore;
  std::string prompt;
  std::string completion;
  bool fallback = false;
};

std::string informative_prompt(const ClipInfoState& clip, const Task& task, const ReasonerOptions& options);
ScoreResult informative_eval(const ClipInfoState& clip, const Task& task, const ReasonerOptions& options,
                             llm::Session& session);

/// Event indices sorted by score descending; equal scores keep temporal order.
std::vector<std::size_t> sort_by_informativeness(const std::vector<int>& scores);

struct QaResult {
  Answer answer;
  std::string prompt;
  std::string completion;
  bool fallback = false;
};

std::string qa_prompt(const std::string& merged_text, const Task& task, const ReasonerOptions& options);
QaResult answer_qa(const std::string& merged_text, const Task& task, const ReasonerOptions& options,
                   llm::Session& session);

/// Smallest option letter written as "X)" in the completion, else option A.
std::size_t fallback_option(std::string_view completion);

struct ReflectionResult {
  int confidence = kFallbackConfidence;
  std::string prompt;
  std::string completion;
  bool fallback = false;
};

/// QA prompt and completion joined by kHistorySeparator.
std::string reasoning_history(const std::string& qa_prompt, const std::string& qa_completion);
std::string reflection_prompt(const std::string& qa_prompt, const std::string& qa_completion,
                              const ReasonerOptions& options);
ReflectionResult self_reflect(const std::string& qa_prompt, const std::string& qa_completion,
                              const ReasonerOptions& options, llm::Session& session);

/// Merge-and-evaluate loop over clips whose informative scores are set.
/// Clips are visited in descending score order; the working set is only
/// answered when the next clip is not a top-score clip (or none is left),
/// and the loop stops on top confidence or when every clip is merged.
ReasoningTrace merge_and_answer(const std::vector<ClipInfoState>& clips, const Task& task,
                                const ReasonerOptions& options, llm::Session& session);

/// Scores every clip, then runs merge_and_answer.
ReasoningTrace reason(std::vector<ClipInfoState>& clips, const Task& task, const ReasonerOptions& options,
                      llm::Session& session);

}  // namespace vinsta::reasoner
