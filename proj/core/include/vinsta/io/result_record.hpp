#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vinsta/types.hpp"

namespace vinsta::io {

/// One line of results.jsonl.
struct ResultRecord {
  std::string video_id;
  std::string task_id;
  std::string question;
  std::optional<Answer> prediction;
  std::optional<Answer> ground_truth;
  /// Present iff ground_truth is.
  std::optional<bool> correct;
  std::size_t rounds_used = 0;
  std::vector<int> informative_scores;
  std::vector<int> confidences;
  std::string termination;
  std::string segmentation_method;
  std::vector<std::size_t> boundaries;
  std::int64_t llm_calls = 0;
  std::int64_t cache_hits = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::vector<std::string> flags;
  bool failed = false;
  std::optional<std::string> error;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

}  // namespace vinsta::io
