#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vinsta/io/config.hpp"
#include "vinsta/io/result_record.hpp"
#include "vinsta/llm/chat.hpp"
#include "vinsta/llm/client.hpp"
#include "vinsta/segmentation.hpp"
#include "vinsta/templates.hpp"
#include "vinsta/types.hpp"

namespace vinsta {

/// Pre-extracted inputs for one video. Only the embeddings are mandatory.
struct VideoArtifacts {
  FrameEmbeddingSeq embeddings;
  std::optional<GroundingTrack> grounding;
  std::vector<TimedCaption> captions;
  std::vector<TimedObjects> objects;
  std::vector<std::string> flags;
};

/// Throws on missing or malformed embeddings; other missing files are flagged.
VideoArtifacts load_artifacts(const io::RunConfig& config, const std::string& video_id);

struct AssembledVideo {
  segmentation::Segmentation segmentation;
  std::vector<ClipInfoState> clips;
  std::vector<std::string> flags;
};

/// Segmentation, relevance inheritance, caption/object distribution and
/// per-event summaries.
AssembledVideo assemble(const io::RunConfig& config, const VideoArtifacts& artifacts, const Task& task,
                        llm::Session& session, const TemplateSet& templates);

struct TaskOutcome {
  io::ResultRecord record;
  std::optional<ReasoningTrace> trace;
  std::vector<ClipInfoState> clips;
};

/// Runs every stage for one task. Stage errors produce a failed record
/// instead of an exception.
TaskOutcome run_pipeline(const io::RunConfig& config, const Task& task, llm::ChatClient& client,
                         const TemplateSet& templates);

/// Same, with artifacts already in memory.
TaskOutcome run_pipeline(const io::RunConfig& config, const Task& task, const VideoArtifacts& artifacts,
                         llm::ChatClient& client, const TemplateSet& templates);

struct BatchResult {
  std::vector<TaskOutcome> outcomes;  // task order
  std::size_t failures = 0;
};

/// Runs tasks on a bounded worker pool (config.parallel). With
/// `write_outputs`, writes results.jsonl, traces/ and usage.json under
/// config.output_dir in task order.
BatchResult run_batch(const io::RunConfig& config, const std::vector<Task>& tasks, llm::ChatClient& client,
                      const TemplateSet& templates, bool write_outputs);

std::shared_ptr<llm::Backend> make_backend(const io::BackendSettings& settings);

}  // namespace vinsta
