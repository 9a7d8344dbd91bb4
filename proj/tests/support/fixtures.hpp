#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vinsta/io/config.hpp"
#include "vinsta/llm/backends.hpp"
#include "vinsta/llm/chat.hpp"
#include "vinsta/types.hpp"

namespace vinsta::testing {

std::filesystem::path data_dir();

FrameEmbeddingSeq make_seq(const Frames& frames, double fps = 1.0, std::optional<double> duration = std::nullopt);
Frames to_frames(const FrameEmbeddingSeq& seq);

/// M frames of dimension `dim` with components uniform in [lo, hi).
Frames random_frames(std::mt19937_64& rng, std::size_t m, std::size_t dim, double lo = 0.0, double hi = 1.0);

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

Task closed_task(std::string id = "t1", std::string video = "v1");

/// K clips over [0, K * clip_len) with distinct temporal prompts
/// ("Clip n spans ...") and no captions.
std::vector<ClipInfoState> plain_clips(std::size_t k, double clip_len = 10.0);

/// Videos whose answer is recoverable only when one planted segment ends up
/// inside a single event. See synthetic_responder for the matching model.
struct SyntheticSuite {
  io::RunConfig config;
  std::vector<Task> tasks;
  std::vector<std::vector<std::size_t>> planted_boundaries;
};

SyntheticSuite write_synthetic_suite(const std::filesystem::path& dir, std::size_t videos, std::uint64_t seed);

/// Answers correctly iff one clip section of the QA prompt holds both deciding
/// captions; scores clips by how many deciding captions they hold.
std::string synthetic_responder(const llm::ChatRequest& request);

/// Scripted model for the merge loop: answerability prompts get scores[n-1]
/// for "Clip n", QA prompts get option A, reflections get the next entry of
/// `confidences`.
std::shared_ptr<llm::ScriptedBackend> loop_backend(std::vector<int> scores, std::vector<int> confidences);

}  // namespace vinsta::testing
