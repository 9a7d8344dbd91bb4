#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vinsta/io/result_record.hpp"
#include "vinsta/types.hpp"

namespace vinsta::io {

// Embeddings file layout (all integers little-endian):
//   magic "VINSTA\0\0" (8 bytes) | u32 version = 1 | u32 frame_count | u32 dim
//   | frame_count * dim f32, row-major
// Sidecar `<file>.json`: {"video_id", "fps_sampled", "duration_s"}.

inline constexpr std::array<char, 8> kEmbeddingMagic = {'V', 'I', 'N', 'S', 'T', 'A', '\0', '\0'};
inline constexpr std::uint32_t kEmbeddingVersion = 1;
inline constexpr std::size_t kEmbeddingHeaderSize = 20;

struct EmbeddingMeta {
  std::string video_id;
  double fps_sampled = 1.0;
  double duration_s = 0.0;
};

std::vector<std::uint8_t> encode_embeddings(const FrameEmbeddingSeq& seq);
/// Throws FormatError (with byte offset) on bad magic, version, shape or size.
FrameEmbeddingSeq decode_embeddings(std::span<const std::uint8_t> bytes, const EmbeddingMeta& meta);

std::filesystem::path sidecar_path(const std::filesystem::path& embeddings_path);

void write_embeddings(const std::filesystem::path& path, const FrameEmbeddingSeq& seq);
/// Reads payload and sidecar, then validates the sequence.
FrameEmbeddingSeq load_embeddings(const std::filesystem::path& path);

// Line-delimited {start_s, end_s, text} / {start_s, end_s, objects: [...]}.
std::vector<TimedCaption> load_captions(const std::filesystem::path& path);
void write_captions(const std::filesystem::path& path, const std::vector<TimedCaption>& captions);
std::vector<TimedObjects> load_objects(const std::filesystem::path& path);
void write_objects(const std::filesystem::path& path, const std::vector<TimedObjects>& objects);

// {"video_id", "clips": [{start_s, end_s, foreground, salience}]}
GroundingTrack load_grounding(const std::filesystem::path& path);
void write_grounding(const std::filesystem::path& path, const GroundingTrack& track);

// {"task_id", "video_id", "question", "options": [5 strings]?, "ground_truth": int|string?}
Task load_task(const std::filesystem::path& path);
void write_task(const std::filesystem::path& path, const Task& task);

ReasoningTrace load_trace(const std::filesystem::path& path);
void write_trace(const std::filesystem::path& path, const ReasoningTrace& trace);

std::string encode_result_line(const ResultRecord& record);
std::vector<ResultRecord> load_results(const std::filesystem::path& path);
void write_results(const std::filesystem::path& path, const std::vector<ResultRecord>& records);

std::string read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace vinsta::io
