#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace vinsta {

/// Half-open time interval [start_s, end_s) in seconds.
struct Interval {
  double start_s = 0.0;
  double end_s = 0.0;

  double duration() const noexcept { return end_s - start_s; }
  double midpoint() const noexcept { return 0.5 * (start_s + end_s); }
  bool contains(double t) const noexcept { return t >= start_s && t < end_s; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Length of the intersection of two half-open intervals (0 when disjoint).
double overlap(const Interval& a, const Interval& b) noexcept;

/// Pooled per-frame embeddings of one video, row-major.
struct FrameEmbeddingSeq {
  std::string video_id;
  double fps_sampled = 1.0;
  double duration_s = 0.0;
  std::size_t dim = 0;
  std::vector<float> values;

  std::size_t frame_count() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const float> frame(std::size_t i) const {
    return std::span<const float>(values).subspan(i * dim, dim);
  }
  double frame_time(std::size_t i) const noexcept { return static_cast<double>(i) / fps_sampled; }
  /// floor(t * fps_sampled)
  std::size_t frame_at(double t) const noexcept;

  friend bool operator==(const FrameEmbeddingSeq&, const FrameEmbeddingSeq&) = default;
};

/// Frame index range [begin, end).
struct FrameRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

/// K consecutive events over M frames, described by K-1 boundary frames.
/// Boundary index i starts a new event (frame i belongs to the right event).
struct EventPartition {
  std::size_t frame_count = 0;
  std::vector<std::size_t> boundaries;

  std::size_t event_count() const noexcept { return boundaries.size() + 1; }
  std::vector<FrameRange> events() const;

  /// Validating constructor; throws InputError on an invalid partition.
  static EventPartition from_boundaries(std::size_t frame_count, std::vector<std::size_t> boundaries);

  friend bool operator==(const EventPartition&, const EventPartition&) = default;
};

/// Event intervals in seconds. The first event starts at 0 and the last one
/// ends at max(M / fps, duration_s) so the whole video is covered.
std::vector<Interval> event_intervals(const EventPartition& partition, double fps_sampled,
                                      double duration_s);

struct GroundingClip {
  Interval interval;
  double foreground = 0.0;
  double salience = 0.0;

  friend bool operator==(const GroundingClip&, const GroundingClip&) = default;
};

struct GroundingTrack {
  std::string video_id;
  std::vector<GroundingClip> clips;

  friend bool operator==(const GroundingTrack&, const GroundingTrack&) = default;
};

struct TimedCaption {
  Interval interval;
  std::string text;

  friend bool operator==(const TimedCaption&, const TimedCaption&) = default;
};

struct TimedObjects {
  Interval interval;
  std::vector<std::string> objects;

  friend bool operator==(const TimedObjects&, const TimedObjects&) = default;
};

struct ClipInfoState {
  std::size_t event_index = 0;
  Interval interval;
  std::vector<TimedCaption> action_captions;
  std::vector<TimedObjects> object_detections;
  std::string temporal_prompt;
  std::string action_summary;
  std::string object_summary;
  std::optional<int> informative_score;

  friend bool operator==(const ClipInfoState&, const ClipInfoState&) = default;
};

/// Option index for multiple choice, free text for open questions.
using Answer = std::variant<std::size_t, std::string>;

inline constexpr std::size_t kOptionCount = 5;

struct Task {
  std::string task_id;
  std::string video_id;
  std::string question;
  std::optional<std::array<std::string, kOptionCount>> options;
  std::optional<Answer> ground_truth;

  bool is_open() const noexcept { return !options.has_value(); }

  friend bool operator==(const Task&, const Task&) = default;
};

enum class Termination { confident, exhausted };

struct ReasoningRound {
  std::vector<std::size_t> merged_events;  // temporal order
  std::string qa_prompt;
  std::string qa_completion;
  Answer answer;
  std::string reflection_completion;
  int confidence = 1;

  friend bool operator==(const ReasoningRound&, const ReasoningRound&) = default;
};

struct ReasoningTrace {
  std::vector<int> informative_scores;       // per event, temporal order
  std::vector<std::size_t> evaluation_order;  // V'' as event indices
  std::vector<ReasoningRound> rounds;
  Answer final_answer;
  Termination termination = Termination::exhausted;
  std::vector<std::string> flags;

  friend bool operator==(const ReasoningTrace&, const ReasoningTrace&) = default;
};

/// 'A'..'E' for option indices 0..4.
char option_letter(std::size_t index);

}  // namespace vinsta
