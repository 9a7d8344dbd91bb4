#include "vinsta/validate.hpp"

#include <algorithm>
#include <cmath>

namespace vinsta {

ValidationReport validate(const FrameEmbeddingSeq& seq) {
  ValidationReport report;
  if (seq.dim == 0) report.emplace_back("dim must be positive");
  if (!(seq.fps_sampled > 0.0) || !std::isfinite(seq.fps_sampled)) report.emplace_back("fps_sampled must be positive");
  if (!(seq.duration_s >= 0.0)) report.emplace_back("duration_s must be non-negative");
  if (seq.dim != 0 && seq.values.size() % seq.dim != 0) report.emplace_back("values not a multiple of dim");
  if (seq.frame_count() == 0) report.emplace_back("at least one frame required");
  if (std::any_of(seq.values.begin(), seq.values.end(), [](float v) { return !std::isfinite(v); })) {
    report.emplace_back("non-finite embedding component");
  }
  if (report.empty()) {
    const double covered = static_cast<double>(seq.frame_count()) / seq.fps_sampled;
    // M / fps <= duration + 1 / fps, with a little slack for rounding.
    if (covered > seq.duration_s + 1.0 / seq.fps_sampled + 1e-9) {
      report.emplace_back("frame count exceeds duration");
    }
  }
  return report;
}

ValidationReport validate(const EventPartition& partition) {
  ValidationReport report;
  if (partition.frame_count == 0) report.emplace_back("frame_count must be positive");
  for (std::size_t i = 1; i < partition.boundaries.size(); ++i) {
    if (partition.boundaries[i] <= partition.boundaries[i - 1]) {
      report.emplace_back("boundaries not strictly increasing");
      break;
    }
  }
  for (std::size_t b : partition.boundaries) {
    if (b == 0 || b >= partition.frame_count) {
      report.emplace_back("boundary outside (0, M)");
      break;
    }
  }
  return report;
}

ValidationReport validate(const GroundingTrack& track) {
  ValidationReport report;
  bool salience_bad = false;
  bool interval_bad = false;
  bool order_bad = false;
  for (std::size_t i = 0; i < track.clips.size(); ++i) {
    const auto& c = track.clips[i];
    if (!(c.salience >= 0.0 && c.salience <= 1.0)) salience_bad = true;
    if (!(c.interval.start_s < c.interval.end_s)) interval_bad = true;
    if (!std::isfinite(c.foreground)) interval_bad = true;
    if (i > 0 && c.interval.start_s < track.clips[i - 1].interval.start_s) order_bad = true;
  }
  if (salience_bad) report.emplace_back("salience out of [0,1]");
  if (interval_bad) report.emplace_back("clip interval must satisfy start < end");
  if (order_bad) report.emplace_back("clips not ordered by start");
  return report;
}

ValidationReport validate(const ClipInfoState& clip) {
  ValidationReport report;
  const auto inside = [&](const Interval& iv) {
    return iv.midpoint() >= clip.interval.start_s && iv.midpoint() < clip.interval.end_s;
  };
  if (!(clip.interval.start_s < clip.interval.end_s)) report.emplace_back("clip interval must satisfy start < end");
  if (!std::all_of(clip.action_captions.begin(), clip.action_captions.end(),
                   [&](const TimedCaption& c) { return inside(c.interval); })) {
    report.emplace_back("action caption outside clip interval");
  }
  if (!std::all_of(clip.object_detections.begin(), clip.object_detections.end(),
                   [&](const TimedObjects& o) { return inside(o.interval); })) {
    report.emplace_back("object detection outside clip interval");
  }
  if (clip.informative_score && (*clip.informative_score < 1 || *clip.informative_score > 3)) {
    report.emplace_back("informative score out of {1,2,3}");
  }
  return report;
}

ValidationReport validate(const Task& task) {
  ValidationReport report;
  if (task.video_id.empty()) report.emplace_back("video_id must not be empty");
  if (task.question.empty()) report.emplace_back("question must not be empty");
  if (task.options) {
    if (std::any_of(task.options->begin(), task.options->end(), [](const std::string& o) { return o.empty(); })) {
      report.emplace_back("options must be non-empty strings");
    }
    if (task.ground_truth) {
      const auto* index = std::get_if<std::size_t>(&*task.ground_truth);
      if (index == nullptr || *index >= kOptionCount) report.emplace_back("ground truth must be an option index");
    }
  }
  return report;
}

ValidationReport validate(const ReasoningTrace& trace, std::size_t event_count) {
  ValidationReport report;
  if (trace.rounds.empty()) {
    report.emplace_back("trace has no rounds");
    return report;
  }
  for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
    const auto& merged = trace.rounds[r].merged_events;
    if (!std::is_sorted(merged.begin(), merged.end())) report.emplace_back("merged events not in temporal order");
    if (r == 0) continue;
    const auto& prev = trace.rounds[r - 1].merged_events;
    const bool superset = std::includes(merged.begin(), merged.end(), prev.begin(), prev.end());
    if (!superset || merged.size() <= prev.size()) {
      report.emplace_back("merged sets not strictly increasing");
      break;
    }
  }
  for (const auto& round : trace.rounds) {
    if (round.confidence < 1 || round.confidence > 3) {
      report.emplace_back("confidence out of {1,2,3}");
      break;
    }
  }
  const auto& last = trace.rounds.back();
  if (last.confidence != 3 && last.merged_events.size() != event_count) {
    report.emplace_back("final round neither confident nor exhaustive");
  }
  if (trace.informative_scores.size() != event_count) report.emplace_back("informative score count mismatch");
  return report;
}

}  // namespace vinsta
