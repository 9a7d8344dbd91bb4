#include "vinsta/grounding.hpp"

#include <algorithm>
#include <numeric>

#include "vinsta/error.hpp"
#include "vinsta/text.hpp"

namespace vinsta::grounding {
namespace {

// Sorted, disjoint, non-empty intervals covering the same points as the input.
std::vector<Interval> merge(std::vector<Interval> intervals) {
  std::erase_if(intervals, [](const Interval& iv) { return !(iv.end_s > iv.start_s); });
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.start_s < b.start_s; });
  std::vector<Interval> merged;
  for (const auto& iv : intervals) {
    if (!merged.empty() && iv.start_s <= merged.back().end_s) {
      merged.back().end_s = std::max(merged.back().end_s, iv.end_s);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

std::string clip_header(std::size_t event_index, const Interval& interval) {
  return "Clip " + std::to_string(event_index + 1) + " spans " + text::fixed(interval.start_s, 1) + "s–" +
         text::fixed(interval.end_s, 1) + "s.";
}

}  // namespace

MomentSet rank_moments(const GroundingTrack& track, std::size_t k) {
  if (k == 0) throw ParameterError("moment count must be at least 1");
  if (track.clips.empty()) throw InputError("grounding track for '" + track.video_id + "' has no clips");
  std::vector<std::size_t> order(track.clips.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = track.clips[a];
    const auto& cb = track.clips[b];
    if (ca.foreground != cb.foreground) return ca.foreground > cb.foreground;
    return ca.interval.start_s < cb.interval.start_s;
  });
  MomentSet out;
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i) {
    const auto& clip = track.clips[order[i]];
    out.moments.push_back({clip.interval, clip.foreground});
  }
  return out;
}

double union_length(std::vector<Interval> intervals) {
  double total = 0.0;
  for (const auto& iv : merge(std::move(intervals))) total += iv.duration();
  return total;
}

InheritanceResult inherit_relevance(const EventPartition& partition, const MomentSet& moments, double fps_sampled,
                                    double duration_s) {
  if (!(fps_sampled > 0.0)) throw ParameterError("fps_sampled must be positive");
  const auto events = event_intervals(partition, fps_sampled, duration_s);
  const Interval coverage{0.0, events.empty() ? 0.0 : events.back().end_s};

  std::vector<Interval> clipped;
  bool any_clipped = false;
  for (const auto& m : moments.moments) {
    Interval iv{std::max(m.interval.start_s, coverage.start_s), std::min(m.interval.end_s, coverage.end_s)};
    if (iv != m.interval) any_clipped = true;
    clipped.push_back(iv);
  }
  const auto merged = merge(clipped);

  InheritanceResult result;
  if (any_clipped) result.flags.push_back("moments clipped to the video timeline");
  for (const auto& iv : merged) result.union_duration += iv.duration();

  result.events.resize(events.size());
  if (!(result.union_duration > 0.0)) {
    result.flags.push_back("retrieved moments have zero total duration");
  } else {
    for (std::size_t e = 0; e < events.size(); ++e) {
      double covered = 0.0;
      for (const auto& iv : merged) covered += overlap(events[e], iv);
      result.events[e].fraction = std::clamp(covered / result.union_duration, 0.0, 1.0);
    }
  }
  for (std::size_t e = 0; e < events.size(); ++e) {
    result.events[e].rendered_text = relevance_to_text(result.events[e].fraction, e, events[e]);
  }
  return result;
}

std::string relevance_bucket(double fraction) {
  if (fraction <= 0.0) return "none";
  if (fraction <= 0.25) return "low";
  if (fraction <= 0.6) return "medium";
  return "high";
}

std::string relevance_to_text(double fraction, std::size_t event_index, const Interval& interval) {
  return clip_header(event_index, interval) + " Query-relevance: " + relevance_bucket(fraction) + " (" +
         text::fixed(fraction * 100.0, 1) + "% of the retrieved key moments fall in this clip).";
}

std::string neutral_text(std::size_t event_index, const Interval& interval) {
  return clip_header(event_index, interval) + " Query-relevance: unknown (no grounding information is available).";
}

}  // namespace vinsta::grounding
