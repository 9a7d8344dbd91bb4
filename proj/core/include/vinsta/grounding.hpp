#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vinsta/types.hpp"

namespace vinsta::grounding {

inline constexpr std::size_t kDefaultMomentCount = 5;

struct Moment {
  Interval interval;
  double foreground = 0.0;

  friend bool operator==(const Moment&, const Moment&) = default;
};

/// Top-k clips, foreground score descending.
struct MomentSet {
  std::vector<Moment> moments;
};

struct EventRelevance {
  double fraction = 0.0;
  std::string rendered_text;
};

struct InheritanceResult {
  std::vector<EventRelevance> events;
  double union_duration = 0.0;
  std::vector<std::string> flags;
};

/// Throws InputError on an empty track and ParameterError when k == 0.
MomentSet rank_moments(const GroundingTrack& track, std::size_t k);

/// Distributes the union of moment intervals over the events by overlap
/// duration. Moments are clipped to the covered timeline first.
InheritanceResult inherit_relevance(const EventPartition& partition, const MomentSet& moments,
                                    double fps_sampled, double duration_s);

/// Sum of lengths of the union of `intervals`.
double union_length(std::vector<Interval> intervals);

std::string relevance_bucket(double fraction);

std::string relevance_to_text(double fraction, std::size_t event_index, const Interval& interval);

/// Temporal prompt used when no grounding is available for the video.
std::string neutral_text(std::size_t event_index, const Interval& interval);

}  // namespace vinsta::grounding
