#pragma once

#include <string>
#include <vector>

#include "vinsta/types.hpp"

namespace vinsta {

/// Each overload returns the violated invariants; an empty list means valid.
using ValidationReport = std::vector<std::string>;

ValidationReport validate(const FrameEmbeddingSeq& seq);
ValidationReport validate(const EventPartition& partition);
ValidationReport validate(const GroundingTrack& track);
ValidationReport validate(const ClipInfoState& clip);
ValidationReport validate(const Task& task);
ValidationReport validate(const ReasoningTrace& trace, std::size_t event_count);

}  // namespace vinsta
