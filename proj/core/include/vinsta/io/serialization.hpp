#pragma once

#include <nlohmann/json.hpp>

#include "vinsta/io/result_record.hpp"
#include "vinsta/types.hpp"

namespace vinsta {

// JSON encodings of the domain types. Doubles are written with round-trip
// precision so decode(encode(x)) == x holds field by field.

nlohmann::json answer_to_json(const Answer& answer);
Answer answer_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const Interval& v);
void from_json(const nlohmann::json& j, Interval& v);
void to_json(nlohmann::json& j, const EventPartition& v);
void from_json(const nlohmann::json& j, EventPartition& v);
void to_json(nlohmann::json& j, const GroundingClip& v);
void from_json(const nlohmann::json& j, GroundingClip& v);
void to_json(nlohmann::json& j, const GroundingTrack& v);
void from_json(const nlohmann::json& j, GroundingTrack& v);
void to_json(nlohmann::json& j, const TimedCaption& v);
void from_json(const nlohmann::json& j, TimedCaption& v);
void to_json(nlohmann::json& j, const TimedObjects& v);
void from_json(const nlohmann::json& j, TimedObjects& v);
void to_json(nlohmann::json& j, const ClipInfoState& v);
void from_json(const nlohmann::json& j, ClipInfoState& v);
void to_json(nlohmann::json& j, const Task& v);
void from_json(const nlohmann::json& j, Task& v);
void to_json(nlohmann::json& j, const ReasoningRound& v);
void from_json(const nlohmann::json& j, ReasoningRound& v);
void to_json(nlohmann::json& j, const ReasoningTrace& v);
void from_json(const nlohmann::json& j, ReasoningTrace& v);

namespace io {
void to_json(nlohmann::json& j, const ResultRecord& v);
void from_json(const nlohmann::json& j, ResultRecord& v);
}  // namespace io

}  // namespace vinsta
