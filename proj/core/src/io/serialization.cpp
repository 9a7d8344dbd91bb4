#include "vinsta/io/serialization.hpp"

#include "vinsta/error.hpp"

namespace vinsta {
namespace {

template <class T>
std::optional<T> optional_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

std::string_view to_string(Termination t) {
  return t == Termination::confident ? "confident" : "exhausted";
}

Termination parse_termination(const std::string& s) {
  if (s == "confident") return Termination::confident;
  if (s == "exhausted") return Termination::exhausted;
  throw FormatError("unknown termination: " + s);
}

}  // namespace

nlohmann::json answer_to_json(const Answer& answer) {
  if (const auto* index = std::get_if<std::size_t>(&answer)) return *index;
  return std::get<std::string>(answer);
}

Answer answer_from_json(const nlohmann::json& j) {
  if (j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0)) return j.get<std::size_t>();
  if (j.is_string()) return j.get<std::string>();
  throw FormatError("answer must be an option index or a string");
}

void to_json(nlohmann::json& j, const Interval& v) {
  j = {{"start_s", v.start_s}, {"end_s", v.end_s}};
}

void from_json(const nlohmann::json& j, Interval& v) {
  v.start_s = j.at("start_s").get<double>();
  v.end_s = j.at("end_s").get<double>();
}

void to_json(nlohmann::json& j, const EventPartition& v) {
  j = {{"frame_count", v.frame_count}, {"boundaries", v.boundaries}};
}

void from_json(const nlohmann::json& j, EventPartition& v) {
  v = EventPartition::from_boundaries(j.at("frame_count").get<std::size_t>(),
                                      j.at("boundaries").get<std::vector<std::size_t>>());
}

void to_json(nlohmann::json& j, const GroundingClip& v) {
  j = {{"start_s", v.interval.start_s}, {"end_s", v.interval.end_s}, {"foreground", v.foreground},
       {"salience", v.salience}};
}

void from_json(const nlohmann::json& j, GroundingClip& v) {
  from_json(j, v.interval);
  v.foreground = j.at("foreground").get<double>();
  v.salience = j.value("salience", 0.0);
}

void to_json(nlohmann::json& j, const GroundingTrack& v) {
  j = {{"video_id", v.video_id}, {"clips", v.clips}};
}

void from_json(const nlohmann::json& j, GroundingTrack& v) {
  v.video_id = j.at("video_id").get<std::string>();
  v.clips = j.at("clips").get<std::vector<GroundingClip>>();
}

void to_json(nlohmann::json& j, const TimedCaption& v) {
  j = {{"start_s", v.interval.start_s}, {"end_s", v.interval.end_s}, {"text", v.text}};
}

void from_json(const nlohmann::json& j, TimedCaption& v) {
  from_json(j, v.interval);
  v.text = j.at("text").get<std::string>();
}

void to_json(nlohmann::json& j, const TimedObjects& v) {
  j = {{"start_s", v.interval.start_s}, {"end_s", v.interval.end_s}, {"objects", v.objects}};
}

void from_json(const nlohmann::json& j, TimedObjects& v) {
  from_json(j, v.interval);
  v.objects = j.at("objects").get<std::vector<std::string>>();
}

void to_json(nlohmann::json& j, const ClipInfoState& v) {
  j = {{"event_index", v.event_index},
       {"interval", v.interval},
       {"action_captions", v.action_captions},
       {"object_detections", v.object_detections},
       {"temporal_prompt", v.temporal_prompt},
       {"action_summary", v.action_summary},
       {"object_summary", v.object_summary},
       {"informative_score", v.informative_score ? nlohmann::json(*v.informative_score) : nlohmann::json(nullptr)}};
}

void from_json(const nlohmann::json& j, ClipInfoState& v) {
  v.event_index = j.at("event_index").get<std::size_t>();
  v.interval = j.at("interval").get<Interval>();
  v.action_captions = j.at("action_captions").get<std::vector<TimedCaption>>();
  v.object_detections = j.at("object_detections").get<std::vector<TimedObjects>>();
  v.temporal_prompt = j.at("temporal_prompt").get<std::string>();
  v.action_summary = j.at("action_summary").get<std::string>();
  v.object_summary = j.at("object_summary").get<std::string>();
  v.informative_score = optional_field<int>(j, "informative_score");
}

void to_json(nlohmann::json& j, const Task& v) {
  j = {{"task_id", v.task_id}, {"video_id", v.video_id}, {"question", v.question}};
  j["options"] = v.options ? nlohmann::json(*v.options) : nlohmann::json::array();
  if (v.ground_truth) j["ground_truth"] = answer_to_json(*v.ground_truth);
}

void from_json(const nlohmann::json& j, Task& v) {
  v.task_id = j.at("task_id").get<std::string>();
  v.video_id = j.at("video_id").get<std::string>();
  v.question = j.at("question").get<std::string>();
  v.options.reset();
  if (j.contains("options") && !j.at("options").is_null()) {
    const auto options = j.at("options").get<std::vector<std::string>>();
    if (options.empty()) {
      // An empty list marks an open question.
    } else if (options.size() != kOptionCount) {
      throw FormatError("task " + v.task_id + " must have 0 or 5 options, found " + std::to_string(options.size()));
    } else {
      std::array<std::string, kOptionCount> fixed;
      std::copy(options.begin(), options.end(), fixed.begin());
      v.options = fixed;
    }
  }
  v.ground_truth.reset();
  if (j.contains("ground_truth") && !j.at("ground_truth").is_null()) {
    v.ground_truth = answer_from_json(j.at("ground_truth"));
  }
}

void to_json(nlohmann::json& j, const ReasoningRound& v) {
  j = {{"merged_events", v.merged_events},
       {"qa_prompt", v.qa_prompt},
       {"qa_completion", v.qa_completion},
       {"answer", answer_to_json(v.answer)},
       {"reflection_completion", v.reflection_completion},
       {"confidence", v.confidence}};
}

void from_json(const nlohmann::json& j, ReasoningRound& v) {
  v.merged_events = j.at("merged_events").get<std::vector<std::size_t>>();
  v.qa_prompt = j.at("qa_prompt").get<std::string>();
  v.qa_completion = j.at("qa_completion").get<std::string>();
  v.answer = answer_from_json(j.at("answer"));
  v.reflection_completion = j.at("reflection_completion").get<std::string>();
  v.confidence = j.at("confidence").get<int>();
}

void to_json(nlohmann::json& j, const ReasoningTrace& v) {
  j = {{"informative_scores", v.informative_scores},
       {"evaluation_order", v.evaluation_order},
       {"rounds", v.rounds},
       {"final_answer", answer_to_json(v.final_answer)},
       {"termination", to_string(v.termination)},
       {"flags", v.flags}};
}

void from_json(const nlohmann::json& j, ReasoningTrace& v) {
  v.informative_scores = j.at("informative_scores").get<std::vector<int>>();
  v.evaluation_order = j.at("evaluation_order").get<std::vector<std::size_t>>();
  v.rounds = j.at("rounds").get<std::vector<ReasoningRound>>();
  v.final_answer = answer_from_json(j.at("final_answer"));
  v.termination = parse_termination(j.at("termination").get<std::string>());
  v.flags = j.value("flags", std::vector<std::string>{});
}

namespace io {

void to_json(nlohmann::json& j, const ResultRecord& v) {
  j = {{"video_id", v.video_id},
       {"task_id", v.task_id},
       {"question", v.question},
       {"prediction", v.prediction ? answer_to_json(*v.prediction) : nlohmann::json(nullptr)},
       {"rounds_used", v.rounds_used},
       {"informative_scores", v.informative_scores},
       {"confidences", v.confidences},
       {"termination", v.termination},
       {"segmentation_method", v.segmentation_method},
       {"boundaries", v.boundaries},
       {"llm_calls", v.llm_calls},
       {"cache_hits", v.cache_hits},
       {"prompt_tokens", v.prompt_tokens},
       {"completion_tokens", v.completion_tokens},
       {"flags", v.flags},
       {"failed", v.failed}};
  if (v.ground_truth) j["ground_truth"] = answer_to_json(*v.ground_truth);
  if (v.correct) j["correct"] = *v.correct;
  if (v.error) j["error"] = *v.error;
}

void from_json(const nlohmann::json& j, ResultRecord& v) {
  v.video_id = j.at("video_id").get<std::string>();
  v.task_id = j.at("task_id").get<std::string>();
  v.question = j.value("question", std::string());
  v.prediction.reset();
  if (j.contains("prediction") && !j.at("prediction").is_null()) v.prediction = answer_from_json(j.at("prediction"));
  v.ground_truth.reset();
  if (j.contains("ground_truth") && !j.at("ground_truth").is_null()) {
    v.ground_truth = answer_from_json(j.at("ground_truth"));
  }
  v.correct = optional_field<bool>(j, "correct");
  v.rounds_used = j.value("rounds_used", std::size_t{0});
  v.informative_scores = j.value("informative_scores", std::vector<int>{});
  v.confidences = j.value("confidences", std::vector<int>{});
  v.termination = j.value("termination", std::string());
  v.segmentation_method = j.value("segmentation_method", std::string());
  v.boundaries = j.value("boundaries", std::vector<std::size_t>{});
  v.llm_calls = j.value("llm_calls", std::int64_t{0});
  v.cache_hits = j.value("cache_hits", std::int64_t{0});
  v.prompt_tokens = j.value("prompt_tokens", std::int64_t{0});
  v.completion_tokens = j.value("completion_tokens", std::int64_t{0});
  v.flags = j.value("flags", std::vector<std::string>{});
  v.failed = j.value("failed", false);
  v.error = optional_field<std::string>(j, "error");
}

}  // namespace io
}  // namespace vinsta
