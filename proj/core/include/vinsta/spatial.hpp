#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "vinsta/llm/client.hpp"
#include "vinsta/templates.hpp"
#include "vinsta/types.hpp"

namespace vinsta::spatial {

inline constexpr std::size_t kDefaultObjectsPerFrame = 3;
inline constexpr double kSummaryTemperature = 1.0;

inline constexpr std::string_view kNoActionInformation = "(no action information available)";
inline constexpr std::string_view kNoObjectInformation = "(no object information available)";
inline constexpr std::string_view kSummaryUnavailable = "(summary unavailable)";

/// Summary length: round(base * duration / reference), never below `floor`.
struct WordBudget {
  int base = 180;
  double reference_s = 180.0;
  int floor = 60;

  int for_duration(double duration_s) const;
};

template <class Item>
struct Inherited {
  std::vector<std::vector<Item>> per_event;
  /// Items whose midpoint fell outside the timeline and were clamped.
  std::size_t clamped = 0;
  std::vector<std::string> flags;
};

/// Event index holding time `t`; out-of-range times clamp to the first or
/// last event and set `clamped`.
std::size_t locate_event(const std::vector<Interval>& events, double t, bool& clamped);

/// Each caption goes to the event containing its interval midpoint.
Inherited<TimedCaption> inherit_captions(const std::vector<TimedCaption>& captions,
                                         const std::vector<Interval>& events);

/// Same midpoint rule; each per-frame list is cut to `objects_per_frame` names.
Inherited<TimedObjects> inherit_objects(const std::vector<TimedObjects>& objects,
                                        const std::vector<Interval>& events,
                                        std::size_t objects_per_frame = kDefaultObjectsPerFrame);

/// "A. B. C.": one sentence per caption.
std::string render_action_captions(const std::vector<TimedCaption>& captions);

/// "a; b; c.\nd; e.": one line per interval.
std::string render_object_detections(const std::vector<TimedObjects>& objects);

struct SummaryRequest {
  double length_s = 0.0;
  std::string question;
  int words = 180;
};

struct SummaryResult {
  std::string text;
  std::string prompt;  // empty when no call was made
  bool called = false;
  std::vector<std::string> flags;
};

std::string action_summary_prompt(const std::vector<TimedCaption>& captions, const SummaryRequest& request,
                                  const PromptTemplate& tmpl);
std::string object_summary_prompt(const std::vector<TimedObjects>& objects, const SummaryRequest& request,
                                  const PromptTemplate& tmpl);

/// Query-focused summary of one event's action captions. Returns the
/// completion verbatim; no call is made for an empty caption list.
SummaryResult summarize_actions(const std::vector<TimedCaption>& captions, const SummaryRequest& request,
                                const PromptTemplate& tmpl, llm::Session& session,
                                double temperature = kSummaryTemperature);

SummaryResult summarize_objects(const std::vector<TimedObjects>& objects, const SummaryRequest& request,
                                const PromptTemplate& tmpl, llm::Session& session,
                                double temperature = kSummaryTemperature);

}  // namespace vinsta::spatial
