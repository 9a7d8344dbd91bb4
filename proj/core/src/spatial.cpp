#include "vinsta/spatial.hpp"

#include <algorithm>
#include <cmath>

#include "vinsta/error.hpp"
#include "vinsta/text.hpp"

namespace vinsta::spatial {
namespace {

template <class Item, class Adjust>
Inherited<Item> inherit(const std::vector<Item>& items, const std::vector<Interval>& events, Adjust adjust,
                        std::string_view what) {
  if (events.empty()) throw InputError("cannot inherit into zero events");
  Inherited<Item> out;
  out.per_event.resize(events.size());
  for (const auto& item : items) {
    bool clamped = false;
    const auto e = locate_event(events, item.interval.midpoint(), clamped);
    if (clamped) ++out.clamped;
    out.per_event[e].push_back(adjust(item));
  }
  if (out.clamped > 0) {
    out.flags.push_back(std::to_string(out.clamped) + " " + std::string(what) + " outside the timeline clamped");
  }
  if (items.empty()) out.flags.push_back("no " + std::string(what) + " available");
  return out;
}

SummaryResult summarize(bool empty, std::string_view placeholder, std::string prompt, llm::Session& session,
                        double temperature, std::string_view what) {
  SummaryResult result;
  if (empty) {
    result.text = placeholder;
    result.flags.push_back("no " + std::string(what) + " for this event; summary skipped");
    return result;
  }
  result.prompt = std::move(prompt);
  result.called = true;
  try {
    result.text = session.ask(result.prompt, temperature).text;
  } catch (const llm::LlmError& e) {
    result.text = kSummaryUnavailable;
    result.flags.push_back(std::string(what) + " summary failed: " + e.what());
  }
  return result;
}

Bindings summary_bindings(std::string interval_text, const SummaryRequest& request) {
  if (request.words <= 0) throw ParameterError("summary word budget must be positive");
  return Bindings{
      {"length", text::shortest(request.length_s)},
      {"interval_text", text::strip_final_period(interval_text)},
      {"words", std::to_string(request.words)},
      {"question", request.question},
  };
}

}  // namespace

int WordBudget::for_duration(double duration_s) const {
  const double scaled = std::round(static_cast<double>(base) * duration_s / reference_s);
  return std::max(floor, static_cast<int>(scaled));
}

std::size_t locate_event(const std::vector<Interval>& events, double t, bool& clamped) {
  clamped = false;
  if (events.empty()) throw InputError("no events to locate time in");
  if (t < events.front().start_s) {
    clamped = true;
    return 0;
  }
  for (std::size_t e = 0; e < events.size(); ++e) {
    if (events[e].contains(t)) return e;
  }
  clamped = true;
  return events.size() - 1;
}

Inherited<TimedCaption> inherit_captions(const std::vector<TimedCaption>& captions,
                                         const std::vector<Interval>& events) {
  return inherit(captions, events, [](const TimedCaption& c) { return c; }, "captions");
}

Inherited<TimedObjects> inherit_objects(const std::vector<TimedObjects>& objects, const std::vector<Interval>& events,
                                        std::size_t objects_per_frame) {
  if (objects_per_frame == 0) throw ParameterError("objects_per_frame must be at least 1");
  return inherit(
      objects, events,
      [&](const TimedObjects& o) {
        TimedObjects cut = o;
        if (cut.objects.size() > objects_per_frame) cut.objects.resize(objects_per_frame);
        return cut;
      },
      "object detections");
}

std::string render_action_captions(const std::vector<TimedCaption>& captions) {
  std::vector<std::string> sentences;
  sentences.reserve(captions.size());
  for (const auto& c : captions) sentences.push_back(text::strip_final_period(text::trim(c.text)) + ".");
  return text::join(sentences, " ");
}

std::string render_object_detections(const std::vector<TimedObjects>& objects) {
  std::vector<std::string> lines;
  lines.reserve(objects.size());
  for (const auto& o : objects) lines.push_back(text::join(o.objects, "; ") + ".");
  return text::join(lines, "\n");
}

std::string action_summary_prompt(const std::vector<TimedCaption>& captions, const SummaryRequest& request,
                                  const PromptTemplate& tmpl) {
  return render(tmpl, summary_bindings(render_action_captions(captions), request));
}

std::string object_summary_prompt(const std::vector<TimedObjects>& objects, const SummaryRequest& request,
                                  const PromptTemplate& tmpl) {
  return render(tmpl, summary_bindings(render_object_detections(objects), request));
}

SummaryResult summarize_actions(const std::vector<TimedCaption>& captions, const SummaryRequest& request,
                                const PromptTemplate& tmpl, llm::Session& session, double temperature) {
  std::string prompt = captions.empty() ? std::string() : action_summary_prompt(captions, request, tmpl);
  return summarize(captions.empty(), kNoActionInformation, std::move(prompt), session, temperature, "action captions");
}

SummaryResult summarize_objects(const std::vector<TimedObjects>& objects, const SummaryRequest& request,
                                const PromptTemplate& tmpl, llm::Session& session, double temperature) {
  std::string prompt = objects.empty() ? std::string() : object_summary_prompt(objects, request, tmpl);
  return summarize(objects.empty(), kNoObjectInformation, std::move(prompt), session, temperature,
                   "object detections");
}

}  // namespace vinsta::spatial
