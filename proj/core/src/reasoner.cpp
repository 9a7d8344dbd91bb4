#include "vinsta/reasoner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "vinsta/error.hpp"
#include "vinsta/llm/json_extract.hpp"
#include "vinsta/spatial.hpp"
#include "vinsta/text.hpp"

namespace vinsta::reasoner {
namespace {

void bind_question(Bindings& b, const Task& task) {
  b["question"] = task.question;
  if (task.options) {
    for (std::size_t i = 0; i < kOptionCount; ++i) b["option_" + std::to_string(i)] = (*task.options)[i];
  }
}

// Asks up to `attempts` times until `parse` yields a value.
template <class Parse>
auto ask_until_parsed(llm::Session& session, const std::string& prompt, const ReasonerOptions& options, Parse parse,
                      std::string& completion) -> decltype(parse(std::string_view{})) {
  for (int attempt = 0; attempt < options.parse_attempts(); ++attempt) {
    completion = session.ask(prompt, options.temperature).text;
    if (auto value = parse(completion)) return value;
  }
  return std::nullopt;
}

std::string round_label(std::size_t round) {
  return "round " + std::to_string(round + 1);
}

}  // namespace

const TemplateSet& ReasonerOptions::template_set() const {
  return templates ? *templates : TemplateSet::builtin();
}

std::string render_clip_state(const ClipInfoState& clip) {
  const auto captions = clip.action_captions.empty() ? std::string(spatial::kNoActionInformation)
                                                     : spatial::render_action_captions(clip.action_captions);
  const auto objects = clip.object_detections.empty() ? std::string(spatial::kNoObjectInformation)
                                                      : spatial::render_object_detections(clip.object_detections);
  std::string out;
  out += "Temporal grounding: " + clip.temporal_prompt + "\n";
  out += "Action captions: " + captions + "\n";
  out += "Action caption summary: " + clip.action_summary + "\n";
  out += "Object detections:\n" + objects + "\n";
  out += "Object detection summary: " + clip.object_summary;
  return out;
}

std::string render_whole_video_state(const std::vector<const ClipInfoState*>& clips, std::size_t total_clips) {
  std::vector<std::string> sections;
  sections.reserve(clips.size());
  for (const auto* clip : clips) {
    sections.push_back("### Information about one of " + text::number_word(total_clips) + " clips of the video\n" +
                       render_clip_state(*clip));
  }
  return text::join(sections, "\n\n");
}

std::string informative_prompt(const ClipInfoState& clip, const Task& task, const ReasonerOptions& options) {
  const auto id = task.is_open() ? TemplateId::answerability_open : TemplateId::answerability;
  Bindings b;
  b["lexical_node_state_representation"] = render_clip_state(clip);
  bind_question(b, task);
  return render(options.template_set().get(id, options.family), b);
}

ScoreResult informative_eval(const ClipInfoState& clip, const Task& task, const ReasonerOptions& options,
                             llm::Session& session) {
  ScoreResult r;
  r.prompt = informative_prompt(clip, task, options);
  const auto parsed = ask_until_parsed(
      session, r.prompt, options,
      [](std::string_view c) { return llm::extract_int_field(c, "answerability", 1, kTopScore); }, r.completion);
  if (parsed) {
    r.score = *parsed;
  } else {
    r.score = kFallbackInformativeScore;
    r.fallback = true;
  }
  return r;
}

std::vector<std::size_t> sort_by_informativeness(const std::vector<int>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

std::string qa_prompt(const std::string& merged_text, const Task& task, const ReasonerOptions& options) {
  const auto id = task.is_open() ? TemplateId::question_answering_open : TemplateId::question_answering;
  Bindings b;
  b["whole_video_state"] = merged_text;
  bind_question(b, task);
  return render(options.template_set().get(id, options.family), b);
}

std::size_t fallback_option(std::string_view completion) {
  for (std::size_t i = 0; i < kOptionCount; ++i) {
    const char marker[] = {option_letter(i), ')', '\0'};
    if (completion.find(marker) != std::string_view::npos) return i;
  }
  return 0;
}

QaResult answer_qa(const std::string& merged_text, const Task& task, const ReasonerOptions& options,
                   llm::Session& session) {
  QaResult r;
  r.prompt = qa_prompt(merged_text, task, options);
  if (task.is_open()) {
    r.completion = session.ask(r.prompt, options.temperature).text;
    r.answer = r.completion;
    return r;
  }
  const auto parsed = ask_until_parsed(
      session, r.prompt, options, [](std::string_view c) { return llm::extract_option_field(c, "best_answer"); },
      r.completion);
  if (parsed) {
    r.answer = *parsed;
  } else {
    r.answer = fallback_option(r.completion);
    r.fallback = true;
  }
  return r;
}

std::string reasoning_history(const std::string& qa_prompt, const std::string& qa_completion) {
  return qa_prompt + std::string(kHistorySeparator) + qa_completion;
}

std::string reflection_prompt(const std::string& qa_prompt, const std::string& qa_completion,
                              const ReasonerOptions& options) {
  const Bindings b{{"reasoning_history", reasoning_history(qa_prompt, qa_completion)}};
  return render(options.template_set().get(TemplateId::self_reflection, options.family), b);
}

ReflectionResult self_reflect(const std::string& qa_prompt, const std::string& qa_completion,
                              const ReasonerOptions& options, llm::Session& session) {
  ReflectionResult r;
  r.prompt = reflection_prompt(qa_prompt, qa_completion, options);
  const auto parsed = ask_until_parsed(
      session, r.prompt, options, [](std::string_view c) { return llm::extract_int_field(c, "confidence", 1, kTopScore); },
      r.completion);
  if (parsed) {
    r.confidence = *parsed;
  } else {
    r.confidence = kFallbackConfidence;
    r.fallback = true;
  }
  return r;
}

ReasoningTrace merge_and_answer(const std::vector<ClipInfoState>& clips, const Task& task,
                                const ReasonerOptions& options, llm::Session& session) {
  if (clips.empty()) throw InputError("cannot reason over zero clips");
  if (!task.is_open() && !task.options) throw InputError("closed task without options");

  ReasoningTrace trace;
  for (const auto& clip : clips) {
    if (!clip.informative_score) {
      throw InputError("clip " + std::to_string(clip.event_index) + " has no informative score");
    }
    trace.informative_scores.push_back(*clip.informative_score);
  }
  trace.evaluation_order = sort_by_informativeness(trace.informative_scores);
  const auto& order = trace.evaluation_order;
  const std::size_t k = clips.size();

  std::vector<std::size_t> working;
  trace.termination = Termination::exhausted;
  for (std::size_t pos = 0; pos < k; ++pos) {
    working.push_back(order[pos]);
    if (pos + 1 < k && trace.informative_scores[order[pos + 1]] == kTopScore) continue;

    std::vector<std::size_t> merged = working;
    std::sort(merged.begin(), merged.end());
    std::vector<const ClipInfoState*> selected;
    for (std::size_t e : merged) selected.push_back(&clips[e]);

    const auto qa = answer_qa(render_whole_video_state(selected, k), task, options, session);
    const auto reflection = self_reflect(qa.prompt, qa.completion, options, session);
    const std::size_t round = trace.rounds.size();
    if (qa.fallback) trace.flags.push_back(round_label(round) + ": answer not parseable, fell back to option " +
                                           std::string(1, option_letter(std::get<std::size_t>(qa.answer))));
    if (reflection.fallback) trace.flags.push_back(round_label(round) + ": confidence not parseable, using 1");

    trace.rounds.push_back(ReasoningRound{merged, qa.prompt, qa.completion, qa.answer, reflection.completion,
                                          reflection.confidence});
    trace.final_answer = qa.answer;
    if (reflection.confidence == kTopScore) {
      trace.termination = Termination::confident;
      break;
    }
  }
  return trace;
}

ReasoningTrace reason(std::vector<ClipInfoState>& clips, const Task& task, const ReasonerOptions& options,
                      llm::Session& session) {
  std::vector<ScoreResult> scores(clips.size());
  const std::size_t workers = std::clamp<std::size_t>(options.max_parallel, 1, std::max<std::size_t>(clips.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < clips.size(); ++i) scores[i] = informative_eval(clips[i], task, options, session);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < clips.size(); i = next++) {
          try {
            scores[i] = informative_eval(clips[i], task, options, session);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<std::string> flags;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    clips[i].informative_score = scores[i].score;
    if (scores[i].fallback) {
      flags.push_back("event " + std::to_string(i) + ": answerability not parseable, using " +
                      std::to_string(kFallbackInformativeScore));
    }
  }
  auto trace = merge_and_answer(clips, task, options, session);
  trace.flags.insert(trace.flags.begin(), flags.begin(), flags.end());
  return trace;
}

}  // namespace vinsta::reasoner
