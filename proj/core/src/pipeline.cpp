#include "vinsta/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <thread>

#include "vinsta/error.hpp"
#include "vinsta/grounding.hpp"
#include "vinsta/io/formats.hpp"
#include "vinsta/io/serialization.hpp"
#include "vinsta/llm/backends.hpp"
#include "vinsta/reasoner.hpp"
#include "vinsta/spatial.hpp"

namespace vinsta {
namespace {

namespace fs = std::filesystem;

std::string prefixed(std::size_t event, const std::string& flag) {
  return "event " + std::to_string(event) + ": " + flag;
}

void append(std::vector<std::string>& into, const std::vector<std::string>& from) {
  into.insert(into.end(), from.begin(), from.end());
}

segmentation::Segmentation run_segmentation(const io::RunConfig& config, const FrameEmbeddingSeq& seq,
                                            std::vector<std::string>& flags) {
  try {
    return segmentation::segment(seq, config.segmentation);
  } catch (const InfeasiblePartitionError& e) {
    const auto k = std::min(config.segmentation.num_events, seq.frame_count());
    flags.push_back(std::string(e.what()) + "; fell back to uniform segmentation with K=" + std::to_string(k));
    return segmentation::segment_uniform(seq, k);
  }
}

std::vector<std::string> temporal_prompts(const io::RunConfig& config, const VideoArtifacts& artifacts,
                                          const EventPartition& partition, const std::vector<Interval>& events,
                                          std::vector<std::string>& flags) {
  std::vector<std::string> out(events.size());
  if (artifacts.grounding && !artifacts.grounding->clips.empty()) {
    const auto moments = grounding::rank_moments(*artifacts.grounding, config.moments_k);
    auto inherited = grounding::inherit_relevance(partition, moments, artifacts.embeddings.fps_sampled,
                                                  artifacts.embeddings.duration_s);
    append(flags, inherited.flags);
    for (std::size_t e = 0; e < events.size(); ++e) out[e] = std::move(inherited.events[e].rendered_text);
    return out;
  }
  if (artifacts.grounding) flags.emplace_back("grounding track has no clips; using neutral temporal prompts");
  for (std::size_t e = 0; e < events.size(); ++e) out[e] = grounding::neutral_text(e, events[e]);
  return out;
}

std::string termination_name(Termination t) {
  return t == Termination::confident ? "confident" : "exhausted";
}

void write_outcomes(const io::RunConfig& config, const BatchResult& batch, const llm::ChatClient& client) {
  std::vector<io::ResultRecord> records;
  for (const auto& outcome : batch.outcomes) {
    records.push_back(outcome.record);
    if (outcome.trace) {
      io::write_trace(config.output_dir / "traces" / (outcome.record.task_id + ".json"), *outcome.trace);
    }
  }
  io::write_results(config.output_dir / "results.jsonl", records);
  client.write_usage(config.output_dir / "usage.json");
}

}  // namespace

VideoArtifacts load_artifacts(const io::RunConfig& config, const std::string& video_id) {
  VideoArtifacts a;
  a.embeddings = io::load_embeddings(io::embeddings_path(config, video_id));
  if (a.embeddings.video_id != video_id) {
    a.flags.push_back("embedding sidecar names video '" + a.embeddings.video_id + "'");
  }

  const auto load_optional = [&](const fs::path& dir, const fs::path& path, const char* what, auto loader) {
    if (dir.empty() || !fs::exists(path)) {
      a.flags.push_back(std::string(what) + " file missing");
      return;
    }
    loader(path);
  };
  load_optional(config.grounding_dir, io::grounding_path(config, video_id), "grounding",
                [&](const fs::path& p) { a.grounding = io::load_grounding(p); });
  load_optional(config.captions_dir, io::captions_path(config, video_id), "captions",
                [&](const fs::path& p) { a.captions = io::load_captions(p); });
  load_optional(config.objects_dir, io::objects_path(config, video_id), "objects",
                [&](const fs::path& p) { a.objects = io::load_objects(p); });
  if (!a.grounding) a.flags.emplace_back("no grounding available; using neutral temporal prompts");
  return a;
}

AssembledVideo assemble(const io::RunConfig& config, const VideoArtifacts& artifacts, const Task& task,
                        llm::Session& session, const TemplateSet& templates) {
  AssembledVideo out;
  const auto& seq = artifacts.embeddings;
  out.segmentation = run_segmentation(config, seq, out.flags);
  append(out.flags, out.segmentation.warnings);

  const auto& partition = out.segmentation.partition;
  const auto events = event_intervals(partition, seq.fps_sampled, seq.duration_s);
  const auto temporal = temporal_prompts(config, artifacts, partition, events, out.flags);

  auto captions = spatial::inherit_captions(artifacts.captions, events);
  auto objects = spatial::inherit_objects(artifacts.objects, events, config.objects_per_frame);
  append(out.flags, captions.flags);
  append(out.flags, objects.flags);

  const auto& action_tmpl = templates.get(TemplateId::action_summary, config.backend.family);
  const auto& object_tmpl = templates.get(TemplateId::object_summary, config.backend.family);
  for (std::size_t e = 0; e < events.size(); ++e) {
    ClipInfoState clip;
    clip.event_index = e;
    clip.interval = events[e];
    clip.action_captions = std::move(captions.per_event[e]);
    clip.object_detections = std::move(objects.per_event[e]);
    clip.temporal_prompt = temporal[e];

    const spatial::SummaryRequest request{events[e].duration(), task.question,
                                          config.words.for_duration(events[e].duration())};
    auto actions = spatial::summarize_actions(clip.action_captions, request, action_tmpl, session,
                                              config.summary_temperature);
    auto objs = spatial::summarize_objects(clip.object_detections, request, object_tmpl, session,
                                           config.summary_temperature);
    clip.action_summary = std::move(actions.text);
    clip.object_summary = std::move(objs.text);
    for (const auto& f : actions.flags) out.flags.push_back(prefixed(e, f));
    for (const auto& f : objs.flags) out.flags.push_back(prefixed(e, f));
    out.clips.push_back(std::move(clip));
  }
  return out;
}

TaskOutcome run_pipeline(const io::RunConfig& config, const Task& task, const VideoArtifacts& artifacts,
                         llm::ChatClient& client, const TemplateSet& templates) {
  TaskOutcome outcome;
  auto& record = outcome.record;
  record.video_id = task.video_id;
  record.task_id = task.task_id;
  record.question = task.question;
  record.ground_truth = task.ground_truth;
  record.segmentation_method = std::string(segmentation::to_string(config.segmentation.method));
  record.flags = artifacts.flags;

  llm::Session session(client, config.backend.model);
  try {
    auto assembled = assemble(config, artifacts, task, session, templates);
    append(record.flags, assembled.flags);
    record.boundaries = assembled.segmentation.partition.boundaries;

    reasoner::ReasonerOptions options;
    options.family = config.backend.family;
    options.templates = &templates;
    options.temperature = config.reasoning_temperature;
    auto trace = reasoner::reason(assembled.clips, task, options, session);

    record.prediction = trace.final_answer;
    record.rounds_used = trace.rounds.size();
    record.informative_scores = trace.informative_scores;
    for (const auto& round : trace.rounds) record.confidences.push_back(round.confidence);
    record.termination = termination_name(trace.termination);
    append(record.flags, trace.flags);
    outcome.clips = std::move(assembled.clips);
    outcome.trace = std::move(trace);
  } catch (const std::exception& e) {
    record.failed = true;
    record.error = e.what();
  }

  // Open questions are only scored by the judge.
  if (task.ground_truth && !task.is_open()) record.correct = record.prediction == task.ground_truth;
  record.llm_calls = session.calls();
  record.cache_hits = session.cache_hits();
  record.prompt_tokens = session.prompt_tokens();
  record.completion_tokens = session.completion_tokens();
  return outcome;
}

TaskOutcome run_pipeline(const io::RunConfig& config, const Task& task, llm::ChatClient& client,
                         const TemplateSet& templates) {
  VideoArtifacts artifacts;
  try {
    artifacts = load_artifacts(config, task.video_id);
  } catch (const std::exception& e) {
    TaskOutcome outcome;
    auto& r = outcome.record;
    r.video_id = task.video_id;
    r.task_id = task.task_id;
    r.question = task.question;
    r.ground_truth = task.ground_truth;
    if (task.ground_truth && !task.is_open()) r.correct = false;
    r.segmentation_method = std::string(segmentation::to_string(config.segmentation.method));
    r.failed = true;
    r.error = e.what();
    return outcome;
  }
  return run_pipeline(config, task, artifacts, client, templates);
}

BatchResult run_batch(const io::RunConfig& config, const std::vector<Task>& tasks, llm::ChatClient& client,
                      const TemplateSet& templates, bool write_outputs) {
  BatchResult batch;
  batch.outcomes.resize(tasks.size());
  const std::size_t workers = std::clamp<std::size_t>(config.parallel, 1, std::max<std::size_t>(tasks.size(), 1));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      batch.outcomes[i] = run_pipeline(config, tasks[i], client, templates);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  batch.failures = static_cast<std::size_t>(std::count_if(
      batch.outcomes.begin(), batch.outcomes.end(), [](const TaskOutcome& o) { return o.record.failed; }));
  if (write_outputs) write_outcomes(config, batch, client);
  return batch;
}

std::shared_ptr<llm::Backend> make_backend(const io::BackendSettings& settings) {
  if (settings.kind == "scripted") return llm::ScriptedBackend::from_file(settings.script);
  if (settings.kind == "dry-run") return std::make_shared<llm::DryRunBackend>();
  if (settings.kind == "http") {
    auto options = llm::HttpBackend::options_from_env(settings.api_key_env);
    if (!settings.base_url.empty()) options.base_url = settings.base_url;
    return std::make_shared<llm::HttpBackend>(options);
  }
  throw ConfigError("unknown backend kind: " + settings.kind);
}

}  // namespace vinsta
