#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vinsta/error.hpp"
#include "vinsta/evaluation.hpp"
#include "vinsta/grounding.hpp"
#include "vinsta/io/config.hpp"
#include "vinsta/io/formats.hpp"
#include "vinsta/io/serialization.hpp"
#include "vinsta/llm/backends.hpp"
#include "vinsta/pipeline.hpp"
#include "vinsta/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

struct GlobalOptions {
  std::string config;
  std::string backend;
  std::string cache_dir;
  std::string output_dir;
  std::size_t parallel = 0;
  std::string method;
  std::size_t k_events = 0;
  bool dry_run = false;
};

vinsta::io::RunConfig resolve_config(const GlobalOptions& g) {
  if (g.config.empty()) throw vinsta::ConfigError("--config is required");
  auto c = vinsta::io::load_config(g.config);
  if (!g.backend.empty()) c.backend.kind = g.backend;
  if (!g.cache_dir.empty()) c.cache_dir = fs::absolute(g.cache_dir);
  if (!g.output_dir.empty()) c.output_dir = fs::absolute(g.output_dir);
  if (g.parallel > 0) c.parallel = g.parallel;
  if (!g.method.empty()) {
    try {
      c.segmentation.method = vinsta::segmentation::parse_method(g.method);
    } catch (const vinsta::ParameterError& e) {
      throw vinsta::ConfigError(e.what());
    }
  }
  if (g.k_events > 0) c.segmentation.num_events = g.k_events;
  if (g.dry_run) {
    c.dry_run = true;
    c.backend.kind = "dry-run";
  }
  if (auto problems = vinsta::io::check_config(c); !problems.empty()) {
    throw vinsta::ConfigError(vinsta::text::join(problems, "; "));
  }
  return c;
}

std::vector<vinsta::Task> load_tasks(const vinsta::io::RunConfig& c, const std::vector<std::string>& only) {
  const auto manifest = vinsta::io::load_manifest(c.manifest);
  std::vector<vinsta::Task> tasks;
  for (const auto& path : manifest.task_files) {
    auto task = vinsta::io::load_task(path);
    if (only.empty() || std::find(only.begin(), only.end(), task.task_id) != only.end()) tasks.push_back(std::move(task));
  }
  if (!only.empty() && tasks.size() != only.size()) throw vinsta::ConfigError("unknown task id requested");
  return tasks;
}

const vinsta::TemplateSet& templates_for(const vinsta::io::RunConfig& c) {
  static std::optional<vinsta::TemplateSet> loaded;
  if (!c.template_dir) return vinsta::TemplateSet::builtin();
  if (!loaded) loaded = vinsta::TemplateSet::load(*c.template_dir);
  return *loaded;
}

std::unique_ptr<vinsta::llm::ChatClient> make_client(const vinsta::io::RunConfig& c,
                                                     std::shared_ptr<vinsta::llm::Backend>& backend) {
  backend = vinsta::make_backend(c.backend);
  vinsta::llm::ClientOptions options;
  options.cache_dir = c.cache_dir;
  options.requests_per_second = c.backend.requests_per_second;
  options.max_concurrent = std::max<std::size_t>(c.parallel, 1);
  return std::make_unique<vinsta::llm::ChatClient>(backend, options);
}

void write_dry_run_prompts(const vinsta::io::RunConfig& c, const vinsta::llm::Backend& backend) {
  const auto* dry = dynamic_cast<const vinsta::llm::DryRunBackend*>(&backend);
  if (!dry) return;
  std::string out;
  for (const auto& r : dry->requests()) {
    out += json({{"model", r.model}, {"temperature", r.temperature}, {"prompt", r.messages.back().content}}).dump();
    out += '\n';
  }
  vinsta::io::write_file_atomic(c.output_dir / "prompts.jsonl", out);
}

json segmentation_json(const vinsta::FrameEmbeddingSeq& seq, const vinsta::segmentation::Segmentation& s,
                       const vinsta::io::RunConfig& c) {
  json events = json::array();
  const auto intervals = vinsta::event_intervals(s.partition, seq.fps_sampled, seq.duration_s);
  const auto ranges = s.partition.events();
  for (std::size_t e = 0; e < ranges.size(); ++e) {
    events.push_back({{"frames", {ranges[e].begin, ranges[e].end}}, {"interval", intervals[e]}});
  }
  return {{"video_id", seq.video_id},
          {"method", std::string(vinsta::segmentation::to_string(c.segmentation.method))},
          {"frame_count", s.partition.frame_count},
          {"boundaries", s.partition.boundaries},
          {"centers", s.centers},
          {"events", events},
          {"warnings", s.warnings}};
}

int cmd_segment(const GlobalOptions& g, const std::vector<std::string>& videos, const std::string& diagnostics) {
  const auto c = resolve_config(g);
  for (const auto& id : videos) {
    const auto seq = vinsta::io::load_embeddings(vinsta::io::embeddings_path(c, id));
    const auto s = vinsta::segmentation::segment(seq, c.segmentation);
    std::cout << segmentation_json(seq, s, c).dump(2) << '\n';
    if (!diagnostics.empty()) {
      const fs::path target = videos.size() == 1 ? fs::path(diagnostics) : fs::path(diagnostics) / (id + ".jsonl");
      vinsta::io::write_file_atomic(target, vinsta::segmentation::diagnostic_dump(s));
    }
  }
  return kExitOk;
}

int cmd_ground(const GlobalOptions& g, const std::vector<std::string>& videos) {
  const auto c = resolve_config(g);
  for (const auto& id : videos) {
    const auto seq = vinsta::io::load_embeddings(vinsta::io::embeddings_path(c, id));
    const auto s = vinsta::segmentation::segment(seq, c.segmentation);
    const auto intervals = vinsta::event_intervals(s.partition, seq.fps_sampled, seq.duration_s);
    json events = json::array();
    json flags = json::array();
    const auto path = vinsta::io::grounding_path(c, id);
    if (!c.grounding_dir.empty() && fs::exists(path)) {
      const auto track = vinsta::io::load_grounding(path);
      const auto moments = vinsta::grounding::rank_moments(track, c.moments_k);
      const auto result = vinsta::grounding::inherit_relevance(s.partition, moments, seq.fps_sampled, seq.duration_s);
      for (std::size_t e = 0; e < result.events.size(); ++e) {
        events.push_back({{"interval", intervals[e]},
                          {"fraction", result.events[e].fraction},
                          {"text", result.events[e].rendered_text}});
      }
      flags = result.flags;
    } else {
      for (std::size_t e = 0; e < intervals.size(); ++e) {
        events.push_back({{"interval", intervals[e]}, {"text", vinsta::grounding::neutral_text(e, intervals[e])}});
      }
      flags.push_back("grounding file missing");
    }
    std::cout << json({{"video_id", id}, {"events", events}, {"flags", flags}}).dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_assemble(const GlobalOptions& g, const std::vector<std::string>& task_ids) {
  const auto c = resolve_config(g);
  const auto tasks = load_tasks(c, task_ids);
  std::shared_ptr<vinsta::llm::Backend> backend;
  auto client = make_client(c, backend);
  int code = kExitOk;
  for (const auto& task : tasks) {
    vinsta::llm::Session session(*client, c.backend.model);
    try {
      const auto artifacts = vinsta::load_artifacts(c, task.video_id);
      const auto assembled = vinsta::assemble(c, artifacts, task, session, templates_for(c));
      json flags = artifacts.flags;
      for (const auto& f : assembled.flags) flags.push_back(f);
      std::cout << json({{"task_id", task.task_id}, {"clips", assembled.clips}, {"flags", flags}}).dump(2) << '\n';
    } catch (const vinsta::ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      std::cerr << "task " << task.task_id << ": " << e.what() << '\n';
      code = kExitPartial;
    }
  }
  write_dry_run_prompts(c, *backend);
  return code;
}

int cmd_answer(const GlobalOptions& g, const std::vector<std::string>& task_ids) {
  const auto c = resolve_config(g);
  const auto tasks = load_tasks(c, task_ids);
  std::shared_ptr<vinsta::llm::Backend> backend;
  auto client = make_client(c, backend);
  const auto batch = vinsta::run_batch(c, tasks, *client, templates_for(c), true);
  write_dry_run_prompts(c, *backend);
  for (const auto& o : batch.outcomes) {
    if (o.record.failed) std::cerr << "task " << o.record.task_id << " failed: " << o.record.error.value_or("") << '\n';
  }
  std::cout << "answered " << (tasks.size() - batch.failures) << "/" << tasks.size() << " tasks; results in "
            << (c.output_dir / "results.jsonl").string() << '\n';
  return batch.failures == 0 ? kExitOk : kExitPartial;
}

int cmd_eval(const GlobalOptions& g, const std::string& results_path, bool judge) {
  std::optional<vinsta::io::RunConfig> c;
  fs::path path = results_path;
  if (path.empty() || judge) {
    c = resolve_config(g);
    if (path.empty()) path = c->output_dir / "results.jsonl";
  }
  const auto records = vinsta::io::load_results(path);
  std::vector<vinsta::io::ResultRecord> closed;
  std::vector<vinsta::io::ResultRecord> open;
  for (const auto& r : records) {
    if (!r.ground_truth) continue;
    (std::holds_alternative<std::size_t>(*r.ground_truth) ? closed : open).push_back(r);
  }
  json report = {{"results", path.string()}, {"records", records.size()}};
  if (!closed.empty()) {
    report["closed"] = {{"count", closed.size()}, {"accuracy", vinsta::eval::eval_closed(closed)}};
  }
  if (!open.empty() && judge) {
    std::shared_ptr<vinsta::llm::Backend> backend;
    auto client = make_client(*c, backend);
    vinsta::llm::Session session(*client, c->backend.model);
    const auto& tmpl = templates_for(*c).get(vinsta::TemplateId::open_qa_judge, c->backend.family);
    const auto judged = vinsta::eval::eval_open_llm_judge(open, tmpl, session);
    json verdicts = json::array();
    for (const auto& v : judged.verdicts) {
      verdicts.push_back({{"task_id", v.task_id}, {"correct", v.correct}, {"flagged", v.flagged}});
    }
    report["open"] = {{"count", open.size()}, {"accuracy", judged.accuracy}, {"verdicts", verdicts}};
  } else if (!open.empty()) {
    report["open"] = {{"count", open.size()}, {"accuracy", nullptr}, {"note", "pass --judge to score open answers"}};
  }
  if (closed.empty() && open.empty()) throw vinsta::InputError("no records with ground truth in " + path.string());
  std::cout << report.dump(2) << '\n';
  return kExitOk;
}

int cmd_ablate(const GlobalOptions& g, const std::string& methods_arg, std::size_t runs,
               const std::vector<std::string>& task_ids) {
  const auto base = resolve_config(g);
  if (runs == 0) throw vinsta::ConfigError("--runs must be at least 1");
  std::vector<vinsta::segmentation::Method> methods;
  std::stringstream ss(methods_arg);
  for (std::string name; std::getline(ss, name, ',');) {
    try {
      methods.push_back(vinsta::segmentation::parse_method(std::string(vinsta::text::trim(name))));
    } catch (const vinsta::ParameterError& e) {
      throw vinsta::ConfigError(e.what());
    }
  }
  const auto tasks = load_tasks(base, task_ids);
  std::shared_ptr<vinsta::llm::Backend> backend;
  auto client = make_client(base, backend);

  std::vector<vinsta::eval::LabeledRuns> sets;
  std::size_t failures = 0;
  for (const auto method : methods) {
    vinsta::eval::LabeledRuns set{std::string(vinsta::segmentation::to_string(method)), {}};
    for (std::size_t run = 0; run < runs; ++run) {
      auto c = base;
      c.segmentation.method = method;
      c.segmentation.seed = base.segmentation.seed + run;
      c.output_dir = base.output_dir / "ablation" / set.first / ("run" + std::to_string(run + 1));
      const auto batch = vinsta::run_batch(c, tasks, *client, templates_for(c), true);
      failures += batch.failures;
      std::vector<vinsta::io::ResultRecord> records;
      for (const auto& o : batch.outcomes) records.push_back(o.record);
      set.second.push_back(std::move(records));
    }
    sets.push_back(std::move(set));
  }
  const auto rows = vinsta::eval::report_ablation(sets);
  std::cout << vinsta::eval::render_ablation_table(rows);
  vinsta::io::write_file_atomic(base.output_dir / "ablation" / "ablation.json",
                                vinsta::eval::ablation_to_json(rows).dump(2) + "\n");
  return failures == 0 ? kExitOk : kExitPartial;
}

int cmd_trace_show(const GlobalOptions& g, const std::string& what, bool as_json) {
  fs::path path = what;
  if (!fs::exists(path)) path = resolve_config(g).output_dir / "traces" / (what + ".json");
  const auto trace = vinsta::io::load_trace(path);
  if (as_json) {
    std::cout << json(trace).dump(2) << '\n';
    return kExitOk;
  }
  const auto answer = [](const vinsta::Answer& a) {
    if (const auto* i = std::get_if<std::size_t>(&a)) return std::string(1, vinsta::option_letter(*i));
    return std::get<std::string>(a);
  };
  std::cout << "informative scores:";
  for (int s : trace.informative_scores) std::cout << ' ' << s;
  std::cout << "\nevaluation order:";
  for (auto e : trace.evaluation_order) std::cout << ' ' << e;
  std::cout << '\n';
  for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
    const auto& round = trace.rounds[r];
    std::cout << "round " << r + 1 << ": events";
    for (auto e : round.merged_events) std::cout << ' ' << e;
    std::cout << " -> answer " << answer(round.answer) << ", confidence " << round.confidence << '\n';
  }
  std::cout << "final answer: " << answer(trace.final_answer) << " ("
            << (trace.termination == vinsta::Termination::confident ? "confident" : "exhausted") << ")\n";
  for (const auto& f : trace.flags) std::cout << "flag: " << f << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot long-video question answering over pre-extracted artifacts"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "Run configuration (JSON)");
  app.add_option("--backend", g.backend, "LLM backend: scripted, http or dry-run");
  app.add_option("--cache-dir", g.cache_dir, "Response cache directory");
  app.add_option("--output-dir", g.output_dir, "Where results, traces and usage go");
  app.add_option("--parallel", g.parallel, "Concurrent tasks");
  app.add_option("--method", g.method, "Segmentation: uniform, knn, dpcknn or cdpcknn");
  app.add_option("--k-events", g.k_events, "Number of events per video");
  app.add_flag("--dry-run", g.dry_run, "Render prompts without calling a model");

  std::vector<std::string> videos;
  std::string diagnostics;
  auto* segment = app.add_subcommand("segment", "Split videos into events");
  segment->add_option("videos", videos, "Video ids")->required();
  segment->add_option("--diagnostics", diagnostics, "Write per-frame rho/delta/gamma JSONL here");

  auto* ground = app.add_subcommand("ground", "Show query relevance per event");
  ground->add_option("videos", videos, "Video ids")->required();

  std::vector<std::string> task_ids;
  auto* assemble = app.add_subcommand("assemble", "Build per-event clip states");
  assemble->add_option("tasks", task_ids, "Task ids (default: all)");

  auto* answer = app.add_subcommand("answer", "Answer tasks and write results");
  answer->add_option("tasks", task_ids, "Task ids (default: all)");

  std::string results_path;
  bool judge = false;
  auto* evaluate = app.add_subcommand("eval", "Score a results file");
  evaluate->add_option("--results", results_path, "results.jsonl (default: <output_dir>/results.jsonl)");
  evaluate->add_flag("--judge", judge, "Score open answers with the judge model");

  std::string methods = "uniform,knn,dpcknn,cdpcknn";
  std::size_t runs = 3;
  auto* ablate = app.add_subcommand("ablate", "Compare segmentation methods");
  ablate->add_option("--methods", methods, "Comma-separated methods");
  ablate->add_option("--runs", runs, "Runs per method");
  ablate->add_option("tasks", task_ids, "Task ids (default: all)");

  std::string trace_target;
  bool trace_json = false;
  auto* trace = app.add_subcommand("trace", "Inspect reasoning traces");
  trace->require_subcommand(1);
  auto* show = trace->add_subcommand("show", "Print one trace");
  show->add_option("trace", trace_target, "Trace file or task id")->required();
  show->add_flag("--json", trace_json, "Print the raw JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*segment) return cmd_segment(g, videos, diagnostics);
    if (*ground) return cmd_ground(g, videos);
    if (*assemble) return cmd_assemble(g, task_ids);
    if (*answer) return cmd_answer(g, task_ids);
    if (*evaluate) return cmd_eval(g, results_path, judge);
    if (*ablate) return cmd_ablate(g, methods, runs, task_ids);
    if (*show) return cmd_trace_show(g, trace_target, trace_json);
  } catch (const vinsta::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const vinsta::TemplateError& e) {
    std::cerr << "template error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPartial;
  }
  return kExitOk;
}
