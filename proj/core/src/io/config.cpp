#include "vinsta/io/config.hpp"

#include <set>

#include "vinsta/error.hpp"
#include "vinsta/io/formats.hpp"

namespace vinsta::io {
namespace {

namespace fs = std::filesystem;

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.contains(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

template <class T>
void read(const nlohmann::json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void read_path(const nlohmann::json& obj, const char* key, const fs::path& base, fs::path& out) {
  std::string s;
  if (!obj.contains(key)) return;
  read(obj, key, s);
  out = resolve(base, s);
}

void read_optional_path(const nlohmann::json& obj, const char* key, const fs::path& base,
                        std::optional<fs::path>& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  fs::path p;
  read_path(obj, key, base, p);
  out = p;
}

void require_dir(std::vector<std::string>& problems, const fs::path& p, const char* what, bool required) {
  if (p.empty()) {
    if (required) problems.push_back(std::string(what) + " is not set");
    return;
  }
  if (!fs::is_directory(p)) problems.push_back(std::string(what) + " does not exist: " + p.string());
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"manifest", "embeddings_dir", "captions_dir", "objects_dir", "grounding_dir", "output_dir",
                  "cache_dir", "template_dir", "segmentation", "moments_k", "words", "objects_per_frame",
                  "summary_temperature", "reasoning_temperature", "backend", "parallel", "seed", "dry_run"},
                 "config");
  RunConfig c;
  c.output_dir = resolve(base_dir, "out");
  read_path(doc, "manifest", base_dir, c.manifest);
  read_path(doc, "embeddings_dir", base_dir, c.embeddings_dir);
  read_path(doc, "captions_dir", base_dir, c.captions_dir);
  read_path(doc, "objects_dir", base_dir, c.objects_dir);
  read_path(doc, "grounding_dir", base_dir, c.grounding_dir);
  read_path(doc, "output_dir", base_dir, c.output_dir);
  read_optional_path(doc, "cache_dir", base_dir, c.cache_dir);
  read_optional_path(doc, "template_dir", base_dir, c.template_dir);
  read(doc, "moments_k", c.moments_k);
  read(doc, "objects_per_frame", c.objects_per_frame);
  read(doc, "summary_temperature", c.summary_temperature);
  read(doc, "reasoning_temperature", c.reasoning_temperature);
  read(doc, "parallel", c.parallel);
  read(doc, "seed", c.seed);
  read(doc, "dry_run", c.dry_run);
  c.segmentation.seed = c.seed;

  if (doc.contains("segmentation")) {
    const auto& s = doc.at("segmentation");
    if (!s.is_object()) throw ConfigError("'segmentation' must be an object");
    reject_unknown(s, {"method", "num_events", "knn_k", "seed"}, "segmentation");
    std::string method(segmentation::to_string(c.segmentation.method));
    read(s, "method", method);
    try {
      c.segmentation.method = segmentation::parse_method(method);
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
    read(s, "num_events", c.segmentation.num_events);
    if (s.contains("knn_k") && !s.at("knn_k").is_null()) {
      std::size_t k = 0;
      read(s, "knn_k", k);
      c.segmentation.knn_k = k;
    }
    read(s, "seed", c.segmentation.seed);
  }

  if (doc.contains("words")) {
    const auto& w = doc.at("words");
    if (!w.is_object()) throw ConfigError("'words' must be an object");
    reject_unknown(w, {"base", "reference_s", "floor"}, "words");
    read(w, "base", c.words.base);
    read(w, "reference_s", c.words.reference_s);
    read(w, "floor", c.words.floor);
  }

  if (doc.contains("backend")) {
    const auto& b = doc.at("backend");
    if (!b.is_object()) throw ConfigError("'backend' must be an object");
    reject_unknown(b, {"kind", "model", "family", "base_url", "api_key_env", "script", "requests_per_second"},
                   "backend");
    read(b, "kind", c.backend.kind);
    read(b, "model", c.backend.model);
    std::string family(to_string(c.backend.family));
    read(b, "family", family);
    try {
      c.backend.family = parse_model_family(family);
    } catch (const TemplateError& e) {
      throw ConfigError(e.what());
    }
    read(b, "base_url", c.backend.base_url);
    read(b, "api_key_env", c.backend.api_key_env);
    read_path(b, "script", base_dir, c.backend.script);
    read(b, "requests_per_second", c.backend.requests_per_second);
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::string contents;
  try {
    contents = read_file(path);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  const auto doc = nlohmann::json::parse(contents, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config is not valid JSON: " + path.string());
  return config_from_json(doc, fs::absolute(path).parent_path());
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json seg = {{"method", std::string(segmentation::to_string(c.segmentation.method))},
                        {"num_events", c.segmentation.num_events},
                        {"seed", c.segmentation.seed}};
  seg["knn_k"] = c.segmentation.knn_k ? nlohmann::json(*c.segmentation.knn_k) : nlohmann::json(nullptr);
  nlohmann::json doc = {
      {"manifest", c.manifest.string()},
      {"embeddings_dir", c.embeddings_dir.string()},
      {"captions_dir", c.captions_dir.string()},
      {"objects_dir", c.objects_dir.string()},
      {"grounding_dir", c.grounding_dir.string()},
      {"output_dir", c.output_dir.string()},
      {"segmentation", seg},
      {"moments_k", c.moments_k},
      {"words", {{"base", c.words.base}, {"reference_s", c.words.reference_s}, {"floor", c.words.floor}}},
      {"objects_per_frame", c.objects_per_frame},
      {"summary_temperature", c.summary_temperature},
      {"reasoning_temperature", c.reasoning_temperature},
      {"backend",
       {{"kind", c.backend.kind},
        {"model", c.backend.model},
        {"family", std::string(to_string(c.backend.family))},
        {"base_url", c.backend.base_url},
        {"api_key_env", c.backend.api_key_env},
        {"script", c.backend.script.string()},
        {"requests_per_second", c.backend.requests_per_second}}},
      {"parallel", c.parallel},
      {"seed", c.seed},
      {"dry_run", c.dry_run},
  };
  doc["cache_dir"] = c.cache_dir ? nlohmann::json(c.cache_dir->string()) : nlohmann::json(nullptr);
  doc["template_dir"] = c.template_dir ? nlohmann::json(c.template_dir->string()) : nlohmann::json(nullptr);
  return doc;
}

std::vector<std::string> check_config(const RunConfig& c) {
  std::vector<std::string> problems;
  if (c.manifest.empty()) {
    problems.emplace_back("manifest is not set");
  } else if (!fs::is_regular_file(c.manifest)) {
    problems.push_back("manifest does not exist: " + c.manifest.string());
  }
  require_dir(problems, c.embeddings_dir, "embeddings_dir", true);
  require_dir(problems, c.captions_dir, "captions_dir", false);
  require_dir(problems, c.objects_dir, "objects_dir", false);
  require_dir(problems, c.grounding_dir, "grounding_dir", false);
  if (c.template_dir) require_dir(problems, *c.template_dir, "template_dir", true);
  if (c.segmentation.num_events == 0) problems.emplace_back("segmentation.num_events must be at least 1");
  if (c.segmentation.knn_k && *c.segmentation.knn_k == 0) problems.emplace_back("segmentation.knn_k must be at least 1");
  if (c.moments_k == 0) problems.emplace_back("moments_k must be at least 1");
  if (c.words.base <= 0 || c.words.floor <= 0 || !(c.words.reference_s > 0.0)) {
    problems.emplace_back("word budget values must be positive");
  }
  if (c.objects_per_frame == 0) problems.emplace_back("objects_per_frame must be at least 1");
  if (c.summary_temperature < 0.0 || c.reasoning_temperature < 0.0) problems.emplace_back("temperatures must be >= 0");
  if (c.parallel == 0) problems.emplace_back("parallel must be at least 1");
  const auto& kind = c.backend.kind;
  if (kind != "scripted" && kind != "http" && kind != "dry-run") {
    problems.push_back("unknown backend kind: " + kind);
  } else if (kind == "scripted" && !c.dry_run) {
    if (c.backend.script.empty()) {
      problems.emplace_back("scripted backend needs backend.script");
    } else if (!fs::is_regular_file(c.backend.script)) {
      problems.push_back("backend script does not exist: " + c.backend.script.string());
    }
  }
  return problems;
}

Manifest load_manifest(const fs::path& path) {
  const auto doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw FormatError("manifest is not a JSON object: " + path.string());
  Manifest m;
  try {
    m.dataset = doc.value("dataset", std::string());
    m.split = doc.value("split", std::string());
    const auto base = fs::absolute(path).parent_path();
    for (const auto& t : doc.at("tasks")) m.task_files.push_back(resolve(base, t.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return m;
}

fs::path embeddings_path(const RunConfig& config, const std::string& video_id) {
  return config.embeddings_dir / (video_id + ".emb");
}

fs::path captions_path(const RunConfig& config, const std::string& video_id) {
  return config.captions_dir / (video_id + ".jsonl");
}

fs::path objects_path(const RunConfig& config, const std::string& video_id) {
  return config.objects_dir / (video_id + ".jsonl");
}

fs::path grounding_path(const RunConfig& config, const std::string& video_id) {
  return config.grounding_dir / (video_id + ".json");
}

}  // namespace vinsta::io
