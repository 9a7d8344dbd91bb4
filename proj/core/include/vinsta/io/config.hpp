#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vinsta/segmentation.hpp"
#include "vinsta/spatial.hpp"
#include "vinsta/templates.hpp"

namespace vinsta::io {

inline constexpr std::size_t kDefaultEventCount = 4;

struct BackendSettings {
  /// "scripted", "http" or "dry-run".
  std::string kind = "scripted";
  std::string model = "gpt-3.5-turbo-1106";
  ModelFamily family = ModelFamily::standard;
  std::string base_url;
  std::string api_key_env = "VINSTA_API_KEY";
  std::filesystem::path script;
  double requests_per_second = 0.0;
};

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path embeddings_dir;
  std::filesystem::path captions_dir;
  std::filesystem::path objects_dir;
  std::filesystem::path grounding_dir;
  std::filesystem::path output_dir = "out";
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> template_dir;

  segmentation::SegmentationConfig segmentation{segmentation::Method::cdpcknn, kDefaultEventCount, {}, 0};
  std::size_t moments_k = 5;
  spatial::WordBudget words;
  std::size_t objects_per_frame = spatial::kDefaultObjectsPerFrame;
  double summary_temperature = spatial::kSummaryTemperature;
  double reasoning_temperature = 0.0;

  BackendSettings backend;
  std::size_t parallel = 1;
  std::uint64_t seed = 0;
  bool dry_run = false;
};

/// Relative paths resolve against the config file's directory.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
nlohmann::json config_to_json(const RunConfig& config);

/// Problems that must stop a run before it starts (missing paths, K = 0, ...).
std::vector<std::string> check_config(const RunConfig& config);

struct Manifest {
  std::string dataset;
  std::string split;
  std::vector<std::filesystem::path> task_files;
};

/// {"dataset", "split", "tasks": [relative paths]}.
Manifest load_manifest(const std::filesystem::path& path);

/// Artifact locations for one video.
std::filesystem::path embeddings_path(const RunConfig& config, const std::string& video_id);
std::filesystem::path captions_path(const RunConfig& config, const std::string& video_id);
std::filesystem::path objects_path(const RunConfig& config, const std::string& video_id);
std::filesystem::path grounding_path(const RunConfig& config, const std::string& video_id);

}  // namespace vinsta::io
