#include "fixtures.hpp"

#include <algorithm>
#include <regex>

#include "vinsta/grounding.hpp"
#include "vinsta/io/formats.hpp"
#include "vinsta/text.hpp"

#ifndef VINSTA_TEST_DATA_DIR
#define VINSTA_TEST_DATA_DIR "tests/data"
#endif

namespace vinsta::testing {

namespace fs = std::filesystem;

fs::path data_dir() {
  return VINSTA_TEST_DATA_DIR;
}

FrameEmbeddingSeq make_seq(const Frames& frames, double fps, std::optional<double> duration) {
  FrameEmbeddingSeq seq;
  seq.video_id = "synthetic";
  seq.fps_sampled = fps;
  seq.duration_s = duration.value_or(static_cast<double>(frames.size()) / fps);
  seq.dim = frames.empty() ? 0 : frames.front().size();
  for (const auto& f : frames) {
    for (double v : f) seq.values.push_back(static_cast<float>(v));
  }
  return seq;
}

Frames to_frames(const FrameEmbeddingSeq& seq) {
  Frames out;
  for (std::size_t i = 0; i < seq.frame_count(); ++i) {
    const auto f = seq.frame(i);
    out.emplace_back(f.begin(), f.end());
  }
  return out;
}

Frames random_frames(std::mt19937_64& rng, std::size_t m, std::size_t dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Frames out(m, std::vector<double>(dim));
  for (auto& f : out) {
    // Round through float so the oracle sees exactly what the library stores.
    for (auto& v : f) v = static_cast<float>(u(rng));
  }
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("vinsta-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Task closed_task(std::string id, std::string video) {
  Task t;
  t.task_id = std::move(id);
  t.video_id = std::move(video);
  t.question = "What is C doing?";
  t.options = std::array<std::string, kOptionCount>{"cooking", "cleaning", "reading", "running", "sleeping"};
  t.ground_truth = Answer{std::size_t{1}};
  return t;
}

std::vector<ClipInfoState> plain_clips(std::size_t k, double clip_len) {
  std::vector<ClipInfoState> clips;
  for (std::size_t e = 0; e < k; ++e) {
    ClipInfoState c;
    c.event_index = e;
    c.interval = {clip_len * static_cast<double>(e), clip_len * static_cast<double>(e + 1)};
    c.temporal_prompt = grounding::neutral_text(e, c.interval);
    c.action_summary = "summary " + std::to_string(e + 1);
    c.object_summary = "objects " + std::to_string(e + 1);
    clips.push_back(std::move(c));
  }
  return clips;
}

SyntheticSuite write_synthetic_suite(const fs::path& dir, std::size_t videos, std::uint64_t seed) {
  constexpr std::size_t kFrames = 24;
  constexpr std::size_t kEvents = 4;
  constexpr std::size_t kDim = 6;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 0.05);

  SyntheticSuite suite;
  auto& c = suite.config;
  c.embeddings_dir = dir / "embeddings";
  c.captions_dir = dir / "captions";
  c.output_dir = dir / "out";
  c.manifest = dir / "manifest.json";
  c.segmentation.num_events = kEvents;
  c.backend.kind = "scripted";
  fs::create_directories(c.embeddings_dir);
  fs::create_directories(c.captions_dir);
  fs::create_directories(dir / "tasks");

  nlohmann::json manifest = {{"dataset", "synthetic"}, {"split", "planted"}, {"tasks", nlohmann::json::array()}};
  for (std::size_t v = 0; v < videos; ++v) {
    // Segment lengths in [4, 8] summing to kFrames.
    std::vector<std::size_t> lengths;
    for (;;) {
      lengths.clear();
      std::size_t total = 0;
      for (std::size_t s = 0; s + 1 < kEvents; ++s) {
        lengths.push_back(4 + rng() % 5);
        total += lengths.back();
      }
      if (total + 4 <= kFrames && kFrames - total <= 8) {
        lengths.push_back(kFrames - total);
        break;
      }
    }
    std::vector<std::size_t> starts{0};
    for (std::size_t s = 0; s + 1 < kEvents; ++s) starts.push_back(starts.back() + lengths[s]);
    suite.planted_boundaries.push_back({starts.begin() + 1, starts.end()});

    // Blob s sits on axis s; the first frame of every later segment is an
    // off-axis transition frame, so it has the lowest local density.
    Frames frames;
    for (std::size_t s = 0; s < kEvents; ++s) {
      for (std::size_t j = 0; j < lengths[s]; ++j) {
        std::vector<double> f(kDim, 0.0);
        if (s > 0 && j == 0) {
          f[s - 1] = 1.5;
          f[s] = 1.5;
          f[4 + (s % 2)] = 3.0;
        } else {
          f[s] = 3.0;
        }
        for (auto& x : f) x += jitter(rng);
        frames.push_back(f);
      }
    }

    const std::string video_id = "syn" + std::to_string(v);
    auto seq = make_seq(frames);
    seq.video_id = video_id;
    io::write_embeddings(io::embeddings_path(c, video_id), seq);

    const std::size_t target = rng() % kEvents;
    const std::string item = "item" + std::to_string(v);
    std::vector<TimedCaption> captions;
    for (std::size_t i = 0; i < kFrames; ++i) {
      std::string text = "C looks around the room";
      if (i == starts[target]) text = "C picks up the " + item;
      if (i == starts[target] + lengths[target] - 1) text = "C puts the " + item + " back";
      captions.push_back({{static_cast<double>(i), static_cast<double>(i + 1)}, text});
    }
    io::write_captions(io::captions_path(c, video_id), captions);

    Task task;
    task.task_id = "task" + std::to_string(v);
    task.video_id = video_id;
    task.question = "What did C finally do with the " + item + "?";
    const std::size_t truth = rng() % kOptionCount;
    std::array<std::string, kOptionCount> options;
    for (std::size_t o = 0; o < kOptionCount; ++o) options[o] = "distractor " + std::to_string(o) + " for " + item;
    options[truth] = "put the " + item + " back";
    task.options = options;
    task.ground_truth = Answer{truth};
    io::write_task(dir / "tasks" / (task.task_id + ".json"), task);
    manifest["tasks"].push_back("tasks/" + task.task_id + ".json");
    suite.tasks.push_back(std::move(task));
  }
  io::write_file_atomic(c.manifest, manifest.dump(2));
  return suite;
}

std::string synthetic_responder(const llm::ChatRequest& request) {
  const std::string& prompt = request.messages.back().content;
  if (prompt.find("Assessment of Decision-Making") != std::string::npos) return "{'confidence': 3}";
  if (prompt.find("Here are the descriptions:") != std::string::npos) return "A person moves around.";
  if (prompt.find("Here are the object detections:") != std::string::npos) return "Some objects.";

  static const std::regex item_re("with the (item[0-9]+)\\?");
  std::smatch m;
  if (!std::regex_search(prompt, m, item_re)) return "I cannot tell.";
  const std::string item = m[1];
  const std::string first = "C picks up the " + item;
  const std::string last = "C puts the " + item + " back";

  // Split into clip sections.
  const std::string header = "### Information about one of ";
  std::vector<std::string> sections;
  for (std::size_t pos = prompt.find(header); pos != std::string::npos;) {
    const auto next = prompt.find(header, pos + 1);
    sections.push_back(prompt.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    pos = next;
  }
  const auto holds = [&](const std::string& s) {
    return int(s.find(first) != std::string::npos) + int(s.find(last) != std::string::npos);
  };

  if (prompt.find("'answerability'") != std::string::npos) {
    const int n = sections.empty() ? 0 : holds(sections.back());
    return "{'answerability': " + std::to_string(n + 1) + "}";
  }
  if (prompt.find("'best_answer'") != std::string::npos) {
    const bool together = std::any_of(sections.begin(), sections.end(), [&](const std::string& s) { return holds(s) == 2; });
    char truth = 'A';
    for (char letter = 'A'; letter <= 'E'; ++letter) {
      if (prompt.find(std::string(1, letter) + ") put the " + item + " back") != std::string::npos) truth = letter;
    }
    const char reply = together ? truth : (truth == 'A' ? 'B' : 'A');
    return std::string("{'best_answer': '") + reply + "'}";
  }
  return "I cannot tell.";
}

std::shared_ptr<llm::ScriptedBackend> loop_backend(std::vector<int> scores, std::vector<int> confidences) {
  auto next = std::make_shared<std::size_t>(0);
  return std::make_shared<llm::ScriptedBackend>(
      [scores = std::move(scores), confidences = std::move(confidences),
       next](const llm::ChatRequest& request) -> std::optional<std::string> {
        const std::string& prompt = request.messages.back().content;
        if (prompt.find("Assessment of Decision-Making") != std::string::npos) {
          return "{'confidence': " + std::to_string(confidences.at((*next)++)) + "}";
        }
        if (prompt.find("'best_answer'") != std::string::npos) return "{'best_answer': 'A'}";
        static const std::regex clip_re("Clip ([0-9]+) spans");
        std::smatch m;
        if (std::regex_search(prompt, m, clip_re)) {
          return "{'answerability': " + std::to_string(scores.at(std::stoul(m[1]) - 1)) + "}";
        }
        return std::nullopt;
      });
}

}  // namespace vinsta::testing
