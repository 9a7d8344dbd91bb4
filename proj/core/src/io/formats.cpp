#include "vinsta/io/formats.hpp"

#include <atomic>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "vinsta/error.hpp"
#include "vinsta/io/serialization.hpp"
#include "vinsta/validate.hpp"

namespace vinsta::io {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  return v;
}

nlohmann::json parse_document(const std::filesystem::path& path) {
  const auto contents = read_file(path);
  try {
    return nlohmann::json::parse(contents);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what(), e.byte);
  }
}

template <class T>
T decode_document(const std::filesystem::path& path) {
  const auto doc = parse_document(path);
  try {
    return doc.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

template <class T>
std::vector<T> load_lines(const std::filesystem::path& path) {
  const auto contents = read_file(path);
  std::vector<T> out;
  std::size_t offset = 0;
  std::size_t line_no = 0;
  while (offset < contents.size()) {
    const auto end = std::min(contents.find('\n', offset), contents.size());
    ++line_no;
    const std::string_view line(contents.data() + offset, end - offset);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(nlohmann::json::parse(line).get<T>());
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what(), offset);
      }
    }
    offset = end + 1;
  }
  return out;
}

template <class T>
void write_lines(const std::filesystem::path& path, const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) {
    out += nlohmann::json(item).dump();
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_document(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace

std::vector<std::uint8_t> encode_embeddings(const FrameEmbeddingSeq& seq) {
  if (seq.dim == 0 || seq.values.size() % seq.dim != 0) throw InputError("embedding values do not match dim");
  std::vector<std::uint8_t> out(kEmbeddingMagic.begin(), kEmbeddingMagic.end());
  out.reserve(kEmbeddingHeaderSize + seq.values.size() * 4);
  put_u32(out, kEmbeddingVersion);
  put_u32(out, static_cast<std::uint32_t>(seq.frame_count()));
  put_u32(out, static_cast<std::uint32_t>(seq.dim));
  for (float v : seq.values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

FrameEmbeddingSeq decode_embeddings(std::span<const std::uint8_t> bytes, const EmbeddingMeta& meta) {
  if (bytes.size() < kEmbeddingHeaderSize) {
    throw FormatError("truncated header: expected " + std::to_string(kEmbeddingHeaderSize) + " bytes, found " +
                          std::to_string(bytes.size()),
                      bytes.size());
  }
  for (std::size_t i = 0; i < kEmbeddingMagic.size(); ++i) {
    if (bytes[i] != static_cast<std::uint8_t>(kEmbeddingMagic[i])) throw FormatError("bad magic", i);
  }
  const auto version = get_u32(bytes, 8);
  if (version != kEmbeddingVersion) throw FormatError("unsupported version " + std::to_string(version), 8);
  const auto frames = get_u32(bytes, 12);
  const auto dim = get_u32(bytes, 16);
  if (frames == 0) throw FormatError("frame_count must be at least 1", 12);
  if (dim == 0) throw FormatError("dim must be at least 1", 16);
  const std::uint64_t expected = kEmbeddingHeaderSize + std::uint64_t{frames} * dim * 4;
  if (bytes.size() < expected) {
    throw FormatError("truncated payload: expected " + std::to_string(expected) + " bytes, found " +
                          std::to_string(bytes.size()),
                      bytes.size());
  }
  if (bytes.size() > expected) {
    throw FormatError("trailing data: expected " + std::to_string(expected) + " bytes, found " +
                          std::to_string(bytes.size()),
                      static_cast<std::size_t>(expected));
  }
  FrameEmbeddingSeq seq;
  seq.video_id = meta.video_id;
  seq.fps_sampled = meta.fps_sampled;
  seq.duration_s = meta.duration_s;
  seq.dim = dim;
  seq.values.resize(std::size_t{frames} * dim);
  for (std::size_t i = 0; i < seq.values.size(); ++i) {
    seq.values[i] = std::bit_cast<float>(get_u32(bytes, kEmbeddingHeaderSize + 4 * i));
  }
  return seq;
}

std::filesystem::path sidecar_path(const std::filesystem::path& embeddings_path) {
  auto p = embeddings_path;
  p += ".json";
  return p;
}

void write_embeddings(const std::filesystem::path& path, const FrameEmbeddingSeq& seq) {
  const auto bytes = encode_embeddings(seq);
  write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
  write_document(sidecar_path(path),
                 {{"video_id", seq.video_id}, {"fps_sampled", seq.fps_sampled}, {"duration_s", seq.duration_s}});
}

FrameEmbeddingSeq load_embeddings(const std::filesystem::path& path) {
  const auto sidecar = parse_document(sidecar_path(path));
  EmbeddingMeta meta;
  try {
    meta.video_id = sidecar.at("video_id").get<std::string>();
    meta.fps_sampled = sidecar.at("fps_sampled").get<double>();
    meta.duration_s = sidecar.at("duration_s").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(sidecar_path(path).string() + ": " + e.what());
  }
  const auto contents = read_file(path);
  auto seq = decode_embeddings(
      std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(contents.data()), contents.size()), meta);
  if (auto report = validate(seq); !report.empty()) throw FormatError(path.string() + ": " + report.front());
  return seq;
}

std::vector<TimedCaption> load_captions(const std::filesystem::path& path) {
  return load_lines<TimedCaption>(path);
}

void write_captions(const std::filesystem::path& path, const std::vector<TimedCaption>& captions) {
  write_lines(path, captions);
}

std::vector<TimedObjects> load_objects(const std::filesystem::path& path) {
  return load_lines<TimedObjects>(path);
}

void write_objects(const std::filesystem::path& path, const std::vector<TimedObjects>& objects) {
  write_lines(path, objects);
}

GroundingTrack load_grounding(const std::filesystem::path& path) {
  auto track = decode_document<GroundingTrack>(path);
  if (auto report = validate(track); !report.empty()) throw FormatError(path.string() + ": " + report.front());
  return track;
}

void write_grounding(const std::filesystem::path& path, const GroundingTrack& track) {
  write_document(path, track);
}

Task load_task(const std::filesystem::path& path) {
  auto task = decode_document<Task>(path);
  if (auto report = validate(task); !report.empty()) throw FormatError(path.string() + ": " + report.front());
  return task;
}

void write_task(const std::filesystem::path& path, const Task& task) {
  write_document(path, task);
}

ReasoningTrace load_trace(const std::filesystem::path& path) {
  return decode_document<ReasoningTrace>(path);
}

void write_trace(const std::filesystem::path& path, const ReasoningTrace& trace) {
  write_document(path, trace);
}

std::string encode_result_line(const ResultRecord& record) {
  return nlohmann::json(record).dump();
}

std::vector<ResultRecord> load_results(const std::filesystem::path& path) {
  return load_lines<ResultRecord>(path);
}

void write_results(const std::filesystem::path& path, const std::vector<ResultRecord>& records) {
  write_lines(path, records);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id() << '.' << counter.fetch_add(1);
  auto tmp = path;
  tmp += suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace vinsta::io
