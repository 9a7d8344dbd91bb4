#include "vinsta/types.hpp"

#include <algorithm>
#include <cmath>

#include "vinsta/error.hpp"
#include "vinsta/validate.hpp"

namespace vinsta {

double overlap(const Interval& a, const Interval& b) noexcept {
  const double lo = std::max(a.start_s, b.start_s);
  const double hi = std::min(a.end_s, b.end_s);
  return hi > lo ? hi - lo : 0.0;
}

std::size_t FrameEmbeddingSeq::frame_at(double t) const noexcept {
  if (!(t > 0.0)) return 0;
  return static_cast<std::size_t>(std::floor(t * fps_sampled));
}

std::vector<FrameRange> EventPartition::events() const {
  std::vector<FrameRange> out;
  out.reserve(boundaries.size() + 1);
  std::size_t begin = 0;
  for (std::size_t b : boundaries) {
    out.push_back({begin, b});
    begin = b;
  }
  out.push_back({begin, frame_count});
  return out;
}

EventPartition EventPartition::from_boundaries(std::size_t frame_count, std::vector<std::size_t> boundaries) {
  EventPartition p{frame_count, std::move(boundaries)};
  if (auto report = validate(p); !report.empty()) {
    throw InputError("invalid event partition: " + report.front());
  }
  return p;
}

std::vector<Interval> event_intervals(const EventPartition& partition, double fps_sampled, double duration_s) {
  std::vector<Interval> out;
  const auto events = partition.events();
  out.reserve(events.size());
  for (const auto& e : events) {
    out.push_back({static_cast<double>(e.begin) / fps_sampled, static_cast<double>(e.end) / fps_sampled});
  }
  if (!out.empty()) {
    out.front().start_s = 0.0;
    out.back().end_s = std::max(out.back().end_s, duration_s);
  }
  return out;
}

char option_letter(std::size_t index) {
  if (index >= kOptionCount) throw ParameterError("option index out of range: " + std::to_string(index));
  return static_cast<char>('A' + index);
}

}  // namespace vinsta
