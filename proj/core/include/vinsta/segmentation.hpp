#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vinsta/types.hpp"

namespace vinsta::segmentation {

/// Per-frame local density, distance index and their product.
struct DensityProfile {
  std::vector<double> rho;
  std::vector<double> delta;
  std::vector<double> gamma;
  std::size_t knn_k = 0;
};

enum class Method { uniform, knn, dpcknn, cdpcknn };

std::string_view to_string(Method method) noexcept;
/// Throws ParameterError for unknown names.
Method parse_method(std::string_view name);

struct SegmentationConfig {
  Method method = Method::cdpcknn;
  std::size_t num_events = 4;
  /// Neighbour count for the local density; unset means min(5, M - 1).
  std::optional<std::size_t> knn_k;
  /// Seeds k-means++ in the knn baseline; no other path is randomised.
  std::uint64_t seed = 0;
};

struct Segmentation {
  EventPartition partition;
  DensityProfile profile;
  std::vector<std::size_t> centers;
  /// Raw per-frame cluster labels before span coercion (knn / dpcknn only).
  std::vector<std::size_t> raw_labels;
  std::vector<std::string> warnings;
};

std::size_t default_knn_k(std::size_t frame_count) noexcept;

/// Squared Euclidean distance between frames i and j.
double squared_distance(const FrameEmbeddingSeq& seq, std::size_t i, std::size_t j);

/// rho_i = exp(-(1/k) * sum of the k smallest squared distances to other frames).
std::vector<double> compute_density(const FrameEmbeddingSeq& seq, std::size_t knn_k);

/// Squared distance to the nearest strictly denser frame, or the largest
/// squared distance when no denser frame exists. M = 1 gives {0}.
std::vector<double> compute_delta(const FrameEmbeddingSeq& seq, const std::vector<double>& rho);

DensityProfile compute_profile(const FrameEmbeddingSeq& seq, std::size_t knn_k);

/// Indices of the `count` largest gamma values (lower index wins ties), ascending.
std::vector<std::size_t> select_centers(const DensityProfile& profile, std::size_t count);

/// Interior frames eligible as event boundaries: plateau-tolerant local
/// minima of rho, or every interior frame when there are fewer than
/// `needed` minima.
std::vector<std::size_t> boundary_candidates(const std::vector<double>& rho, std::size_t needed);

Segmentation segment_cdpcknn(const FrameEmbeddingSeq& seq, const SegmentationConfig& config);
Segmentation segment_uniform(const FrameEmbeddingSeq& seq, std::size_t num_events);
Segmentation segment_knn(const FrameEmbeddingSeq& seq, const SegmentationConfig& config);
Segmentation segment_dpcknn(const FrameEmbeddingSeq& seq, const SegmentationConfig& config);

/// Dispatches on config.method.
Segmentation segment(const FrameEmbeddingSeq& seq, const SegmentationConfig& config);

/// Turns scattered cluster labels into `cluster_count` consecutive events.
/// Clusters are ordered by mean member index and each event is owned by one
/// cluster; boundaries maximise the number of frames whose label matches
/// their event's owner, earliest boundaries winning ties.
EventPartition coerce_to_spans(const std::vector<std::size_t>& labels, std::size_t cluster_count);

/// One JSON object per frame: frame, rho, delta, gamma, is_boundary.
std::string diagnostic_dump(const Segmentation& result);

}  // namespace vinsta::segmentation
