#include "vinsta/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "vinsta/error.hpp"
#include "vinsta/validate.hpp"

namespace vinsta::segmentation {
namespace {

void require_valid(const FrameEmbeddingSeq& seq) {
  if (seq.dim == 0 || seq.values.size() % seq.dim != 0 || seq.frame_count() == 0) {
    throw InputError("embedding sequence must hold at least one frame of a positive dimension");
  }
}

std::vector<double> pairwise_squared(const FrameEmbeddingSeq& seq) {
  const std::size_t m = seq.frame_count();
  std::vector<double> d(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = squared_distance(seq, i, j);
      d[i * m + j] = v;
      d[j * m + i] = v;
    }
  }
  return d;
}

std::size_t effective_knn(const SegmentationConfig& config, std::size_t frame_count) {
  return config.knn_k.value_or(default_knn_k(frame_count));
}

DensityProfile single_frame_profile() {
  return DensityProfile{{1.0}, {0.0}, {0.0}, 0};
}

DensityProfile profile_for(const FrameEmbeddingSeq& seq, const SegmentationConfig& config) {
  const std::size_t m = seq.frame_count();
  if (m == 1) return single_frame_profile();
  return compute_profile(seq, effective_knn(config, m));
}

void check_event_count(std::size_t k, std::size_t m) {
  if (k == 0) throw ParameterError("number of events must be at least 1");
  if (k > m) {
    throw InfeasiblePartitionError("cannot split " + std::to_string(m) + " frames into " + std::to_string(k) +
                                   " events");
  }
}

void warn_missing_centers(Segmentation& result) {
  const auto events = result.partition.events();
  for (std::size_t e = 0; e < events.size(); ++e) {
    const bool has_center = std::any_of(result.centers.begin(), result.centers.end(), [&](std::size_t c) {
      return c >= events[e].begin && c < events[e].end;
    });
    if (!has_center) result.warnings.push_back("event " + std::to_string(e) + " contains no density center");
  }
}

// Deterministic across standard library implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::uniform: return "uniform";
    case Method::knn: return "knn";
    case Method::dpcknn: return "dpcknn";
    case Method::cdpcknn: return "cdpcknn";
  }
  return "cdpcknn";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::uniform, Method::knn, Method::dpcknn, Method::cdpcknn}) {
    if (to_string(m) == name) return m;
  }
  throw ParameterError("unknown segmentation method: " + std::string(name));
}

std::size_t default_knn_k(std::size_t frame_count) noexcept {
  return frame_count <= 1 ? 0 : std::min<std::size_t>(5, frame_count - 1);
}

double squared_distance(const FrameEmbeddingSeq& seq, std::size_t i, std::size_t j) {
  const auto a = seq.frame(i);
  const auto b = seq.frame(j);
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = static_cast<double>(a[d]) - static_cast<double>(b[d]);
    sum += diff * diff;
  }
  return sum;
}

std::vector<double> compute_density(const FrameEmbeddingSeq& seq, std::size_t knn_k) {
  require_valid(seq);
  const std::size_t m = seq.frame_count();
  if (knn_k < 1 || knn_k + 1 > m) {
    throw ParameterError("knn_k must lie in [1, M-1]; got " + std::to_string(knn_k) + " for M=" + std::to_string(m));
  }
  const auto dist = pairwise_squared(seq);
  std::vector<double> rho(m);
  std::vector<double> row;
  row.reserve(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    row.clear();
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) row.push_back(dist[i * m + j]);
    }
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(knn_k), row.end());
    double sum = 0.0;
    for (std::size_t n = 0; n < knn_k; ++n) sum += row[n];
    rho[i] = std::exp(-sum / static_cast<double>(knn_k));
  }
  return rho;
}

std::vector<double> compute_delta(const FrameEmbeddingSeq& seq, const std::vector<double>& rho) {
  require_valid(seq);
  const std::size_t m = seq.frame_count();
  if (rho.size() != m) throw InputError("rho has " + std::to_string(rho.size()) + " entries for " + std::to_string(m) + " frames");
  if (m == 1) return {0.0};
  const auto dist = pairwise_squared(seq);
  std::vector<double> delta(m);
  for (std::size_t i = 0; i < m; ++i) {
    double nearest_denser = std::numeric_limits<double>::infinity();
    double farthest = 0.0;
    bool has_denser = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double d = dist[i * m + j];
      farthest = std::max(farthest, d);
      if (rho[j] > rho[i]) {
        has_denser = true;
        nearest_denser = std::min(nearest_denser, d);
      }
    }
    delta[i] = has_denser ? nearest_denser : farthest;
  }
  return delta;
}

DensityProfile compute_profile(const FrameEmbeddingSeq& seq, std::size_t knn_k) {
  DensityProfile profile;
  profile.knn_k = knn_k;
  profile.rho = compute_density(seq, knn_k);
  profile.delta = compute_delta(seq, profile.rho);
  profile.gamma.resize(profile.rho.size());
  for (std::size_t i = 0; i < profile.rho.size(); ++i) profile.gamma[i] = profile.rho[i] * profile.delta[i];
  return profile;
}

std::vector<std::size_t> select_centers(const DensityProfile& profile, std::size_t count) {
  const std::size_t m = profile.gamma.size();
  if (count == 0 || count > m) {
    throw ParameterError("cannot select " + std::to_string(count) + " centers among " + std::to_string(m) + " frames");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return profile.gamma[a] > profile.gamma[b]; });
  order.resize(count);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<std::size_t> boundary_candidates(const std::vector<double>& rho, std::size_t needed) {
  const std::size_t m = rho.size();
  std::vector<std::size_t> minima;
  for (std::size_t i = 1; i < m; ++i) {
    const bool left = rho[i] <= rho[i - 1];
    const bool right = i + 1 == m || rho[i] <= rho[i + 1];
    if (left && right) minima.push_back(i);
  }
  if (minima.size() >= needed) return minima;
  std::vector<std::size_t> interior(m > 0 ? m - 1 : 0);
  std::iota(interior.begin(), interior.end(), 1);
  return interior;
}

Segmentation segment_cdpcknn(const FrameEmbeddingSeq& seq, const SegmentationConfig& config) {
  require_valid(seq);
  const std::size_t m = seq.frame_count();
  const std::size_t k = config.num_events;
  check_event_count(k, m);

  Segmentation result;
  result.profile = profile_for(seq, config);
  result.centers = select_centers(result.profile, k);

  const std::size_t needed = k - 1;
  auto candidates = boundary_candidates(result.profile.rho, needed);
  const auto& rho = result.profile.rho;
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) { return rho[a] < rho[b]; });
  candidates.resize(needed);
  std::sort(candidates.begin(), candidates.end());

  result.partition = EventPartition::from_boundaries(m, std::move(candidates));
  warn_missing_centers(result);
  return result;
}

Segmentation segment_uniform(const FrameEmbeddingSeq& seq, std::size_t num_events) {
  require_valid(seq);
  const std::size_t m = seq.frame_count();
  if (num_events == 0 || num_events > m) {
    throw ParameterError("cannot split " + std::to_string(m) + " frames into " + std::to_string(num_events) +
                         " uniform events");
  }
  Segmentation result;
  result.profile = m == 1 ? single_frame_profile() : compute_profile(seq, default_knn_k(m));
  const std::size_t base = m / num_events;
  const std::size_t remainder = m % num_events;
  std::vector<std::size_t> boundaries;
  std::size_t position = 0;
  for (std::size_t e = 0; e + 1 < num_events; ++e) {
    position += base + (e < remainder ? 1 : 0);
    boundaries.push_back(position);
  }
  result.partition = EventPartition::from_boundaries(m, std::move(boundaries));
  return result;
}

Segmentation segment_dpcknn(const FrameEmbeddingSeq& seq, const SegmentationConfig& config) {
  require_valid(seq);
  const std::size_t m = seq.frame_count();
  const std::size_t k = config.num_events;
  check_event_count(k, m);

  Segmentation result;
  result.profile = profile_for(seq, config);
  result.centers = select_centers(result.profile, k);

  result.raw_labels.assign(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto own = std::find(result.centers.begin(), result.centers.end(), i);
    if (own != result.centers.end()) {
      result.raw_labels[i] = static_cast<std::size_t>(own - result.centers.begin());
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < result.centers.size(); ++c) {
      const double d = squared_distance(seq, i, result.centers[c]);
      if (d < best) {
        best = d;
        result.raw_labels[i] = c;
      }
    }
  }
  result.partition = coerce_to_spans(result.raw_labels, k);
  return result;
}

Segmentation segment_knn(const FrameEmbeddingSeq& seq, const SegmentationConfig& config) {
  require_valid(seq);
  const std::size_t m = seq.frame_count();
  const std::size_t k = config.num_events;
  const std::size_t dim = seq.dim;
  check_event_count(k, m);

  Segmentation result;
  result.profile = profile_for(seq, config);

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> seeds;
  std::vector<bool> used(m, false);
  seeds.push_back(std::min(m - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(m))));
  used[seeds.back()] = true;
  std::vector<double> nearest(m, std::numeric_limits<double>::infinity());
  while (seeds.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(seq, i, seeds.back()));
      total += nearest[i];
    }
    std::size_t pick = m;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        cumulative += nearest[i];
        if (!used[i] && nearest[i] > 0.0 && cumulative > target) {
          pick = i;
          break;
        }
      }
    }
    if (pick == m) {
      pick = static_cast<std::size_t>(std::find(used.begin(), used.end(), false) - used.begin());
    }
    used[pick] = true;
    seeds.push_back(pick);
  }

  std::vector<double> centroids(k * dim);
  for (std::size_t c = 0; c < k; ++c) {
    const auto f = seq.frame(seeds[c]);
    std::copy(f.begin(), f.end(), centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
  }
  const auto centroid_distance = [&](std::size_t i, std::size_t c) {
    const auto f = seq.frame(i);
    double sum = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = static_cast<double>(f[d]) - centroids[c * dim + d];
      sum += diff * diff;
    }
    return sum;
  };

  std::vector<std::size_t> labels(m, k);
  constexpr int kMaxIterations = 100;
  for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
    bool changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t best_c = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = centroid_distance(i, c);
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      if (labels[i] != best_c) {
        labels[i] = best_c;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < m; ++i) {
      const auto f = seq.frame(i);
      for (std::size_t d = 0; d < dim; ++d) sums[labels[i] * dim + d] += f[d];
      ++counts[labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < dim; ++d) centroids[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
    }
  }

  // Report the frame closest to each centroid as that cluster's center.
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double d = centroid_distance(i, c);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    result.centers.push_back(best_i);
  }
  std::sort(result.centers.begin(), result.centers.end());
  result.centers.erase(std::unique(result.centers.begin(), result.centers.end()), result.centers.end());

  result.raw_labels = labels;
  result.partition = coerce_to_spans(labels, k);
  return result;
}

EventPartition coerce_to_spans(const std::vector<std::size_t>& labels, std::size_t cluster_count) {
  const std::size_t m = labels.size();
  if (cluster_count == 0 || cluster_count > m) {
    throw ParameterError("cannot coerce " + std::to_string(m) + " labels into " + std::to_string(cluster_count) + " spans");
  }

  std::vector<double> index_sum(cluster_count, 0.0);
  std::vector<std::size_t> members(cluster_count, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (labels[i] >= cluster_count) throw InputError("cluster label out of range");
    index_sum[labels[i]] += static_cast<double>(i);
    ++members[labels[i]];
  }
  std::vector<std::size_t> owners(cluster_count);
  std::iota(owners.begin(), owners.end(), 0);
  const auto mean_index = [&](std::size_t c) {
    return members[c] == 0 ? std::numeric_limits<double>::infinity() : index_sum[c] / static_cast<double>(members[c]);
  };
  std::stable_sort(owners.begin(), owners.end(), [&](std::size_t a, std::size_t b) { return mean_index(a) < mean_index(b); });

  // prefix[c][i] = frames with label c among [0, i).
  std::vector<std::vector<int>> prefix(cluster_count, std::vector<int>(m + 1, 0));
  for (std::size_t c = 0; c < cluster_count; ++c) {
    for (std::size_t i = 0; i < m; ++i) prefix[c][i + 1] = prefix[c][i] + (labels[i] == c ? 1 : 0);
  }
  const auto agree = [&](std::size_t segment, std::size_t a, std::size_t b) {
    const auto& p = prefix[owners[segment]];
    return p[b] - p[a];
  };

  // best[s][a]: max agreement for segments s.. covering [a, M).
  constexpr int kInfeasible = std::numeric_limits<int>::min() / 2;
  const std::size_t s_count = cluster_count;
  std::vector<std::vector<int>> best(s_count + 1, std::vector<int>(m + 1, kInfeasible));
  best[s_count][m] = 0;
  for (std::size_t s = s_count; s-- > 0;) {
    const std::size_t remaining_after = s_count - s - 1;
    for (std::size_t a = 0; a < m; ++a) {
      if (m - a < s_count - s) continue;
      int value = kInfeasible;
      if (remaining_after == 0) {
        value = agree(s, a, m);
      } else {
        for (std::size_t b = a + 1; b + remaining_after <= m; ++b) {
          if (best[s + 1][b] == kInfeasible) continue;
          value = std::max(value, agree(s, a, b) + best[s + 1][b]);
        }
      }
      best[s][a] = value;
    }
  }

  std::vector<std::size_t> boundaries;
  std::size_t a = 0;
  for (std::size_t s = 0; s + 1 < s_count; ++s) {
    const std::size_t remaining_after = s_count - s - 1;
    for (std::size_t b = a + 1; b + remaining_after <= m; ++b) {
      if (best[s + 1][b] != kInfeasible && agree(s, a, b) + best[s + 1][b] == best[s][a]) {
        boundaries.push_back(b);
        a = b;
        break;
      }
    }
  }
  return EventPartition::from_boundaries(m, std::move(boundaries));
}

Segmentation segment(const FrameEmbeddingSeq& seq, const SegmentationConfig& config) {
  switch (config.method) {
    case Method::uniform: return segment_uniform(seq, config.num_events);
    case Method::knn: return segment_knn(seq, config);
    case Method::dpcknn: return segment_dpcknn(seq, config);
    case Method::cdpcknn: return segment_cdpcknn(seq, config);
  }
  throw ParameterError("unknown segmentation method");
}

std::string diagnostic_dump(const Segmentation& result) {
  const auto& p = result.profile;
  std::string out;
  for (std::size_t i = 0; i < p.rho.size(); ++i) {
    const bool is_boundary = std::binary_search(result.partition.boundaries.begin(),
                                                result.partition.boundaries.end(), i);
    nlohmann::ordered_json line;
    line["frame"] = i;
    line["rho"] = p.rho[i];
    line["delta"] = p.delta[i];
    line["gamma"] = p.gamma[i];
    line["is_boundary"] = is_boundary;
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace vinsta::segmentation
