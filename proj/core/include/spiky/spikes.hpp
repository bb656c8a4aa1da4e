#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spiky/factorization.hpp"

namespace spiky {

struct SpkConfig {
  double cos_theta = 0.9;       ///< cosine threshold, in (0, 1)
  double rho = 0.5;             ///< coverage ratio, in (0, 1]
  bool absolute_cosine = false; ///< treat antipodal rows as one spike

  void validate() const;
};

/// Result of the greedy partial cover: peaks in selection order (descending
/// norm), a per-row spike index (-1 = uncovered; zero-norm rows are never
/// covered), row norms, and unit peak directions.
struct SpikeCover {
  std::vector<std::int64_t> peaks;
  std::vector<std::int32_t> assignment;
  std::vector<double> alphas;
  RowMatrix directions;  // num_spikes x f
  std::int64_t covered_count = 0;
  std::int64_t n = 0;
  double spk = 0.0;  // peaks / n

  std::int64_t num_spikes() const noexcept { return static_cast<std::int64_t>(peaks.size()); }
  /// Member count per spike, in peak order.
  std::vector<std::int64_t> spike_sizes() const;
};

/// Greedy cover: repeatedly take the highest-norm uncovered nonzero row as
/// the next peak (norm ties broken by lower row index), cover every uncovered
/// row within the cosine threshold of it (the peak covers itself), and stop
/// once ceil(rho * countable) rows are covered, where countable excludes
/// zero-norm rows. The final peak may overshoot the target.
SpikeCover spike_cover(const Embeddings& e, const SpkConfig& cfg);

/// spike_cover(e, cfg).spk
double spk_metric(const Embeddings& e, const SpkConfig& cfg);

struct SpkSweepRow {
  std::int64_t f = 0;
  double spk = 0.0;
};

/// Spk per truncation rank, sorted by f ascending. All embeddings must share
/// the same row ids.
std::vector<SpkSweepRow> spk_sweep(std::span<const Embeddings> list, const SpkConfig& cfg);

/// n x f i.i.d. standard-normal rows, deterministic per seed.
Embeddings gaussian_baseline(std::int64_t n, std::int64_t f, std::uint64_t seed);

}  // namespace spiky
