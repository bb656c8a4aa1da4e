#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "spiky/factorization.hpp"

namespace spiky {

enum class Similarity { kCosine, kDot };

const char* to_string(Similarity metric) noexcept;

struct StabilityConfig {
  std::int64_t top_k = 500;
  std::int64_t num_partitions = 5;
  std::int64_t samples_per_partition = 1000;
  Similarity metric = Similarity::kCosine;
  std::uint64_t seed = 0;
  double confidence = 0.95;

  void validate() const;
};

/// Per-row partition label in 0..num_partitions-1, by ascending norm. Rows
/// are sorted by (norm, row index) and split into contiguous groups; when n
/// is not divisible, the lowest partitions take the extra rows.
std::vector<std::int32_t> norm_partition(const Embeddings& e, std::int64_t num_partitions);

/// Ranks `candidates` (excluding the query row itself) by similarity to the
/// query, descending; ties broken by row index ascending. Under cosine,
/// zero-norm candidates are skipped and a zero-norm query is an error.
/// Returns the ids of the k best rows.
std::vector<std::string> topk_similar(const Embeddings& e, std::int64_t query_row,
                                      std::int64_t k, Similarity metric,
                                      std::span<const std::int64_t> candidates);

/// |a intersect b| / |a union b|; both empty counts as 1.
double jaccard(std::span<const std::string> a, std::span<const std::string> b);

struct StabilityCell {
  std::int32_t partition = 0;
  std::string snapshot_label;
  Similarity metric = Similarity::kCosine;
  double mean_jaccard = 0.0;
  double ci_halfwidth = 0.0;
  std::int64_t n_samples = 0;
};

struct StabilityReport {
  std::vector<double> partition_boundaries;  // num_partitions+1 norm quantiles
  std::vector<std::string> snapshot_labels;  // index 0 is the reference itself
  std::vector<StabilityCell> cells;

  void write_csv(std::ostream& out) const;
  nlohmann::json to_json() const;
};

/// Top-k overlap of sampled queries between the reference and each snapshot,
/// conditioned on the reference norm partition. Comparisons are restricted to
/// items present in the reference and in every snapshot; candidate pools are
/// the partition co-members of the query, joined by id. The report always
/// starts with the reference compared against itself (mean Jaccard exactly 1).
StabilityReport stability_report(const Embeddings& reference,
                                 std::span<const Embeddings> snapshots,
                                 const StabilityConfig& cfg);

}  // namespace spiky
