#include "spiky/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "spiky/errors.hpp"
#include "spiky/seeding.hpp"

namespace spiky {

namespace {

// Acklam's rational approximation to the standard normal quantile.
double normal_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p <= 0.0 || p >= 1.0) throw InvalidArgument("quantile argument outside (0, 1)");
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double z_for_confidence(double confidence) {
  if (confidence == 0.95) return 1.96;
  return normal_quantile(1.0 - (1.0 - confidence) / 2.0);
}

// Ranks `candidates` (positions into `rows`) by similarity to `query_row`,
// descending, ties broken by candidate list order. Returns the positions of
// the k best. `rows` and `query_row` index into `e`.
std::vector<std::size_t> rank_topk(const RowMatrix& e, std::int64_t query_row, std::int64_t k,
                                   Similarity metric,
                                   std::span<const std::int64_t> candidates) {
  const double query_norm = e.row(query_row).norm();
  if (metric == Similarity::kCosine && query_norm == 0.0) {
    throw InvalidArgument("zero-norm query row under cosine similarity");
  }

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(candidates.size());
  for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
    const std::int64_t row = candidates[pos];
    if (row == query_row) continue;
    double sim = e.row(row).dot(e.row(query_row));
    if (metric == Similarity::kCosine) {
      double norm = e.row(row).norm();
      if (norm == 0.0) continue;  // undefined direction, skipped
      sim /= norm * query_norm;
    }
    scored.push_back({sim, pos});
  }
  if (static_cast<std::int64_t>(scored.size()) < k) {
    throw InvalidArgument("top-k exceeds the number of eligible candidates");
  }
  auto better = [](const std::pair<double, std::size_t>& a,
                   const std::pair<double, std::size_t>& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  };
  std::partial_sort(scored.begin(), scored.begin() + k, scored.end(), better);

  std::vector<std::size_t> out(static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = scored[static_cast<std::size_t>(i)].second;
  return out;
}

double jaccard_sorted(std::vector<std::int64_t> a, std::vector<std::int64_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++inter;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

// Splits `order` (already sorted) into contiguous groups; when the size is
// not divisible, the leading (lowest) groups take one extra element.
std::vector<std::vector<std::int64_t>> split_groups(const std::vector<std::int64_t>& order,
                                                    std::int64_t parts) {
  const auto n = static_cast<std::int64_t>(order.size());
  const std::int64_t base = n / parts;
  const std::int64_t extra = n % parts;
  std::vector<std::vector<std::int64_t>> groups(static_cast<std::size_t>(parts));
  std::size_t at = 0;
  for (std::int64_t p = 0; p < parts; ++p) {
    std::int64_t take = base + (p < extra ? 1 : 0);
    auto& g = groups[static_cast<std::size_t>(p)];
    g.assign(order.begin() + static_cast<std::ptrdiff_t>(at),
             order.begin() + static_cast<std::ptrdiff_t>(at + static_cast<std::size_t>(take)));
    at += static_cast<std::size_t>(take);
  }
  return groups;
}

std::vector<std::int64_t> norm_order(const Embeddings& e) {
  std::vector<std::int64_t> order(static_cast<std::size_t>(e.n()));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> norms(order.size());
  for (std::int64_t i = 0; i < e.n(); ++i) {
    norms[static_cast<std::size_t>(i)] = e.e.row(i).norm();
  }
  std::sort(order.begin(), order.end(), [&norms](std::int64_t a, std::int64_t b) {
    double na = norms[static_cast<std::size_t>(a)];
    double nb = norms[static_cast<std::size_t>(b)];
    return na != nb ? na < nb : a < b;
  });
  return order;
}

}  // namespace

const char* to_string(Similarity metric) noexcept {
  return metric == Similarity::kCosine ? "cosine" : "dot";
}

void StabilityConfig::validate() const {
  if (top_k < 1) throw InvalidArgument("top_k must be at least 1");
  if (num_partitions < 1) throw InvalidArgument("num_partitions must be at least 1");
  if (samples_per_partition < 1) throw InvalidArgument("samples_per_partition must be at least 1");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidArgument("confidence must lie in (0, 1)");
  }
}

std::vector<std::int32_t> norm_partition(const Embeddings& e, std::int64_t num_partitions) {
  if (e.n() < 1) throw InvalidArgument("embeddings are empty");
  if (num_partitions < 1) throw InvalidArgument("num_partitions must be at least 1");
  if (num_partitions > e.n()) {
    throw InvalidArgument("more partitions than rows");
  }
  auto groups = split_groups(norm_order(e), num_partitions);
  std::vector<std::int32_t> labels(static_cast<std::size_t>(e.n()), -1);
  for (std::size_t p = 0; p < groups.size(); ++p) {
    for (std::int64_t row : groups[p]) {
      labels[static_cast<std::size_t>(row)] = static_cast<std::int32_t>(p);
    }
  }
  return labels;
}

std::vector<std::string> topk_similar(const Embeddings& e, std::int64_t query_row,
                                      std::int64_t k, Similarity metric,
                                      std::span<const std::int64_t> candidates) {
  if (query_row < 0 || query_row >= e.n()) throw InvalidArgument("query row out of range");
  if (k < 1) throw InvalidArgument("top-k must be at least 1");
  if (k > static_cast<std::int64_t>(candidates.size()) - 1) {
    throw InvalidArgument("top-k exceeds candidate count minus the query");
  }
  std::vector<std::int64_t> ordered(candidates.begin(), candidates.end());
  for (std::int64_t row : ordered) {
    if (row < 0 || row >= e.n()) throw InvalidArgument("candidate row out of range");
  }
  std::sort(ordered.begin(), ordered.end());  // ties break by row index

  auto positions = rank_topk(e.e, query_row, k, metric, ordered);
  std::vector<std::string> ids;
  ids.reserve(positions.size());
  for (std::size_t pos : positions) {
    ids.push_back(e.row_ids[static_cast<std::size_t>(ordered[pos])]);
  }
  return ids;
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  std::unordered_set<std::string> sa(a.begin(), a.end());
  std::unordered_set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& id : sa) inter += sb.count(id);
  return static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size() - inter);
}

StabilityReport stability_report(const Embeddings& reference,
                                 std::span<const Embeddings> snapshots,
                                 const StabilityConfig& cfg) {
  cfg.validate();
  if (reference.n() < 1) throw InvalidArgument("reference snapshot is empty");

  // Rows of the reference present in every snapshot, joined by id.
  std::vector<std::unordered_map<std::string, std::int64_t>> snap_index(snapshots.size());
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    auto& index = snap_index[s];
    index.reserve(snapshots[s].row_ids.size());
    for (std::int64_t r = 0; r < snapshots[s].n(); ++r) {
      index.emplace(snapshots[s].row_ids[static_cast<std::size_t>(r)], r);
    }
  }
  std::vector<std::int64_t> common;
  for (std::int64_t r = 0; r < reference.n(); ++r) {
    const auto& id = reference.row_ids[static_cast<std::size_t>(r)];
    bool everywhere = true;
    for (const auto& index : snap_index) {
      if (!index.count(id)) {
        everywhere = false;
        break;
      }
    }
    if (everywhere) common.push_back(r);
  }
  if (static_cast<std::int64_t>(common.size()) < cfg.num_partitions) {
    throw InvalidArgument("common item subset is smaller than the partition count");
  }

  // Partition the common rows by reference norm (ascending, ties by index).
  std::vector<double> ref_norms(static_cast<std::size_t>(reference.n()), 0.0);
  for (std::int64_t r = 0; r < reference.n(); ++r) {
    ref_norms[static_cast<std::size_t>(r)] = reference.e.row(r).norm();
  }
  std::sort(common.begin(), common.end(), [&ref_norms](std::int64_t a, std::int64_t b) {
    double na = ref_norms[static_cast<std::size_t>(a)];
    double nb = ref_norms[static_cast<std::size_t>(b)];
    return na != nb ? na < nb : a < b;
  });
  auto pools = split_groups(common, cfg.num_partitions);

  StabilityReport report;
  report.partition_boundaries.push_back(ref_norms[static_cast<std::size_t>(common.front())]);
  for (const auto& pool : pools) {
    report.partition_boundaries.push_back(ref_norms[static_cast<std::size_t>(pool.back())]);
  }

  report.snapshot_labels.push_back(
      reference.snapshot_label.empty() ? "reference" : reference.snapshot_label);
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    report.snapshot_labels.push_back(snapshots[s].snapshot_label.empty()
                                         ? "snapshot_" + std::to_string(s)
                                         : snapshots[s].snapshot_label);
  }

  for (std::int64_t p = 0; p < cfg.num_partitions; ++p) {
    auto& pool = pools[static_cast<std::size_t>(p)];
    if (static_cast<std::int64_t>(pool.size()) < cfg.top_k + 1) {
      throw InvalidArgument("partition " + std::to_string(p) +
                            " has fewer than top_k+1 common items");
    }
    if (static_cast<std::int64_t>(pool.size()) < cfg.samples_per_partition) {
      throw InvalidArgument("partition " + std::to_string(p) +
                            " has fewer rows than samples_per_partition");
    }
    // Candidate ranking order: ascending reference row (id-keyed, so the
    // report is invariant under row permutation of any snapshot).
    std::sort(pool.begin(), pool.end());

    // Queries drawn without replacement, seeded per partition.
    std::vector<std::int64_t> shuffled = pool;
    std::mt19937_64 rng(derive_seed(cfg.seed, "stability/" + std::to_string(p)));
    for (std::int64_t i = 0; i < cfg.samples_per_partition; ++i) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i),
                                                      shuffled.size() - 1);
      std::swap(shuffled[static_cast<std::size_t>(i)], shuffled[pick(rng)]);
    }
    shuffled.resize(static_cast<std::size_t>(cfg.samples_per_partition));

    // Reference top-k per query, as positions into the pool.
    std::vector<std::vector<std::int64_t>> ref_sets;
    ref_sets.reserve(shuffled.size());
    for (std::int64_t q : shuffled) {
      auto positions = rank_topk(reference.e, q, cfg.top_k, cfg.metric, pool);
      std::vector<std::int64_t> set(positions.begin(), positions.end());
      ref_sets.push_back(std::move(set));
    }

    for (std::size_t snap = 0; snap < snapshots.size() + 1; ++snap) {
      std::vector<double> scores;
      scores.reserve(shuffled.size());
      if (snap == 0) {
        scores.assign(shuffled.size(), 1.0);  // self comparison
      } else {
        const Embeddings& other = snapshots[snap - 1];
        const auto& index = snap_index[snap - 1];
        std::vector<std::int64_t> mapped(pool.size());
        for (std::size_t c = 0; c < pool.size(); ++c) {
          mapped[c] = index.at(reference.row_ids[static_cast<std::size_t>(pool[c])]);
        }
        for (std::size_t qi = 0; qi < shuffled.size(); ++qi) {
          std::int64_t q_other =
              index.at(reference.row_ids[static_cast<std::size_t>(shuffled[qi])]);
          auto positions = rank_topk(other.e, q_other, cfg.top_k, cfg.metric, mapped);
          std::vector<std::int64_t> set(positions.begin(), positions.end());
          scores.push_back(jaccard_sorted(ref_sets[qi], std::move(set)));
        }
      }

      double mean = std::accumulate(scores.begin(), scores.end(), 0.0) /
                    static_cast<double>(scores.size());
      double var = 0.0;
      for (double s : scores) var += (s - mean) * (s - mean);
      double stddev = scores.size() > 1
                          ? std::sqrt(var / static_cast<double>(scores.size() - 1))
                          : 0.0;
      double half = z_for_confidence(cfg.confidence) * stddev /
                    std::sqrt(static_cast<double>(scores.size()));

      StabilityCell cell;
      cell.partition = static_cast<std::int32_t>(p);
      cell.snapshot_label = report.snapshot_labels[snap];
      cell.metric = cfg.metric;
      cell.mean_jaccard = mean;
      cell.ci_halfwidth = half;
      cell.n_samples = static_cast<std::int64_t>(scores.size());
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

void StabilityReport::write_csv(std::ostream& out) const {
  out.precision(10);
  out << "partition,snapshot_label,metric,mean_jaccard,ci_halfwidth,n_samples\n";
  for (const auto& cell : cells) {
    out << cell.partition << ',' << cell.snapshot_label << ',' << to_string(cell.metric) << ','
        << cell.mean_jaccard << ',' << cell.ci_halfwidth << ',' << cell.n_samples << '\n';
  }
}

nlohmann::json StabilityReport::to_json() const {
  nlohmann::json j;
  j["partition_boundaries"] = partition_boundaries;
  j["snapshot_labels"] = snapshot_labels;
  auto rows = nlohmann::json::array();
  for (const auto& cell : cells) {
    rows.push_back({{"partition", cell.partition},
                    {"snapshot_label", cell.snapshot_label},
                    {"metric", to_string(cell.metric)},
                    {"mean_jaccard", cell.mean_jaccard},
                    {"ci_halfwidth", cell.ci_halfwidth},
                    {"n_samples", cell.n_samples}});
  }
  j["cells"] = std::move(rows);
  return j;
}

}  // namespace spiky
