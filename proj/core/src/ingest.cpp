#include "spiky/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "spiky/errors.hpp"

namespace spiky {

SparseSymmetric build_gram(const InteractionTriples& t) {
  if (t.empty()) throw InvalidArgument("cannot build gram matrix from empty input");

  const std::int64_t n = t.num_items();
  const std::int64_t m = t.num_contexts();

  // Context-major lists; within a context, items in ascending index order so
  // every accumulation happens in a fixed order.
  std::vector<std::vector<std::pair<std::int64_t, double>>> by_context(
      static_cast<std::size_t>(m));
  for (const auto& rec : t.records()) {
    by_context[static_cast<std::size_t>(rec.context)].push_back({rec.item, rec.weight});
  }
  for (auto& ctx : by_context) {
    std::sort(ctx.begin(), ctx.end());
  }

  std::unordered_map<std::uint64_t, double> acc;
  for (const auto& ctx : by_context) {
    for (std::size_t a = 0; a < ctx.size(); ++a) {
      for (std::size_t b = a; b < ctx.size(); ++b) {
        std::uint64_t key = (static_cast<std::uint64_t>(ctx[a].first) << 32) |
                            static_cast<std::uint64_t>(ctx[b].first);
        acc[key] += ctx[a].second * ctx[b].second;
      }
    }
  }

  std::vector<Triplet> entries;
  entries.reserve(acc.size());
  for (const auto& [key, value] : acc) {
    entries.push_back({static_cast<std::int64_t>(key >> 32),
                       static_cast<std::int64_t>(key & 0xffffffffULL), value});
  }
  return SparseSymmetric::from_triplets(n, std::move(entries),
                                        std::vector<std::string>(t.item_ids()));
}

SparseSymmetric topk_filter(const SparseSymmetric& m, std::int64_t k) {
  if (k < 1) throw InvalidArgument("top-k filter requires k >= 1");

  const std::int64_t n = m.n();
  // Per row: the column set of its k largest entries. Ties at the k-th value
  // keep the smaller column index.
  std::vector<std::vector<std::int64_t>> kept(static_cast<std::size_t>(n));
  std::vector<std::pair<double, std::int64_t>> scratch;
  for (std::int64_t i = 0; i < n; ++i) {
    auto cells = m.row(i);
    scratch.clear();
    for (const auto& c : cells) scratch.push_back({c.value, c.col});
    std::sort(scratch.begin(), scratch.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    if (static_cast<std::int64_t>(scratch.size()) > k) scratch.resize(static_cast<std::size_t>(k));
    auto& cols = kept[static_cast<std::size_t>(i)];
    for (const auto& [value, col] : scratch) cols.push_back(col);
    std::sort(cols.begin(), cols.end());
  }

  auto is_kept = [&kept](std::int64_t row, std::int64_t col) {
    const auto& cols = kept[static_cast<std::size_t>(row)];
    return std::binary_search(cols.begin(), cols.end(), col);
  };

  std::vector<Triplet> entries;
  for (const auto& t : m.upper()) {
    if (is_kept(t.row, t.col) || is_kept(t.col, t.row)) entries.push_back(t);
  }
  return SparseSymmetric::from_triplets(n, std::move(entries),
                                        std::vector<std::string>(m.row_ids()));
}

SparseSymmetric ppmi(const SparseSymmetric& m) {
  if (m.stored_nnz() == 0) throw InvalidArgument("ppmi requires at least one positive entry");

  const std::int64_t n = m.n();
  std::vector<double> row_sums(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& c : m.row(i)) s += c.value;
    row_sums[static_cast<std::size_t>(i)] = s;
  }
  const double total = m.sum();

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(m.stored_nnz()));
  for (const auto& t : m.upper()) {
    double ratio = (t.value * total) /
                   (row_sums[static_cast<std::size_t>(t.row)] *
                    row_sums[static_cast<std::size_t>(t.col)]);
    double value = std::log(ratio);
    if (value > 0.0) entries.push_back({t.row, t.col, value});
  }
  return SparseSymmetric::from_triplets(n, std::move(entries),
                                        std::vector<std::string>(m.row_ids()));
}

}  // namespace spiky
