#include "spiky/spikes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "spiky/errors.hpp"
#include "spiky/sparse.hpp"

namespace spiky {

void SpkConfig::validate() const {
  if (!(cos_theta > 0.0 && cos_theta < 1.0)) {
    throw InvalidArgument("cos_theta must lie in (0, 1)");
  }
  if (!(rho > 0.0 && rho <= 1.0)) {
    throw InvalidArgument("rho must lie in (0, 1]");
  }
}

std::vector<std::int64_t> SpikeCover::spike_sizes() const {
  std::vector<std::int64_t> sizes(peaks.size(), 0);
  for (std::int32_t a : assignment) {
    if (a >= 0) ++sizes[static_cast<std::size_t>(a)];
  }
  return sizes;
}

SpikeCover spike_cover(const Embeddings& emb, const SpkConfig& cfg) {
  cfg.validate();
  const std::int64_t n = emb.n();
  const std::int64_t f = emb.f();
  if (n < 1) throw InvalidArgument("embeddings are empty");

  SpikeCover cover;
  cover.n = n;
  cover.assignment.assign(static_cast<std::size_t>(n), -1);
  cover.alphas.resize(static_cast<std::size_t>(n));

  RowMatrix unit(n, f);
  std::vector<std::int64_t> countable;
  countable.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    double norm = emb.e.row(i).norm();
    cover.alphas[static_cast<std::size_t>(i)] = norm;
    if (norm > 0.0) {
      unit.row(i) = emb.e.row(i) / norm;
      countable.push_back(i);
    } else {
      unit.row(i).setZero();
    }
  }
  if (countable.empty()) throw InvalidArgument("all embedding rows have zero norm");

  // Candidacy order: norm descending, ties by lower row index.
  std::sort(countable.begin(), countable.end(), [&cover](std::int64_t a, std::int64_t b) {
    double na = cover.alphas[static_cast<std::size_t>(a)];
    double nb = cover.alphas[static_cast<std::size_t>(b)];
    return na != nb ? na > nb : a < b;
  });

  const auto n_countable = static_cast<std::int64_t>(countable.size());
  const auto target = std::min<std::int64_t>(
      n_countable, static_cast<std::int64_t>(std::ceil(cfg.rho * static_cast<double>(n_countable))));

  std::vector<std::int64_t> uncovered = std::move(countable);
  std::vector<std::int64_t> still;
  std::vector<Eigen::RowVectorXd> dirs;
  while (cover.covered_count < target) {
    const std::int64_t peak = uncovered.front();
    const auto spike = static_cast<std::int32_t>(cover.peaks.size());
    Eigen::RowVectorXd dir = unit.row(peak);

    cover.assignment[static_cast<std::size_t>(peak)] = spike;  // peak covers itself
    ++cover.covered_count;

    still.clear();
    for (std::size_t k = 1; k < uncovered.size(); ++k) {
      const std::int64_t j = uncovered[k];
      double c = unit.row(j).dot(dir);
      if (cfg.absolute_cosine) c = std::abs(c);
      if (c > cfg.cos_theta) {
        cover.assignment[static_cast<std::size_t>(j)] = spike;
        ++cover.covered_count;
      } else {
        still.push_back(j);
      }
    }
    cover.peaks.push_back(peak);
    dirs.push_back(std::move(dir));
    std::swap(uncovered, still);
  }

  cover.directions.resize(static_cast<std::int64_t>(dirs.size()), f);
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    cover.directions.row(static_cast<std::int64_t>(k)) = dirs[k];
  }
  cover.spk = static_cast<double>(cover.peaks.size()) / static_cast<double>(n);
  return cover;
}

double spk_metric(const Embeddings& e, const SpkConfig& cfg) {
  return spike_cover(e, cfg).spk;
}

std::vector<SpkSweepRow> spk_sweep(std::span<const Embeddings> list, const SpkConfig& cfg) {
  cfg.validate();
  if (list.empty()) throw InvalidArgument("sweep requires at least one embedding set");
  for (const auto& e : list) {
    if (e.row_ids != list.front().row_ids) {
      throw InvalidArgument("sweep embeddings must share identical row ids");
    }
  }
  std::vector<SpkSweepRow> rows;
  rows.reserve(list.size());
  for (const auto& e : list) {
    rows.push_back({e.f(), spk_metric(e, cfg)});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SpkSweepRow& a, const SpkSweepRow& b) { return a.f < b.f; });
  return rows;
}

Embeddings gaussian_baseline(std::int64_t n, std::int64_t f, std::uint64_t seed) {
  if (n < 1 || f < 1) throw InvalidArgument("gaussian baseline requires n, f >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Embeddings out;
  out.e.resize(n, f);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < f; ++j) out.e(i, j) = normal(rng);
  }
  out.p = 1.0;
  out.row_ids = default_row_ids(n);
  return out;
}

}  // namespace spiky
