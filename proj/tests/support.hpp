#pragma once

#include <cmath>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "spiky/communities.hpp"
#include "spiky/factorization.hpp"
#include "spiky/interactions.hpp"
#include "spiky/sparse.hpp"
#include "spiky/svd.hpp"

namespace testsupport {

using spiky::Embeddings;
using spiky::Matrix;
using spiky::RowMatrix;

inline spiky::Matrix random_symmetric(std::int64_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i; j < n; ++j) {
      double v = normal(rng);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

inline spiky::Matrix random_orthogonal(std::int64_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline spiky::SparseSymmetric dense_to_sparse(const Matrix& m,
                                              std::vector<std::string> ids = {}) {
  std::vector<spiky::Triplet> entries;
  for (std::int64_t i = 0; i < m.rows(); ++i) {
    for (std::int64_t j = i; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) entries.push_back({i, j, m(i, j)});
    }
  }
  return spiky::SparseSymmetric::from_triplets(m.rows(), std::move(entries), std::move(ids));
}

/// Non-negative symmetric matrix with a geometrically decaying spectrum:
/// sum_k c_k v_k v_k^T with entrywise non-negative unit v_k and
/// c_k = decay^k. Positive semidefinite; useful where the randomized and the
/// exact eigensolver must agree to tight tolerance.
inline spiky::SparseSymmetric random_nonneg_decay(std::int64_t n, std::int64_t rank,
                                                  double decay, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m = Matrix::Zero(n, n);
  double c = 1.0;
  for (std::int64_t k = 0; k < rank; ++k) {
    Eigen::VectorXd v(n);
    for (std::int64_t i = 0; i < n; ++i) v(i) = std::abs(normal(rng));
    v /= v.norm();
    m += c * v * v.transpose();
    c *= decay;
  }
  return dense_to_sparse(m);
}

inline Embeddings embeddings_from_rows(RowMatrix rows, double p = 1.0,
                                       std::vector<std::string> ids = {}) {
  Embeddings e;
  e.e = std::move(rows);
  e.p = p;
  e.row_ids = ids.empty() ? spiky::default_row_ids(e.e.rows()) : std::move(ids);
  return e;
}

inline Embeddings random_embeddings(std::int64_t n, std::int64_t f, std::mt19937_64& rng,
                                    double zero_row_prob = 0.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  RowMatrix rows(n, f);
  for (std::int64_t i = 0; i < n; ++i) {
    if (u01(rng) < zero_row_prob) {
      rows.row(i).setZero();
      continue;
    }
    for (std::int64_t j = 0; j < f; ++j) rows(i, j) = normal(rng);
  }
  return embeddings_from_rows(std::move(rows));
}

/// Factorization whose U rows form exact spikes: one block of rows per
/// direction, K = f blocks, each block a unit vector of mixing weights times
/// a row of a random orthogonal matrix.
inline spiky::Factorization exact_spike_factorization(const std::vector<std::int64_t>& sizes,
                                                      std::mt19937_64& rng) {
  const auto f = static_cast<std::int64_t>(sizes.size());
  std::int64_t n = 0;
  for (std::int64_t s : sizes) n += s;

  Matrix mix = random_orthogonal(f, rng);
  std::uniform_real_distribution<double> weight(0.2, 1.0);

  spiky::Factorization fac;
  fac.u.resize(n, f);
  std::int64_t row = 0;
  for (std::int64_t k = 0; k < f; ++k) {
    Eigen::VectorXd w(sizes[static_cast<std::size_t>(k)]);
    for (std::int64_t i = 0; i < w.size(); ++i) w(i) = weight(rng);
    w /= w.norm();
    for (std::int64_t i = 0; i < w.size(); ++i, ++row) {
      fac.u.row(row) = w(i) * mix.row(k);
    }
  }
  fac.sigma.resize(f);
  fac.signs.resize(static_cast<std::size_t>(f));
  std::uniform_real_distribution<double> sig(0.5, 4.0);
  for (std::int64_t k = 0; k < f; ++k) {
    fac.sigma(k) = sig(rng);
    fac.signs[static_cast<std::size_t>(k)] = (rng() & 1) ? 1 : -1;
  }
  std::sort(fac.sigma.data(), fac.sigma.data() + f, std::greater<>());
  fac.row_ids = spiky::default_row_ids(n);
  return fac;
}

/// Block-model spec used by the desk-scale recovery checks: three equal
/// communities, assortative blocks, and a two-tier (popular / long-tail)
/// degree profile inside [0.3, 1].
inline spiky::DcbmSpec two_tier_spec(std::int64_t per_community = 200, double off_diag = 0.15) {
  spiky::DcbmSpec spec;
  const std::int64_t k = 3;
  spec.b = Matrix::Constant(k, k, off_diag);
  for (std::int64_t i = 0; i < k; ++i) spec.b(i, i) = 1.0;
  for (std::int64_t c = 0; c < k; ++c) {
    for (std::int64_t i = 0; i < per_community; ++i) {
      spec.partition.push_back(static_cast<std::int32_t>(c));
      spec.alphas.push_back(i < per_community / 2 ? 0.3 : 1.0);
    }
  }
  return spec;
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Reference plus a per-row perturbed copy whose noise scales inversely with
/// the row norm, so high-norm rows keep their neighborhoods.
inline std::pair<Embeddings, Embeddings> perturbation_pair(std::int64_t n, std::int64_t f,
                                                           double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> norm_draw(0.5, 8.0);

  RowMatrix ref(n, f);
  for (std::int64_t i = 0; i < n; ++i) {
    Eigen::RowVectorXd dir(f);
    for (std::int64_t j = 0; j < f; ++j) dir(j) = normal(rng);
    dir /= dir.norm();
    ref.row(i) = norm_draw(rng) * dir;
  }
  RowMatrix pert = ref;
  for (std::int64_t i = 0; i < n; ++i) {
    double scale = noise / ref.row(i).norm();
    for (std::int64_t j = 0; j < f; ++j) pert(i, j) += scale * normal(rng);
  }
  auto a = embeddings_from_rows(std::move(ref));
  a.snapshot_label = "reference";
  auto b = embeddings_from_rows(std::move(pert));
  b.snapshot_label = "perturbed";
  return {std::move(a), std::move(b)};
}

inline spiky::InteractionTriples parse_text(const std::string& text) {
  std::istringstream in(text);
  return spiky::parse_interactions(in);
}

}  // namespace testsupport
