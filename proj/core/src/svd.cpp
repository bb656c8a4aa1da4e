#include "spiky/svd.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "spiky/errors.hpp"

namespace spiky {

namespace {

// Orders eigenpairs by (|d| descending, sign +1 first, original position),
// truncates to f, and fixes each retained eigenvector so its
// largest-magnitude component (first such, on ties) is positive.
Factorization finalize_eigenpairs(const Matrix& vectors, const Vector& values, std::int64_t f,
                                  std::vector<std::string> row_ids) {
  const std::int64_t m = values.size();
  std::vector<std::int64_t> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&values](std::int64_t a, std::int64_t b) {
    double aa = std::abs(values(a));
    double ab = std::abs(values(b));
    if (aa != ab) return aa > ab;
    bool pa = values(a) >= 0.0;
    bool pb = values(b) >= 0.0;
    if (pa != pb) return pa;
    return a < b;
  });

  Factorization fac;
  fac.u.resize(vectors.rows(), f);
  fac.sigma.resize(f);
  fac.signs.resize(static_cast<std::size_t>(f));
  for (std::int64_t k = 0; k < f; ++k) {
    std::int64_t src = order[static_cast<std::size_t>(k)];
    fac.u.col(k) = vectors.col(src);
    fac.sigma(k) = std::abs(values(src));
    fac.signs[static_cast<std::size_t>(k)] = values(src) < 0.0 ? -1 : 1;

    std::int64_t imax = 0;
    double best = -1.0;
    for (std::int64_t i = 0; i < fac.u.rows(); ++i) {
      double a = std::abs(fac.u(i, k));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (fac.u(imax, k) < 0.0) fac.u.col(k) = -fac.u.col(k);
  }
  fac.row_ids = std::move(row_ids);
  return fac;
}

Matrix thin_q(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() * Matrix::Identity(y.rows(), y.cols());
}

}  // namespace

Factorization truncated_svd(const SparseSymmetric& m, std::int64_t f, const SvdOptions& opts) {
  const std::int64_t n = m.n();
  if (f < 1) throw InvalidArgument("rank must be at least 1");
  if (f > n) {
    throw InvalidArgument("rank " + std::to_string(f) + " exceeds matrix dimension " +
                          std::to_string(n));
  }
  if (opts.oversample < 0 || opts.power_iters < 0) {
    throw InvalidArgument("oversample and power_iters must be non-negative");
  }

  const std::int64_t block = std::min(n, f + opts.oversample);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix omega(n, block);
  for (std::int64_t j = 0; j < block; ++j) {
    for (std::int64_t i = 0; i < n; ++i) omega(i, j) = normal(rng);
  }

  // Range finder with re-orthonormalized power iterations, then
  // Rayleigh-Ritz on the captured subspace.
  Matrix q = thin_q(m.multiply(omega));
  for (std::int64_t t = 0; t < opts.power_iters; ++t) {
    q = thin_q(m.multiply(q));
  }

  Matrix b = q.transpose() * m.multiply(q);
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(b);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed to converge");

  Matrix ritz = q * es.eigenvectors();
  return finalize_eigenpairs(ritz, es.eigenvalues(), f,
                             std::vector<std::string>(m.row_ids()));
}

Factorization exact_eig(const Eigen::Ref<const Matrix>& m, std::int64_t f,
                        std::vector<std::string> row_ids) {
  const std::int64_t n = m.rows();
  if (m.cols() != n) throw InvalidArgument("matrix must be square");
  if (n > 2000) throw InvalidArgument("exact_eig is an oracle for n <= 2000");
  if (f < 1 || f > n) throw InvalidArgument("rank must lie in [1, n]");
  if (!row_ids.empty() && static_cast<std::int64_t>(row_ids.size()) != n) {
    throw InvalidArgument("row_ids size does not match matrix dimension");
  }
  if (!m.allFinite()) throw NumericError("non-finite matrix entry");

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw InvalidArgument("matrix is not symmetric within tolerance");
  }

  Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed to converge");

  if (row_ids.empty()) row_ids = default_row_ids(n);
  return finalize_eigenpairs(es.eigenvectors(), es.eigenvalues(), f, std::move(row_ids));
}

}  // namespace spiky
