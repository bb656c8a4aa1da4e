#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace spiky {

using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Truncated eigendecomposition of a symmetric matrix in singular-value form:
/// the f dominant eigenpairs ranked by |eigenvalue|, with sigma_i = |d_i| and
/// signs_i = sign(d_i). The right factor is implicit: V = U * diag(signs).
struct Factorization {
  Matrix u;                          // n x f, orthonormal columns
  Vector sigma;                      // f values, descending, >= 0
  std::vector<int> signs;            // f values in {-1, +1}
  std::vector<std::string> row_ids;  // n ids

  std::int64_t n() const noexcept { return u.rows(); }
  std::int64_t f() const noexcept { return u.cols(); }
};

/// Dense embedding rows e_1..e_n = rows of U * Sigma^p.
struct Embeddings {
  RowMatrix e;
  double p = 1.0;
  std::vector<std::string> row_ids;
  std::string snapshot_label;

  std::int64_t n() const noexcept { return e.rows(); }
  std::int64_t f() const noexcept { return e.cols(); }
};

/// E = U * diag(sigma^p) with p in [0, 1]; p = 0 gives U, p = 1 gives
/// U * Sigma.
Embeddings make_embeddings(const Factorization& fac, double p);

/// M_hat = U diag(sigma * signs) U^T, returned symmetrized. Dense output,
/// guarded to n <= 5000.
Matrix reconstruct(const Factorization& fac);

}  // namespace spiky
