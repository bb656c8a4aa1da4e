#pragma once

#include <cstdint>

#include "spiky/factorization.hpp"
#include "spiky/sparse.hpp"

namespace spiky {

struct SvdOptions {
  std::int64_t oversample = 10;
  std::int64_t power_iters = 4;
  std::uint64_t seed = 0;
};

/// Randomized subspace iteration for the f dominant eigenpairs (by absolute
/// eigenvalue) of a sparse symmetric matrix. Deterministic per seed: the same
/// seed yields a bit-identical Factorization. Eigenvector signs are fixed so
/// the largest-magnitude component of each column of U is positive.
Factorization truncated_svd(const SparseSymmetric& m, std::int64_t f,
                            const SvdOptions& opts = {});

/// Full dense eigendecomposition truncated to the f largest |d_i|; the exact
/// small-scale oracle for truncated_svd (n <= 2000). Same ordering and sign
/// conventions. Input must be symmetric within 1e-12 relative.
Factorization exact_eig(const Eigen::Ref<const Matrix>& m, std::int64_t f,
                        std::vector<std::string> row_ids = {});

}  // namespace spiky
