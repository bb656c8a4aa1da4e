#pragma once

#include <cstdint>

#include "spiky/interactions.hpp"
#include "spiky/sparse.hpp"

namespace spiky {

/// Co-occurrence gram of the item rows: G(i, j) = sum_c w(i, c) * w(j, c).
/// Only nonzero cells are stored; the result carries the item ids.
SparseSymmetric build_gram(const InteractionTriples& t);

/// Keeps cell (i, j) iff it ranks among the k largest entries of row i or of
/// row j (union rule, preserves symmetry). Ties at the k-th value keep the
/// smaller column index first.
SparseSymmetric topk_filter(const SparseSymmetric& m, std::int64_t k);

/// Positive pointwise mutual information: for each stored cell,
/// max(0, log(x_ij * total / (row_i * row_j))). Cells clamped to zero drop
/// out of the result. Natural log, no smoothing.
SparseSymmetric ppmi(const SparseSymmetric& m);

}  // namespace spiky
