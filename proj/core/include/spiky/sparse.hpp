#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace spiky {

struct Triplet {
  std::int64_t row = 0;
  std::int64_t col = 0;
  double value = 0.0;
};

/// Immutable symmetric sparse matrix with non-negative finite entries.
/// Entries are canonicalized to the upper triangle; a full CSR view (both
/// triangles materialized) is kept for row scans.
class SparseSymmetric {
 public:
  struct Cell {
    std::int64_t col = 0;
    double value = 0.0;
  };

  SparseSymmetric() = default;

  /// Builds from coordinate entries. Either triangle may be listed; (i, j)
  /// and (j, i) refer to the same cell and duplicates are summed. Zero values
  /// are dropped; negative or non-finite values are rejected.
  static SparseSymmetric from_triplets(std::int64_t n, std::vector<Triplet> entries,
                                       std::vector<std::string> row_ids = {});

  std::int64_t n() const noexcept { return n_; }
  /// Number of stored upper-triangle entries.
  std::int64_t stored_nnz() const noexcept { return static_cast<std::int64_t>(upper_.size()); }
  /// Upper-triangle entries sorted by (row, col), row <= col.
  const std::vector<Triplet>& upper() const noexcept { return upper_; }
  /// Full symmetric row i (sorted by column).
  std::span<const Cell> row(std::int64_t i) const;
  /// 0 when the cell is absent.
  double value_at(std::int64_t i, std::int64_t j) const;
  /// Grand total over the full matrix (off-diagonal cells counted twice).
  double sum() const noexcept;
  double max_value() const noexcept;
  const std::vector<std::string>& row_ids() const noexcept { return row_ids_; }

  Eigen::MatrixXd to_dense() const;
  /// M * x, one column at a time over CSR rows.
  Eigen::MatrixXd multiply(const Eigen::Ref<const Eigen::MatrixXd>& x) const;

  /// Text format: header `SPKM n nnz`, then one `i j value` line per stored
  /// upper-triangle entry (0-based, i <= j, 17 significant digits).
  void write_spkm(std::ostream& out) const;
  static SparseSymmetric read_spkm(std::istream& in);

 private:
  void build_csr();

  std::int64_t n_ = 0;
  std::vector<Triplet> upper_;
  std::vector<std::string> row_ids_;
  std::vector<std::int64_t> row_offsets_;
  std::vector<Cell> cells_;
};

/// "0", "1", ... fallback ids used when a matrix has no natural item ids.
std::vector<std::string> default_row_ids(std::int64_t n);

}  // namespace spiky
