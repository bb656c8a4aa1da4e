#include "spiky/sparse.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "spiky/errors.hpp"

namespace spiky {

std::vector<std::string> default_row_ids(std::int64_t n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

SparseSymmetric SparseSymmetric::from_triplets(std::int64_t n, std::vector<Triplet> entries,
                                               std::vector<std::string> row_ids) {
  if (n < 0) throw InvalidArgument("matrix dimension must be non-negative");
  if (!row_ids.empty() && static_cast<std::int64_t>(row_ids.size()) != n) {
    throw InvalidArgument("row_ids size does not match matrix dimension");
  }

  for (auto& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw InvalidArgument("triplet index out of range");
    }
    if (!std::isfinite(t.value)) throw NumericError("non-finite matrix entry");
    if (t.value < 0.0) throw InvalidArgument("negative matrix entry");
    if (t.row > t.col) std::swap(t.row, t.col);
  }

  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseSymmetric out;
  out.n_ = n;
  out.upper_.reserve(entries.size());
  for (const auto& t : entries) {
    if (!out.upper_.empty() && out.upper_.back().row == t.row &&
        out.upper_.back().col == t.col) {
      out.upper_.back().value += t.value;
    } else {
      out.upper_.push_back(t);
    }
  }
  std::erase_if(out.upper_, [](const Triplet& t) { return t.value == 0.0; });

  out.row_ids_ = row_ids.empty() ? default_row_ids(n) : std::move(row_ids);
  out.build_csr();
  return out;
}

void SparseSymmetric::build_csr() {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& t : upper_) {
    ++counts[static_cast<std::size_t>(t.row) + 1];
    if (t.row != t.col) ++counts[static_cast<std::size_t>(t.col) + 1];
  }
  row_offsets_.assign(counts.begin(), counts.end());
  for (std::size_t i = 1; i < row_offsets_.size(); ++i) row_offsets_[i] += row_offsets_[i - 1];

  cells_.resize(static_cast<std::size_t>(row_offsets_.back()));
  std::vector<std::int64_t> cursor(row_offsets_.begin(), row_offsets_.end() - 1);
  for (const auto& t : upper_) {
    cells_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(t.row)]++)] = {t.col,
                                                                                   t.value};
    if (t.row != t.col) {
      cells_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(t.col)]++)] = {t.row,
                                                                                     t.value};
    }
  }
  for (std::int64_t i = 0; i < n_; ++i) {
    auto begin = cells_.begin() + row_offsets_[static_cast<std::size_t>(i)];
    auto end = cells_.begin() + row_offsets_[static_cast<std::size_t>(i) + 1];
    std::sort(begin, end, [](const Cell& a, const Cell& b) { return a.col < b.col; });
  }
}

std::span<const SparseSymmetric::Cell> SparseSymmetric::row(std::int64_t i) const {
  if (i < 0 || i >= n_) throw InvalidArgument("row index out of range");
  auto begin = static_cast<std::size_t>(row_offsets_[static_cast<std::size_t>(i)]);
  auto end = static_cast<std::size_t>(row_offsets_[static_cast<std::size_t>(i) + 1]);
  return {cells_.data() + begin, end - begin};
}

double SparseSymmetric::value_at(std::int64_t i, std::int64_t j) const {
  auto cells = row(i);
  auto it = std::lower_bound(cells.begin(), cells.end(), j,
                             [](const Cell& c, std::int64_t col) { return c.col < col; });
  return (it != cells.end() && it->col == j) ? it->value : 0.0;
}

double SparseSymmetric::sum() const noexcept {
  double total = 0.0;
  for (const auto& t : upper_) total += t.row == t.col ? t.value : 2.0 * t.value;
  return total;
}

double SparseSymmetric::max_value() const noexcept {
  double m = 0.0;
  for (const auto& t : upper_) m = std::max(m, t.value);
  return m;
}

Eigen::MatrixXd SparseSymmetric::to_dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& t : upper_) {
    out(t.row, t.col) = t.value;
    out(t.col, t.row) = t.value;
  }
  return out;
}

Eigen::MatrixXd SparseSymmetric::multiply(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  if (x.rows() != n_) throw InvalidArgument("dimension mismatch in sparse product");
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n_, x.cols());
  for (std::int64_t i = 0; i < n_; ++i) {
    for (const Cell& c : row(i)) {
      y.row(i) += c.value * x.row(c.col);
    }
  }
  return y;
}

void SparseSymmetric::write_spkm(std::ostream& out) const {
  out << "SPKM " << n_ << ' ' << upper_.size() << '\n';
  char buf[64];
  for (const auto& t : upper_) {
    std::snprintf(buf, sizeof(buf), "%.17g", t.value);
    out << t.row << ' ' << t.col << ' ' << buf << '\n';
  }
  if (!out) throw Error("failed writing sparse matrix");
}

SparseSymmetric SparseSymmetric::read_spkm(std::istream& in) {
  std::string magic;
  std::int64_t n = 0;
  std::int64_t nnz = 0;
  if (!(in >> magic >> n >> nnz) || magic != "SPKM") {
    throw ParseError("expected header 'SPKM n nnz'", 1);
  }
  if (n < 0 || nnz < 0) throw ParseError("negative dimension in header", 1);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (std::int64_t k = 0; k < nnz; ++k) {
    Triplet t;
    if (!(in >> t.row >> t.col >> t.value)) {
      throw ParseError("truncated entry list", static_cast<std::uint64_t>(k) + 2);
    }
    if (t.row > t.col) {
      throw ParseError("entry below the diagonal", static_cast<std::uint64_t>(k) + 2);
    }
    entries.push_back(t);
  }
  return from_triplets(n, std::move(entries));
}

}  // namespace spiky
