#include "adnewton/linalg/sparse_matrix.hpp"

#include "adnewton/error.hpp"
#include "adnewton/linalg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace adnewton {

std::optional<std::size_t> CsrPattern::find(std::size_t row, std::size_t col) const {
  if (row >= n_rows) return std::nullopt;
  const auto first = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[row]);
  const auto last = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return std::nullopt;
  return static_cast<std::size_t>(it - col_indices.begin());
}

void CsrPattern::validate() const {
  if (row_offsets.size() != n_rows + 1)
    throw StructuralError("CSR: row_offsets must have n_rows+1 entries");
  if (row_offsets.front() != 0) throw StructuralError("CSR: row_offsets must start at 0");
  if (row_offsets.back() != col_indices.size())
    throw StructuralError("CSR: last row offset must equal the number of stored entries");
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (row_offsets[r] > row_offsets[r + 1])
      throw StructuralError("CSR: row_offsets must be non-decreasing");
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      if (col_indices[k] >= n_cols) throw StructuralError("CSR: column index out of range");
      if (k > row_offsets[r] && col_indices[k] <= col_indices[k - 1])
        throw StructuralError("CSR: column indices must be strictly increasing within a row");
    }
  }
}

SparseMatrix::SparseMatrix(std::shared_ptr<const CsrPattern> pattern, std::vector<double> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
  if (!pattern_) throw StructuralError("SparseMatrix: null pattern");
  if (values_.size() != pattern_->nnz())
    throw StructuralError("SparseMatrix: value count does not match pattern");
}

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values) {
  auto p = std::make_shared<CsrPattern>();
  p->n_rows = n_rows;
  p->n_cols = n_cols;
  p->row_offsets = std::move(row_offsets);
  p->col_indices = std::move(col_indices);
  p->validate();
  if (values.size() != p->nnz())
    throw StructuralError("SparseMatrix: value count does not match column index count");
  pattern_ = std::move(p);
  values_ = std::move(values);
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n, std::span<const Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row >= n || t.col >= n)
      throw StructuralError("from_triplets: index (" + std::to_string(t.row) + "," +
                            std::to_string(t.col) + ") out of range for n=" + std::to_string(n));
  }
  std::vector<Triplet> sorted(triplets.begin(), triplets.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(sorted.size());
  vals.reserve(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const Triplet& t = sorted[k];
    if (k > 0 && sorted[k - 1].row == t.row && sorted[k - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
  }
  for (std::size_t r = 0; r < n; ++r) offsets[r + 1] += offsets[r];
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1);
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

double SparseMatrix::at(std::size_t row, std::size_t col) const {
  if (row >= n_rows() || col >= n_cols()) throw StructuralError("SparseMatrix::at: out of range");
  const auto k = pattern_->find(row, col);
  return k ? values_[*k] : 0.0;
}

Vector SparseMatrix::diagonal() const {
  const std::size_t n = std::min(n_rows(), n_cols());
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i);
  return d;
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t r = 0; r < n_rows(); ++r)
    for (std::size_t k = pattern_->row_offsets[r]; k < pattern_->row_offsets[r + 1]; ++k)
      out.push_back({r, pattern_->col_indices[k], values_[k]});
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> offsets(n_cols() + 1, 0);
  for (std::size_t c : pattern_->col_indices) ++offsets[c + 1];
  for (std::size_t c = 0; c < n_cols(); ++c) offsets[c + 1] += offsets[c];
  std::vector<std::size_t> cols(nnz());
  std::vector<double> vals(nnz());
  std::vector<std::size_t> next(offsets.begin(), offsets.end() - 1);
  for (std::size_t r = 0; r < n_rows(); ++r) {
    for (std::size_t k = pattern_->row_offsets[r]; k < pattern_->row_offsets[r + 1]; ++k) {
      const std::size_t dst = next[pattern_->col_indices[k]]++;
      cols[dst] = r;
      vals[dst] = values_[k];
    }
  }
  return SparseMatrix(n_cols(), n_rows(), std::move(offsets), std::move(cols), std::move(vals));
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Vector matvec(const SparseMatrix& a, const Vector& x) {
  if (x.size() != a.n_cols())
    throw StructuralError("matvec: vector length " + std::to_string(x.size()) +
                          " does not match " + std::to_string(a.n_cols()) + " columns");
  Vector y(a.n_rows());
  kernels::active().csr_matvec(a.n_rows(), a.row_offsets().data(), a.col_indices().data(),
                               a.values().data(), x.data(), y.data());
  return y;
}

double bilinear(const SparseMatrix& a, const Vector& x, const Vector& y) {
  return dot(x, matvec(a, y));
}

double max_asymmetry(const SparseMatrix& a) {
  if (a.n_rows() != a.n_cols()) throw StructuralError("max_asymmetry: matrix is not square");
  double m = 0.0;
  for (const Triplet& t : a.to_triplets()) m = std::max(m, std::abs(t.value - a.at(t.col, t.row)));
  return m;
}

}  // namespace adnewton
