#pragma once

#include "adnewton/linalg/vector.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace adnewton {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// CSR index structure. Column indices are strictly increasing within a row.
struct CsrPattern {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::size_t> row_offsets;
  std::vector<std::size_t> col_indices;

  std::size_t nnz() const noexcept { return col_indices.size(); }
  /// Position of (row, col) in the value array, if stored.
  std::optional<std::size_t> find(std::size_t row, std::size_t col) const;
  /// Throws StructuralError if the CSR invariants do not hold.
  void validate() const;
};

/// Compressed sparse row matrix. The pattern is shared between matrices
/// assembled on the same mesh; values are owned.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(std::shared_ptr<const CsrPattern> pattern, std::vector<double> values);
  SparseMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  /// Square n x n matrix; duplicate (row, col) pairs are summed.
  static SparseMatrix from_triplets(std::size_t n, std::span<const Triplet> triplets);
  static SparseMatrix identity(std::size_t n);

  std::size_t n_rows() const noexcept { return pattern_ ? pattern_->n_rows : 0; }
  std::size_t n_cols() const noexcept { return pattern_ ? pattern_->n_cols : 0; }
  std::size_t nnz() const noexcept { return values_.size(); }

  const CsrPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const CsrPattern>& shared_pattern() const noexcept { return pattern_; }
  std::span<const std::size_t> row_offsets() const { return pattern_->row_offsets; }
  std::span<const std::size_t> col_indices() const { return pattern_->col_indices; }
  std::span<const double> values() const noexcept { return values_; }

  /// Entry (row, col); zero when not stored.
  double at(std::size_t row, std::size_t col) const;
  Vector diagonal() const;
  std::vector<Triplet> to_triplets() const;
  SparseMatrix transpose() const;
  double max_abs() const;

private:
  std::shared_ptr<const CsrPattern> pattern_;
  std::vector<double> values_;
};

Vector matvec(const SparseMatrix& a, const Vector& x);
/// x^T A y
double bilinear(const SparseMatrix& a, const Vector& x, const Vector& y);
/// max |A - A^T| over all entries.
double max_asymmetry(const SparseMatrix& a);

}  // namespace adnewton
