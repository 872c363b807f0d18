#pragma once

#include "adnewton/linalg/sparse_matrix.hpp"
#include "adnewton/linalg/vector.hpp"

#include <cstddef>

namespace adnewton {

struct CgResult {
  Vector x;
  std::size_t iterations = 0;
  /// ||b - A x||_2 / ||b||_2 recomputed from the returned x (0 when b = 0).
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite A.
///
/// Stops on the recursively updated residual, then confirms with the true
/// residual b - A x; if the true residual misses the tolerance the iteration
/// restarts from the current x (counted against max_iter).
///
/// Throws NotSpdError on a non-positive diagonal entry and
/// NonConvergenceError (carrying the achieved relative residual) when
/// max_iter is exhausted.
CgResult cg_solve_detailed(const SparseMatrix& a, const Vector& b, double rel_tol,
                           std::size_t max_iter);

Vector cg_solve(const SparseMatrix& a, const Vector& b, double rel_tol, std::size_t max_iter);

}  // namespace adnewton
