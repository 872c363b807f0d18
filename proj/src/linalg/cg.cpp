#include "adnewton/linalg/cg.hpp"

#include "adnewton/error.hpp"
#include "adnewton/linalg/kernels.hpp"

#include <cmath>
#include <string>

namespace adnewton {

CgResult cg_solve_detailed(const SparseMatrix& a, const Vector& b, double rel_tol,
                           std::size_t max_iter) {
  if (a.n_rows() != a.n_cols()) throw StructuralError("cg_solve: matrix is not square");
  if (b.size() != a.n_rows()) throw StructuralError("cg_solve: right-hand side length mismatch");
  if (!(rel_tol > 0.0)) throw StructuralError("cg_solve: rel_tol must be positive");

  const std::size_t n = b.size();
  Vector inv_diag = a.diagonal();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(inv_diag[i] > 0.0))
      throw NotSpdError("cg_solve: non-positive diagonal entry at row " + std::to_string(i));
    inv_diag[i] = 1.0 / inv_diag[i];
  }

  CgResult result{Vector(n), 0, 0.0};
  const double b_norm = norm2(b);
  if (b_norm == 0.0) return result;
  const double target = rel_tol * b_norm;

  const auto& k = kernels::active();
  Vector& x = result.x;
  Vector r = b;
  Vector z(n);
  Vector p(n);
  Vector ap(n);
  double r_norm = b_norm;

  while (true) {
    // (Re)start from the true residual r = b - A x.
    k.hadamard(inv_diag.data(), r.data(), z.data(), n);
    p = z;
    double rz = dot(r, z);
    while (r_norm > target && result.iterations < max_iter) {
      k.csr_matvec(n, a.row_offsets().data(), a.col_indices().data(), a.values().data(),
                   p.data(), ap.data());
      const double p_ap = dot(p, ap);
      if (!(p_ap > 0.0)) throw NotSpdError("cg_solve: non-positive curvature p^T A p");
      const double alpha = rz / p_ap;
      k.axpy(alpha, p.data(), x.data(), n);
      k.axpy(-alpha, ap.data(), r.data(), n);
      k.hadamard(inv_diag.data(), r.data(), z.data(), n);
      const double rz_next = dot(r, z);
      k.xpay(z.data(), rz_next / rz, p.data(), n);
      rz = rz_next;
      r_norm = norm2(r);
      ++result.iterations;
    }

    r = b - matvec(a, x);
    r_norm = norm2(r);
    result.relative_residual = r_norm / b_norm;
    if (r_norm <= target) return result;
    if (result.iterations >= max_iter || !std::isfinite(r_norm)) {
      throw NonConvergenceError("cg_solve: no convergence after " +
                                    std::to_string(result.iterations) +
                                    " iterations (relative residual " +
                                    std::to_string(result.relative_residual) + ")",
                                result.relative_residual, result.iterations);
    }
  }
}

Vector cg_solve(const SparseMatrix& a, const Vector& b, double rel_tol, std::size_t max_iter) {
  return cg_solve_detailed(a, b, rel_tol, max_iter).x;
}

}  // namespace adnewton
