#pragma once

#include "adnewton/linalg/sparse_matrix.hpp"
#include "adnewton/linalg/vector.hpp"
#include "adnewton/models.hpp"

#include <cstddef>

namespace adnewton {

/// A potential operator F = H' on a finite-dimensional space with norm ||.||_X,
/// seen through its coefficient representation: residual(u)_i = <F(u), phi_i>.
///
/// The iteration schemes only talk to this interface, so small hand-written
/// operators can drive them in tests.
class OperatorProblem {
public:
  virtual ~OperatorProblem() = default;

  virtual std::size_t dimension() const = 0;
  virtual Vector residual(const Vector& u) const = 0;
  virtual SparseMatrix jacobian(const Vector& u) const = 0;
  virtual double potential(const Vector& u) const = 0;
  /// ||v||_X
  virtual double norm(const Vector& v) const = 0;
  /// Scale for the relative residual stopping test (||load||_2 for the PDE).
  virtual double residual_scale() const = 0;
  virtual const StructuralConstants& constants() const = 0;
};

}  // namespace adnewton
