#pragma once

// P1 Galerkin discretization of F(u) = -div(mu(|grad u|^2) grad u) - g with
// homogeneous Dirichlet conditions imposed by eliminating boundary vertices.
//
// P1 gradients are constant per element, so the operator, its Jacobian and
// the potential are integrated exactly by a one-point rule. Only the source
// term (realized weakly through a manufactured solution's gradient) needs a
// quadrature rule.

#include "adnewton/linalg/sparse_matrix.hpp"
#include "adnewton/linalg/vector.hpp"
#include "adnewton/mesh.hpp"
#include "adnewton/models.hpp"
#include "adnewton/operator.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace adnewton {

/// Barycentric points and weights on a triangle; weights sum to 1 and are
/// scaled by the element area at use.
struct QuadratureRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  /// Edge midpoints, exact for quadratics.
  static QuadratureRule edge_midpoint();
  /// Seven-point rule, exact for quintics.
  static QuadratureRule seven_point();
};

/// Per-mesh data shared by every discrete problem on that mesh: element
/// geometry, the interior-DOF CSR pattern with per-element scatter slots, and
/// the unweighted stiffness matrix S.
class P1Space {
public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit P1Space(Mesh mesh);

  const Mesh& mesh() const noexcept { return mesh_; }
  std::size_t n_dofs() const noexcept { return mesh_.n_interior(); }
  const ElementGeometry& geometry(std::size_t t) const { return geometry_[t]; }
  /// Interior DOF of local vertex a of element t, or npos on the boundary.
  std::size_t dof(std::size_t t, std::size_t a) const { return dofs_[t][a]; }
  /// Value-array slot of local entry (a, b) of element t, or npos.
  std::size_t slot(std::size_t t, std::size_t a, std::size_t b) const {
    return slots_[t][3 * a + b];
  }

  const std::shared_ptr<const CsrPattern>& pattern() const noexcept { return pattern_; }
  const SparseMatrix& stiffness() const noexcept { return stiffness_; }

  /// Constant gradient of the P1 field u on element t.
  Point gradient(std::size_t t, const Vector& u) const;
  /// Nodal interpolant restricted to interior vertices.
  Vector interpolate(const std::function<double(double, double)>& f) const;

private:
  Mesh mesh_;
  std::vector<ElementGeometry> geometry_;
  std::vector<std::array<std::size_t, 3>> dofs_;
  std::vector<std::array<std::size_t, 9>> slots_;
  std::shared_ptr<const CsrPattern> pattern_;
  SparseMatrix stiffness_;
};

/// sqrt(u^T S u), the discrete H^1_0 seminorm.
double energy_norm(const P1Space& space, const Vector& u);

/// <g, phi_i> = int mu(|grad u*|^2) grad u* . grad phi_i over interior DOFs.
Vector load_vector(const P1Space& space, const DiffusionModel& model,
                   const ManufacturedSolution& exact,
                   const QuadratureRule& rule = QuadratureRule::edge_midpoint());

/// Fully assembled nonlinear problem; immutable once built.
class DiscreteProblem final : public OperatorProblem {
public:
  DiscreteProblem(std::shared_ptr<const P1Space> space, ModelSetup setup,
                  const ManufacturedSolution& exact,
                  const QuadratureRule& rule = QuadratureRule::edge_midpoint());
  DiscreteProblem(std::shared_ptr<const P1Space> space, ModelSetup setup, Vector load);

  const P1Space& space() const noexcept { return *space_; }
  const Mesh& mesh() const noexcept { return space_->mesh(); }
  std::size_t n_dofs() const noexcept { return space_->n_dofs(); }
  const DiffusionModel& model() const noexcept { return setup_.model; }
  const Vector& load() const noexcept { return load_; }

  std::size_t dimension() const override { return n_dofs(); }
  Vector residual(const Vector& u) const override;
  SparseMatrix jacobian(const Vector& u) const override;
  double potential(const Vector& u) const override;
  double norm(const Vector& v) const override;
  double residual_scale() const override { return load_norm_; }
  const StructuralConstants& constants() const override { return setup_.constants; }

private:
  std::shared_ptr<const P1Space> space_;
  ModelSetup setup_;
  Vector load_;
  double load_norm_ = 0.0;
};

/// <F(u), phi_i> for every interior DOF.
Vector residual(const DiscreteProblem& p, const Vector& u);

/// F'(u): mu(q) grad phi_j . grad phi_i + 2 mu'(q) (grad u . grad phi_j)(grad u . grad phi_i).
SparseMatrix jacobian(const DiscreteProblem& p, const Vector& u);

/// Frozen-coefficient matrix mu(|grad u|^2) grad phi_j . grad phi_i (Kacanov linearization).
SparseMatrix frozen_coefficient_matrix(const DiscreteProblem& p, const Vector& u);

/// H(u) = int psi(|grad u|^2) - load . u
double potential(const DiscreteProblem& p, const Vector& u);

/// H(u + w) - H(u) accumulated elementwise without cancellation between the
/// two potentials.
double potential_difference(const DiscreteProblem& p, const Vector& u, const Vector& w);

}  // namespace adnewton
