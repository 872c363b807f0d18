#include "adnewton/fem.hpp"

#include "adnewton/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace adnewton {
namespace {

double dot2(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }

void require_dofs(const P1Space& space, const Vector& u, const char* op) {
  if (u.size() != space.n_dofs())
    throw StructuralError(std::string(op) + ": vector length " + std::to_string(u.size()) +
                          " does not match " + std::to_string(space.n_dofs()) +
                          " interior DOFs");
}

// Assembles sum_t area * (c0 grad phi_j . grad phi_i + c1 (d . grad phi_j)(d . grad phi_i))
// where (c0, c1, d) come from `coeffs(t)`.
template <class Coeffs>
SparseMatrix assemble(const P1Space& space, Coeffs coeffs) {
  std::vector<double> values(space.pattern()->nnz(), 0.0);
  const std::size_t n_tri = space.mesh().n_triangles();
  for (std::size_t t = 0; t < n_tri; ++t) {
    const ElementGeometry& geo = space.geometry(t);
    const auto [c0, c1, d] = coeffs(t);
    std::array<double, 3> proj{};
    for (std::size_t a = 0; a < 3; ++a) proj[a] = dot2(d, geo.grad_basis[a]);
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        const std::size_t s = space.slot(t, a, b);
        if (s == P1Space::npos) continue;
        values[s] += geo.area *
                     (c0 * dot2(geo.grad_basis[a], geo.grad_basis[b]) + c1 * proj[a] * proj[b]);
      }
    }
  }
  return SparseMatrix(space.pattern(), std::move(values));
}

struct ElementCoeffs {
  double c0;
  double c1;
  Point d;
};

}  // namespace

QuadratureRule QuadratureRule::edge_midpoint() {
  return {{{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 2};
}

QuadratureRule QuadratureRule::seven_point() {
  const double s15 = std::sqrt(15.0);
  const double a1 = (6.0 - s15) / 21.0;
  const double b1 = (9.0 + 2.0 * s15) / 21.0;
  const double a2 = (6.0 + s15) / 21.0;
  const double b2 = (9.0 - 2.0 * s15) / 21.0;
  const double w1 = (155.0 - s15) / 1200.0;
  const double w2 = (155.0 + s15) / 1200.0;
  return {{{1.0 / 3, 1.0 / 3, 1.0 / 3},
           {b1, a1, a1},
           {a1, b1, a1},
           {a1, a1, b1},
           {b2, a2, a2},
           {a2, b2, a2},
           {a2, a2, b2}},
          {9.0 / 40, w1, w1, w1, w2, w2, w2},
          5};
}

P1Space::P1Space(Mesh mesh) : mesh_(std::move(mesh)) {
  const std::size_t n_tri = mesh_.n_triangles();
  geometry_.reserve(n_tri);
  dofs_.resize(n_tri);
  for (std::size_t t = 0; t < n_tri; ++t) {
    geometry_.push_back(element_geometry(mesh_, t));
    for (std::size_t a = 0; a < 3; ++a)
      dofs_[t][a] = mesh_.interior_index(mesh_.triangles()[t][a]).value_or(npos);
  }

  // Row-wise column sets from element couplings.
  const std::size_t n = n_dofs();
  std::vector<std::vector<std::size_t>> rows(n);
  for (const auto& d : dofs_)
    for (std::size_t i : d)
      if (i != npos)
        for (std::size_t j : d)
          if (j != npos) rows[i].push_back(j);

  auto pattern = std::make_shared<CsrPattern>();
  pattern->n_rows = n;
  pattern->n_cols = n;
  pattern->row_offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    pattern->row_offsets[i + 1] = pattern->row_offsets[i] + r.size();
    pattern->col_indices.insert(pattern->col_indices.end(), r.begin(), r.end());
  }
  pattern->validate();

  slots_.resize(n_tri);
  for (std::size_t t = 0; t < n_tri; ++t) {
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        const std::size_t i = dofs_[t][a];
        const std::size_t j = dofs_[t][b];
        slots_[t][3 * a + b] = (i == npos || j == npos) ? npos : *pattern->find(i, j);
      }
    }
  }
  pattern_ = std::move(pattern);

  stiffness_ = assemble(*this, [](std::size_t) { return ElementCoeffs{1.0, 0.0, {0.0, 0.0}}; });
}

Point P1Space::gradient(std::size_t t, const Vector& u) const {
  Point g{0.0, 0.0};
  const ElementGeometry& geo = geometry_[t];
  for (std::size_t a = 0; a < 3; ++a) {
    const std::size_t i = dofs_[t][a];
    if (i == npos) continue;
    g.x += u[i] * geo.grad_basis[a].x;
    g.y += u[i] * geo.grad_basis[a].y;
  }
  return g;
}

Vector P1Space::interpolate(const std::function<double(double, double)>& f) const {
  Vector u(n_dofs());
  for (std::size_t i = 0; i < n_dofs(); ++i) {
    const Point& p = mesh_.vertices()[mesh_.interior_vertex(i)];
    u[i] = f(p.x, p.y);
  }
  return u;
}

double energy_norm(const P1Space& space, const Vector& u) {
  require_dofs(space, u, "energy_norm");
  return std::sqrt(std::max(0.0, bilinear(space.stiffness(), u, u)));
}

Vector load_vector(const P1Space& space, const DiffusionModel& model,
                   const ManufacturedSolution& exact, const QuadratureRule& rule) {
  const Mesh& mesh = space.mesh();
  Vector load(space.n_dofs());
  for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Point& p0 = mesh.vertices()[tri[0]];
    const Point& p1 = mesh.vertices()[tri[1]];
    const Point& p2 = mesh.vertices()[tri[2]];
    // Flux mu(|grad u*|^2) grad u*, averaged with the rule's weights.
    Point flux{0.0, 0.0};
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto& l = rule.points[q];
      const double x = l[0] * p0.x + l[1] * p1.x + l[2] * p2.x;
      const double y = l[0] * p0.y + l[1] * p1.y + l[2] * p2.y;
      const Point g = exact.grad(x, y);
      const double m = model.mu(dot2(g, g));
      flux.x += rule.weights[q] * m * g.x;
      flux.y += rule.weights[q] * m * g.y;
    }
    const ElementGeometry& geo = space.geometry(t);
    for (std::size_t a = 0; a < 3; ++a) {
      const std::size_t i = space.dof(t, a);
      if (i != P1Space::npos) load[i] += geo.area * dot2(flux, geo.grad_basis[a]);
    }
  }
  return load;
}

DiscreteProblem::DiscreteProblem(std::shared_ptr<const P1Space> space, ModelSetup setup,
                                 const ManufacturedSolution& exact, const QuadratureRule& rule)
    : space_(std::move(space)), setup_(std::move(setup)) {
  if (!space_) throw StructuralError("DiscreteProblem: null space");
  load_ = load_vector(*space_, setup_.model, exact, rule);
  load_norm_ = norm2(load_);
}

DiscreteProblem::DiscreteProblem(std::shared_ptr<const P1Space> space, ModelSetup setup,
                                 Vector load)
    : space_(std::move(space)), setup_(std::move(setup)), load_(std::move(load)) {
  if (!space_) throw StructuralError("DiscreteProblem: null space");
  require_dofs(*space_, load_, "DiscreteProblem");
  load_norm_ = norm2(load_);
}

Vector DiscreteProblem::residual(const Vector& u) const { return adnewton::residual(*this, u); }
SparseMatrix DiscreteProblem::jacobian(const Vector& u) const {
  return adnewton::jacobian(*this, u);
}
double DiscreteProblem::potential(const Vector& u) const {
  return adnewton::potential(*this, u);
}
double DiscreteProblem::norm(const Vector& v) const { return energy_norm(*space_, v); }

Vector residual(const DiscreteProblem& p, const Vector& u) {
  const P1Space& space = p.space();
  require_dofs(space, u, "residual");
  Vector r(space.n_dofs());
  for (std::size_t t = 0; t < space.mesh().n_triangles(); ++t) {
    const Point g = space.gradient(t, u);
    const ElementGeometry& geo = space.geometry(t);
    const double w = geo.area * p.model().mu(dot2(g, g));
    for (std::size_t a = 0; a < 3; ++a) {
      const std::size_t i = space.dof(t, a);
      if (i != P1Space::npos) r[i] += w * dot2(g, geo.grad_basis[a]);
    }
  }
  r -= p.load();
  return r;
}

SparseMatrix jacobian(const DiscreteProblem& p, const Vector& u) {
  const P1Space& space = p.space();
  require_dofs(space, u, "jacobian");
  return assemble(space, [&](std::size_t t) {
    const Point g = space.gradient(t, u);
    const double q = dot2(g, g);
    return ElementCoeffs{p.model().mu(q), 2.0 * p.model().mu_prime(q), g};
  });
}

SparseMatrix frozen_coefficient_matrix(const DiscreteProblem& p, const Vector& u) {
  const P1Space& space = p.space();
  require_dofs(space, u, "frozen_coefficient_matrix");
  return assemble(space, [&](std::size_t t) {
    const Point g = space.gradient(t, u);
    return ElementCoeffs{p.model().mu(dot2(g, g)), 0.0, {0.0, 0.0}};
  });
}

double potential(const DiscreteProblem& p, const Vector& u) {
  const P1Space& space = p.space();
  require_dofs(space, u, "potential");
  double h = 0.0;
  for (std::size_t t = 0; t < space.mesh().n_triangles(); ++t) {
    const Point g = space.gradient(t, u);
    h += space.geometry(t).area * p.model().psi(dot2(g, g));
  }
  return h - dot(p.load(), u);
}

double potential_difference(const DiscreteProblem& p, const Vector& u, const Vector& w) {
  const P1Space& space = p.space();
  require_dofs(space, u, "potential_difference");
  require_dofs(space, w, "potential_difference");
  double dh = 0.0;
  for (std::size_t t = 0; t < space.mesh().n_triangles(); ++t) {
    const Point g = space.gradient(t, u);
    const Point dg = space.gradient(t, w);
    // |g + dg|^2 - |g|^2 = dg . (2 g + dg)
    const double dq = dg.x * (2.0 * g.x + dg.x) + dg.y * (2.0 * g.y + dg.y);
    dh += space.geometry(t).area * p.model().psi_difference(dot2(g, g), dq);
  }
  return dh - dot(p.load(), w);
}

}  // namespace adnewton
