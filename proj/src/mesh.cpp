#include "adnewton/mesh.hpp"

#include "adnewton/error.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

namespace adnewton {
namespace {

constexpr std::size_t kNoDof = std::numeric_limits<std::size_t>::max();

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

// Builds a mesh from the cells of a structured grid. Grid vertex (i, j) sits at
// (x0 + i/n, y0 + j/n); `keep_cell` selects cells and `on_boundary` classifies
// grid vertices by integer coordinates. Unused grid vertices are dropped.
template <class KeepCell, class OnBoundary>
Mesh structured_mesh(std::size_t nx, std::size_t ny, std::size_t n, double x0, double y0,
                     KeepCell keep_cell, OnBoundary on_boundary) {
  const std::size_t stride = nx + 1;
  std::vector<std::size_t> grid_to_vertex((nx + 1) * (ny + 1), kNoDof);
  std::vector<Point> vertices;
  std::vector<bool> boundary;
  std::vector<std::array<std::size_t, 3>> triangles;

  auto vertex = [&](std::size_t i, std::size_t j) {
    std::size_t& v = grid_to_vertex[j * stride + i];
    if (v == kNoDof) {
      v = vertices.size();
      vertices.push_back({x0 + static_cast<double>(i) / static_cast<double>(n),
                          y0 + static_cast<double>(j) / static_cast<double>(n)});
      boundary.push_back(on_boundary(i, j));
    }
    return v;
  };

  // First pass registers vertices in row-major grid order so numbering does
  // not depend on cell traversal.
  std::vector<bool> used((nx + 1) * (ny + 1), false);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      if (keep_cell(i, j))
        for (std::size_t dj = 0; dj < 2; ++dj)
          for (std::size_t di = 0; di < 2; ++di) used[(j + dj) * stride + i + di] = true;
  for (std::size_t j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i <= nx; ++i)
      if (used[j * stride + i]) vertex(i, j);

  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (!keep_cell(i, j)) continue;
      const std::size_t v00 = vertex(i, j);
      const std::size_t v10 = vertex(i + 1, j);
      const std::size_t v01 = vertex(i, j + 1);
      const std::size_t v11 = vertex(i + 1, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<std::size_t, 3>> triangles,
           std::vector<bool> is_boundary)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      is_boundary_(std::move(is_boundary)) {
  if (is_boundary_.size() != vertices_.size())
    throw StructuralError("Mesh: boundary flags must match the vertex count");
  for (const auto& tri : triangles_)
    for (std::size_t v : tri)
      if (v >= vertices_.size()) throw StructuralError("Mesh: triangle references missing vertex");
  vertex_to_interior_.assign(vertices_.size(), kNoDof);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (is_boundary_[v]) continue;
    vertex_to_interior_[v] = interior_to_vertex_.size();
    interior_to_vertex_.push_back(v);
  }
}

std::optional<std::size_t> Mesh::interior_index(std::size_t v) const {
  const std::size_t d = vertex_to_interior_.at(v);
  if (d == kNoDof) return std::nullopt;
  return d;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (const auto& t : triangles_)
    a += signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
  return a;
}

Mesh unit_square_mesh(std::size_t n) {
  if (n == 0) throw StructuralError("unit_square_mesh: n must be at least 1");
  return structured_mesh(
      n, n, n, 0.0, 0.0, [](std::size_t, std::size_t) { return true; },
      [n](std::size_t i, std::size_t j) { return i == 0 || j == 0 || i == n || j == n; });
}

Mesh l_shape_mesh(std::size_t n) {
  if (n == 0) throw StructuralError("l_shape_mesh: n must be at least 1");
  const std::size_t m = 2 * n;
  // Grid index n corresponds to the coordinate 0; the removed block is the
  // upper-right quadrant.
  return structured_mesh(
      m, m, n, -1.0, -1.0, [n](std::size_t i, std::size_t j) { return i < n || j < n; },
      [n, m](std::size_t i, std::size_t j) {
        if (i == 0 || j == 0 || i == m || j == m) return true;
        return (i == n && j >= n) || (j == n && i >= n);
      });
}

ElementGeometry element_geometry(const Mesh& mesh, std::size_t t) {
  if (t >= mesh.n_triangles())
    throw StructuralError("element_geometry: triangle index " + std::to_string(t) +
                          " out of range");
  const auto& tri = mesh.triangles()[t];
  const Point& a = mesh.vertices()[tri[0]];
  const Point& b = mesh.vertices()[tri[1]];
  const Point& c = mesh.vertices()[tri[2]];
  const double area = signed_area(a, b, c);
  if (!(std::abs(area) > 0.0))
    throw StructuralError("element_geometry: degenerate triangle " + std::to_string(t));
  const double inv2a = 1.0 / (2.0 * area);
  // grad phi_k = rot90(opposite edge) / (2 area)
  ElementGeometry g{std::abs(area), {}};
  g.grad_basis[0] = {(b.y - c.y) * inv2a, (c.x - b.x) * inv2a};
  g.grad_basis[1] = {(c.y - a.y) * inv2a, (a.x - c.x) * inv2a};
  g.grad_basis[2] = {(a.y - b.y) * inv2a, (b.x - a.x) * inv2a};
  return g;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  const auto old_precision = os.precision(17);
  for (const Point& p : mesh.vertices()) os << "vertex " << p.x << ' ' << p.y << '\n';
  for (const auto& t : mesh.triangles())
    os << "triangle " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os.precision(old_precision);
}

}  // namespace adnewton
