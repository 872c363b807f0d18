#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace adnewton {

struct Point {
  double x;
  double y;
};

/// Area and the constant gradients of the three nodal hat functions of a
/// P1 triangle.
struct ElementGeometry {
  double area;
  std::array<Point, 3> grad_basis;
};

/// Conforming P1 triangulation with homogeneous-Dirichlet DOF bookkeeping.
///
/// Triangles are counter-clockwise. Boundary vertices carry no degree of
/// freedom; interior vertices are numbered contiguously from 0 in vertex order.
class Mesh {
public:
  Mesh(std::vector<Point> vertices, std::vector<std::array<std::size_t, 3>> triangles,
       std::vector<bool> is_boundary);

  std::size_t n_vertices() const noexcept { return vertices_.size(); }
  std::size_t n_triangles() const noexcept { return triangles_.size(); }
  std::size_t n_interior() const noexcept { return interior_to_vertex_.size(); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<std::array<std::size_t, 3>>& triangles() const noexcept { return triangles_; }
  bool is_boundary(std::size_t v) const { return is_boundary_.at(v); }
  std::optional<std::size_t> interior_index(std::size_t v) const;
  std::size_t interior_vertex(std::size_t dof) const { return interior_to_vertex_.at(dof); }

  double total_area() const;

private:
  std::vector<Point> vertices_;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<bool> is_boundary_;
  std::vector<std::size_t> vertex_to_interior_;
  std::vector<std::size_t> interior_to_vertex_;
};

/// Uniform n x n grid on (0,1)^2, each cell split along its
/// lower-left to upper-right diagonal.
Mesh unit_square_mesh(std::size_t n);

/// (-1,1)^2 minus [0,1]^2 from three unit blocks with n cells per unit length.
Mesh l_shape_mesh(std::size_t n);

/// Throws StructuralError for an out-of-range index or a degenerate triangle.
ElementGeometry element_geometry(const Mesh& mesh, std::size_t t);

/// Plain-text dump: `vertex x y` and `triangle i j k` records, one per line.
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace adnewton
