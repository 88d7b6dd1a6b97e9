#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "stokes_afem/basis.hpp"
#include "stokes_afem/mesh.hpp"
#include "stokes_afem/quadrature.hpp"
#include "stokes_afem/space.hpp"

namespace stokes_afem::testing {

/// Unit square split along the (0,0)-(1,1) diagonal; the diagonal is the
/// refinement edge of both triangles.
inline SimplicialMesh two_triangle_square() {
  std::vector<Point> v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  return SimplicialMesh(v, {{1, 2, 0}, {3, 0, 2}});
}

inline Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

/// Value of the discrete velocity of element e at the physical point x.
inline Eigen::Vector2d eval_velocity(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                                     const Eigen::VectorXd& u, int e, const Point& x) {
  const ElementMap map(mesh, e);
  const Eigen::VectorXd phi = space.velocity_basis().values(map.to_reference(x));
  const int nv = space.velocity_dim();
  return {u.segment(space.velocity_dof(e, 0, 0), nv).dot(phi),
          u.segment(space.velocity_dof(e, 1, 0), nv).dot(phi)};
}

inline double eval_pressure(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                            const Eigen::VectorXd& p, int e, const Point& x) {
  const ElementMap map(mesh, e);
  const Eigen::VectorXd psi = space.pressure_basis().values(map.to_reference(x));
  return p.segment(space.pressure_offset(e), space.pressure_dim()).dot(psi);
}

/// Coefficients of the continuous piecewise-linear interpolant of g (applied
/// to both velocity components with the given weights).
inline Eigen::VectorXd linear_interpolant(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                                          const std::function<double(const Point&)>& g,
                                          Eigen::Vector2d weights = {1.0, 1.0}) {
  const QuadratureRule rule = triangle_rule(2 * space.degree() + 2);
  const int nv = space.velocity_dim();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(space.num_velocity_dofs());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.element(e);
    const double g0 = g(mesh.vertex(t[0])), g1 = g(mesh.vertex(t[1])), g2 = g(mesh.vertex(t[2]));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d& xi = rule.points[q];
      const double value = g0 * (1 - xi.x() - xi.y()) + g1 * xi.x() + g2 * xi.y();
      const Eigen::VectorXd phi = space.velocity_basis().values(xi);
      for (int c = 0; c < 2; ++c) {
        u.segment(space.velocity_dof(e, c, 0), nv) += rule.weights[q] * weights[c] * value * phi;
      }
    }
  }
  return u;
}

/// Number of (vertex, edge) pairs with the vertex strictly inside the edge;
/// zero for a conforming mesh. Quadratic cost, so small meshes only.
inline int count_hanging_vertices(const SimplicialMesh& mesh) {
  int hanging = 0;
  // Interior faces only: on the slit both sides carry coincident vertices,
  // and a vertex inside a boundary face would show up as extra perimeter.
  for (const Face& f : mesh.faces()) {
    if (f.is_boundary()) continue;
    const Point& a = mesh.vertex(f.vertices[0]);
    const Point& b = mesh.vertex(f.vertices[1]);
    const Point d = b - a;
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      if (v == f.vertices[0] || v == f.vertices[1]) continue;
      const Point r = mesh.vertex(v) - a;
      const double t = r.dot(d) / d.squaredNorm();
      const double off = std::abs(d.x() * r.y() - d.y() * r.x()) / d.norm();
      if (t > 1e-12 && t < 1 - 1e-12 && off < 1e-12 * d.norm()) ++hanging;
    }
  }
  return hanging;
}

inline double boundary_length(const SimplicialMesh& mesh) {
  double s = 0.0;
  for (const Face& f : mesh.faces()) {
    if (f.is_boundary()) s += f.length;
  }
  return s;
}

inline double total_area(const SimplicialMesh& mesh) {
  double s = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) s += mesh.area(e);
  return s;
}

}  // namespace stokes_afem::testing
