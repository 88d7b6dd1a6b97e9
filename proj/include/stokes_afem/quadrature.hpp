#pragma once

#include <vector>

#include <Eigen/Core>

namespace stokes_afem {

/// Quadrature on the reference triangle {x, y >= 0, x + y <= 1} or the unit
/// segment [0, 1]. For segments only the x coordinate of each point is used.
struct QuadratureRule {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  int order = 0;

  std::size_t size() const { return weights.size(); }
};

/// Highest order either rule family supports.
inline constexpr int kMaxQuadratureOrder = 40;

/// Rule exact for polynomials of total degree <= order on the reference
/// triangle. Orders 0-1 return the centroid rule, order 2 the three-point
/// edge-midpoint rule, higher orders a collapsed Gauss-Legendre product rule.
QuadratureRule triangle_rule(int order);

/// Gauss-Legendre rule on [0, 1] exact to the given order.
QuadratureRule segment_rule(int order);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace stokes_afem
