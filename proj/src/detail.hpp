#pragma once

// Internal helpers shared by assembly, estimation and error evaluation.

#include <vector>

#include <Eigen/Core>

#include "stokes_afem/basis.hpp"
#include "stokes_afem/mesh.hpp"
#include "stokes_afem/quadrature.hpp"

namespace stokes_afem::detail {

/// Physical quadrature points and weights (already scaled by |E|) of a face,
/// ordered from face.vertices[0] to face.vertices[1].
struct FacePoints {
  std::vector<Point> x;
  std::vector<double> w;
};

inline FacePoints face_points(const SimplicialMesh& mesh, const Face& f,
                              const QuadratureRule& segment) {
  FacePoints fp;
  const Point& a = mesh.vertex(f.vertices[0]);
  const Point& b = mesh.vertex(f.vertices[1]);
  fp.x.reserve(segment.size());
  fp.w.reserve(segment.size());
  for (std::size_t q = 0; q < segment.size(); ++q) {
    const double t = segment.points[q].x();
    fp.x.push_back(a + t * (b - a));
    fp.w.push_back(segment.weights[q] * f.length);
  }
  return fp;
}

/// Side of element e on face f: 0 for plus, 1 for minus.
inline int side_of(const Face& f, int e) { return f.elements[0] == e ? 0 : 1; }

/// Local polynomial data of a broken velocity/pressure pair on one element.
struct LocalFields {
  Eigen::VectorXd ux, uy, p;
};

}  // namespace stokes_afem::detail
