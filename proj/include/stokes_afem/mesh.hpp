#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace stokes_afem {

using Point = Eigen::Vector2d;

/// The three test domains: unit square (0,1)^2, L-shape (-1,1)^2 minus the
/// lower-right quadrant, and the square (-1,1)^2 cut along {0 <= x <= 1, y = 0}.
enum class DomainKind { Square, LShape, Slit };

DomainKind parse_domain_kind(std::string_view name);
std::string_view to_string(DomainKind kind);
double domain_area(DomainKind kind);
/// Location of the singular boundary point (reentrant corner or slit tip).
/// The square has none.
std::optional<Point> singular_point(DomainKind kind);

enum class BoundaryTag { Interior, Outer, Slit };

/// Mesh edge. `elements[0]` is the "plus" element (lower index), `elements[1]`
/// the "minus" element or -1 on the boundary. `normal` points from plus to
/// minus, outward on the boundary. `vertices` are ordered counterclockwise
/// with respect to the plus element.
struct Face {
  std::array<int, 2> vertices{};
  std::array<int, 2> elements{-1, -1};
  std::array<int, 2> local{-1, -1};
  double length = 0.0;
  Point normal = Point::Zero();
  BoundaryTag tag = BoundaryTag::Interior;

  bool is_boundary() const { return elements[1] < 0; }
};

/// Conforming triangulation with face topology and newest-vertex bookkeeping.
///
/// Elements are counterclockwise vertex triples. Local edge i is the edge
/// opposite local vertex i; vertex 0 is the newest vertex, so local edge 0 is
/// the refinement edge. Immutable after construction.
class SimplicialMesh {
public:
  SimplicialMesh(std::vector<Point> vertices,
                 std::vector<std::array<int, 3>> elements,
                 std::optional<DomainKind> kind = std::nullopt,
                 std::vector<int> generation = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  const Point& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& element(int e) const { return elements_[e]; }
  const Face& face(int f) const { return faces_[f]; }
  /// Face ids of the three local edges of element e.
  const std::array<int, 3>& element_faces(int e) const { return element_faces_[e]; }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& elements() const { return elements_; }
  const std::vector<Face>& faces() const { return faces_; }

  double area(int e) const { return areas_[e]; }
  /// Longest edge of element e.
  double diameter(int e) const { return diameters_[e]; }
  double max_diameter() const;
  double min_angle(int e) const;
  Point centroid(int e) const;
  int generation(int e) const { return generation_[e]; }
  std::optional<DomainKind> kind() const { return kind_; }

  int num_interior_faces() const;
  int num_boundary_faces() const;

private:
  void build_faces();

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<int> generation_;
  std::optional<DomainKind> kind_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> element_faces_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
};

/// Uniform triangulation with grid step 1/n, each grid cell split along its
/// (+1,+1) diagonal. Slit vertices strictly inside the slit are duplicated so
/// that both sides of the slit are boundary.
SimplicialMesh generate_domain(DomainKind kind, int n);

/// Newest-vertex bisection of the marked elements plus the conformity closure.
/// If `parent` is non-null it receives, for every element of the result, the
/// index of the element of `mesh` containing it.
SimplicialMesh bisect(const SimplicialMesh& mesh, std::span<const int> marked,
                      std::vector<int>* parent = nullptr);

}  // namespace stokes_afem
