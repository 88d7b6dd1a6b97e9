#include "stokes_afem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>

#include "stokes_afem/error.hpp"

namespace stokes_afem {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) | lo;
}

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

bool on_slit(const Point& a, const Point& b) {
  return a.y() == 0.0 && b.y() == 0.0 && a.x() >= 0.0 && b.x() >= 0.0 && a.x() <= 1.0 &&
         b.x() <= 1.0;
}

// Rotate so that local vertex 0 sits opposite the longest edge; ties keep the
// earliest candidate.
std::array<int, 3> longest_edge_first(const std::vector<Point>& x, std::array<int, 3> t) {
  int best = 0;
  double best_len = -1.0;
  for (int i = 0; i < 3; ++i) {
    const double len = (x[t[(i + 1) % 3]] - x[t[(i + 2) % 3]]).squaredNorm();
    if (len > best_len * (1.0 + 1e-12)) {
      best = i;
      best_len = len;
    }
  }
  return {t[best], t[(best + 1) % 3], t[(best + 2) % 3]};
}

}  // namespace

DomainKind parse_domain_kind(std::string_view name) {
  if (name == "square") return DomainKind::Square;
  if (name == "lshape") return DomainKind::LShape;
  if (name == "slit") return DomainKind::Slit;
  throw Error(ErrorKind::InvalidArgument, "unknown domain kind '" + std::string(name) + "'");
}

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Square: return "square";
    case DomainKind::LShape: return "lshape";
    case DomainKind::Slit: return "slit";
  }
  return "unknown";
}

double domain_area(DomainKind kind) {
  switch (kind) {
    case DomainKind::Square: return 1.0;
    case DomainKind::LShape: return 3.0;
    case DomainKind::Slit: return 4.0;
  }
  return 0.0;
}

std::optional<Point> singular_point(DomainKind kind) {
  if (kind == DomainKind::Square) return std::nullopt;
  return Point(0.0, 0.0);
}

SimplicialMesh::SimplicialMesh(std::vector<Point> vertices,
                               std::vector<std::array<int, 3>> elements,
                               std::optional<DomainKind> kind, std::vector<int> generation)
    : vertices_(std::move(vertices)),
      elements_(std::move(elements)),
      generation_(std::move(generation)),
      kind_(kind) {
  if (generation_.empty()) generation_.assign(elements_.size(), 0);
  STOKES_AFEM_REQUIRE(generation_.size() == elements_.size(), Mesh,
                      "generation array does not match element count");
  areas_.resize(elements_.size());
  diameters_.resize(elements_.size());
  const int nv = num_vertices();
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const auto& t = elements_[e];
    for (int v : t) {
      STOKES_AFEM_REQUIRE(v >= 0 && v < nv, Mesh,
                          "element " + std::to_string(e) + " references invalid vertex");
    }
    const Point& a = vertices_[t[0]];
    const Point& b = vertices_[t[1]];
    const Point& c = vertices_[t[2]];
    areas_[e] = signed_area(a, b, c);
    STOKES_AFEM_REQUIRE(areas_[e] > 0.0, Mesh,
                        "element " + std::to_string(e) + " is not positively oriented");
    diameters_[e] = std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
  }
  build_faces();
}

void SimplicialMesh::build_faces() {
  faces_.clear();
  element_faces_.assign(elements_.size(), {-1, -1, -1});
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(elements_.size() * 2);

  for (int e = 0; e < num_elements(); ++e) {
    const auto& t = elements_[e];
    for (int i = 0; i < 3; ++i) {
      const int a = t[(i + 1) % 3];
      const int b = t[(i + 2) % 3];
      const auto [it, inserted] = lookup.try_emplace(edge_key(a, b), num_faces());
      if (inserted) {
        Face f;
        f.vertices = {a, b};
        f.elements = {e, -1};
        f.local = {i, -1};
        const Point d = vertices_[b] - vertices_[a];
        f.length = d.norm();
        f.normal = Point(d.y(), -d.x()) / f.length;
        faces_.push_back(f);
      } else {
        Face& f = faces_[it->second];
        if (f.elements[1] >= 0) {
          throw Error(ErrorKind::Mesh,
                      "non-manifold edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") shared by three or more elements");
        }
        if (f.vertices[0] != b || f.vertices[1] != a) {
          throw Error(ErrorKind::Mesh, "inconsistent orientation across edge (" +
                                           std::to_string(a) + "," + std::to_string(b) + ")");
        }
        f.elements[1] = e;
        f.local[1] = i;
      }
      element_faces_[e][i] = it->second;
    }
  }

  for (Face& f : faces_) {
    if (!f.is_boundary()) {
      f.tag = BoundaryTag::Interior;
    } else if (kind_ == DomainKind::Slit &&
               on_slit(vertices_[f.vertices[0]], vertices_[f.vertices[1]])) {
      f.tag = BoundaryTag::Slit;
    } else {
      f.tag = BoundaryTag::Outer;
    }
  }
}

double SimplicialMesh::max_diameter() const {
  return diameters_.empty() ? 0.0 : *std::max_element(diameters_.begin(), diameters_.end());
}

double SimplicialMesh::min_angle(int e) const {
  const auto& t = elements_[e];
  double result = std::numbers::pi;
  for (int i = 0; i < 3; ++i) {
    const Point u = vertices_[t[(i + 1) % 3]] - vertices_[t[i]];
    const Point w = vertices_[t[(i + 2) % 3]] - vertices_[t[i]];
    const double c = std::clamp(u.dot(w) / (u.norm() * w.norm()), -1.0, 1.0);
    result = std::min(result, std::acos(c));
  }
  return result;
}

Point SimplicialMesh::centroid(int e) const {
  const auto& t = elements_[e];
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

int SimplicialMesh::num_interior_faces() const {
  return static_cast<int>(
      std::count_if(faces_.begin(), faces_.end(), [](const Face& f) { return !f.is_boundary(); }));
}

int SimplicialMesh::num_boundary_faces() const { return num_faces() - num_interior_faces(); }

SimplicialMesh generate_domain(DomainKind kind, int n) {
  STOKES_AFEM_REQUIRE(n >= 1, InvalidArgument, "subdivisions per unit must be >= 1");

  // Grid nodes (i, j) map to (lo + i/n, lo + j/n).
  const int lo = kind == DomainKind::Square ? 0 : -1;
  const int cells = kind == DomainKind::Square ? n : 2 * n;
  auto coord = [&](int i) { return static_cast<double>(i + lo * n) / static_cast<double>(n); };

  std::vector<Point> vertices;
  std::map<std::pair<int, int>, int> node_id;
  std::map<std::pair<int, int>, int> lower_copy;
  auto node = [&](int i, int j, bool below_slit) {
    const double x = coord(i);
    const double y = coord(j);
    const bool duplicate = below_slit && y == 0.0 && x > 0.0 && x < 1.0;
    auto& table = duplicate ? lower_copy : node_id;
    auto [it, inserted] = table.try_emplace({i, j}, static_cast<int>(vertices.size()));
    if (inserted) vertices.emplace_back(x, y);
    return it->second;
  };

  // Register the shared grid nodes first so numbering is row-major over the
  // full grid, followed by the slit duplicates.
  for (int j = 0; j <= cells; ++j) {
    for (int i = 0; i <= cells; ++i) {
      const double x = coord(i);
      const double y = coord(j);
      if (kind == DomainKind::LShape && x > 0.0 && y < 0.0) continue;
      node(i, j, false);
    }
  }

  std::vector<std::array<int, 3>> elements;
  elements.reserve(static_cast<std::size_t>(2 * cells * cells));
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      const double cx = 0.5 * (coord(i) + coord(i + 1));
      const double cy = 0.5 * (coord(j) + coord(j + 1));
      if (kind == DomainKind::LShape && cx > 0.0 && cy < 0.0) continue;
      const bool below = kind == DomainKind::Slit && cy < 0.0;
      const int a = node(i, j, below);
      const int b = node(i + 1, j, below);
      const int c = node(i + 1, j + 1, below);
      const int d = node(i, j + 1, below);
      elements.push_back(longest_edge_first(vertices, {a, b, c}));
      elements.push_back(longest_edge_first(vertices, {a, c, d}));
    }
  }
  return SimplicialMesh(std::move(vertices), std::move(elements), kind);
}

SimplicialMesh bisect(const SimplicialMesh& mesh, std::span<const int> marked,
                      std::vector<int>* parent) {
  const int ne = mesh.num_elements();
  std::vector<char> edge_marked(mesh.num_faces(), 0);
  for (int e : marked) {
    STOKES_AFEM_REQUIRE(e >= 0 && e < ne, InvalidArgument,
                        "marked element " + std::to_string(e) + " out of range");
    edge_marked[mesh.element_faces(e)[0]] = 1;
  }

  // Conformity closure: an element with any marked edge must have its
  // refinement edge marked as well.
  const int max_sweeps = ne + 2;
  for (int sweep = 0;; ++sweep) {
    if (sweep > max_sweeps) {
      throw Error(ErrorKind::Mesh, "bisection closure did not terminate");
    }
    bool changed = false;
    for (int e = 0; e < ne; ++e) {
      const auto& ef = mesh.element_faces(e);
      if (!edge_marked[ef[0]] && (edge_marked[ef[1]] || edge_marked[ef[2]])) {
        edge_marked[ef[0]] = 1;
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::vector<Point> vertices = mesh.vertices();
  std::unordered_map<std::uint64_t, int> midpoint;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (!edge_marked[f]) continue;
    const auto& v = mesh.face(f).vertices;
    midpoint.emplace(edge_key(v[0], v[1]), static_cast<int>(vertices.size()));
    vertices.push_back(0.5 * (mesh.vertex(v[0]) + mesh.vertex(v[1])));
  }

  std::vector<std::array<int, 3>> elements;
  std::vector<int> generation;
  std::vector<int> origin;
  elements.reserve(static_cast<std::size_t>(ne) + 2 * midpoint.size());

  // Children of [v0, v1, v2] with refinement edge (v1, v2) and midpoint m are
  // [m, v0, v1] and [m, v2, v0]; both stay counterclockwise.
  struct Pending {
    std::array<int, 3> tri;
    int gen;
  };
  std::vector<Pending> stack;
  for (int e = 0; e < ne; ++e) {
    stack.push_back({mesh.element(e), mesh.generation(e)});
    while (!stack.empty()) {
      const Pending cur = stack.back();
      stack.pop_back();
      const auto& t = cur.tri;
      const auto it = midpoint.find(edge_key(t[1], t[2]));
      if (it == midpoint.end()) {
        elements.push_back(t);
        generation.push_back(cur.gen);
        origin.push_back(e);
        continue;
      }
      const int m = it->second;
      // Push in reverse so the first child is emitted first.
      stack.push_back({{m, t[2], t[0]}, cur.gen + 1});
      stack.push_back({{m, t[0], t[1]}, cur.gen + 1});
    }
  }

  if (parent) *parent = std::move(origin);
  return SimplicialMesh(std::move(vertices), std::move(elements), mesh.kind(),
                        std::move(generation));
}

}  // namespace stokes_afem
