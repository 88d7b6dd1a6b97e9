#include "stokes_afem/assembly.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "detail.hpp"
#include "stokes_afem/error.hpp"
#include "stokes_afem/parallel.hpp"
#include "stokes_afem/quadrature.hpp"

namespace stokes_afem {

namespace {

// Rows of A and B owned by one element. A is block diagonal in the velocity
// components, so only the scalar block is stored.
struct ElementRows {
  Eigen::MatrixXd a_diag;
  std::array<Eigen::MatrixXd, 3> a_off;
  Eigen::MatrixXd b_diag;
  std::array<Eigen::MatrixXd, 3> b_off;
  std::array<int, 3> neighbor{-1, -1, -1};
};

// Face and volume terms are written as explicit loops with commutative inner
// products so that entry (i, j) and entry (j, i) are computed from identical
// floating point operations; A is then bit-for-bit symmetric.
ElementRows element_rows(const SimplicialMesh& mesh, const BrokenSpaceLayout& space, double gamma,
                         const QuadratureRule& volume, const QuadratureRule& segment, int e) {
  const ReferenceBasis& vb = space.velocity_basis();
  const ReferenceBasis& pb = space.pressure_basis();
  const int nv = vb.dim();
  const int np = pb.dim();
  const ElementMap map(mesh, e);
  const double jac = std::abs(map.det);

  ElementRows rows;
  rows.a_diag = Eigen::MatrixXd::Zero(nv, nv);
  rows.b_diag = Eigen::MatrixXd::Zero(np, 2 * nv);

  Eigen::MatrixXd rg(nv, 2);
  Eigen::VectorXd psi(np);
  for (std::size_t q = 0; q < volume.size(); ++q) {
    const double w = volume.weights[q] * jac;
    vb.gradients(volume.points[q], rg);
    const Eigen::MatrixXd g = map.push_gradients(rg);
    pb.values(volume.points[q], psi);
    for (int i = 0; i < nv; ++i) {
      for (int j = 0; j < nv; ++j) {
        rows.a_diag(i, j) += w * (g(i, 0) * g(j, 0) + g(i, 1) * g(j, 1));
      }
    }
    for (int i = 0; i < np; ++i) {
      for (int c = 0; c < 2; ++c) {
        for (int j = 0; j < nv; ++j) rows.b_diag(i, c * nv + j) -= w * (psi[i] * g(j, c));
      }
    }
  }

  Eigen::VectorXd phi_s(nv), phi_t(nv), dn_s(nv), dn_t(nv);
  for (int lf = 0; lf < 3; ++lf) {
    const Face& face = mesh.face(mesh.element_faces(e)[lf]);
    const int s = detail::side_of(face, e);
    const bool interior = !face.is_boundary();
    const double sigma_s = s == 0 ? 1.0 : -1.0;
    const double sigma_t = -sigma_s;
    const double omega = interior ? 0.5 : 1.0;
    const double pen = gamma / face.length;
    const Point& n = face.normal;
    const int other = interior ? face.elements[1 - s] : -1;
    rows.neighbor[lf] = other;
    if (interior) {
      rows.a_off[lf] = Eigen::MatrixXd::Zero(nv, nv);
      rows.b_off[lf] = Eigen::MatrixXd::Zero(np, 2 * nv);
    }
    const ElementMap other_map = interior ? ElementMap(mesh, other) : ElementMap();

    const detail::FacePoints fp = detail::face_points(mesh, face, segment);
    for (std::size_t q = 0; q < fp.x.size(); ++q) {
      const double w = fp.w[q];
      const Eigen::Vector2d xi = map.to_reference(fp.x[q]);
      vb.values(xi, phi_s);
      vb.gradients(xi, rg);
      dn_s = map.push_gradients(rg) * n;
      pb.values(xi, psi);

      // (s, s) block: -{grad u}:[[v]] - {grad v}:[[u]] + pen [[u]]:[[v]]
      for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nv; ++j) {
          const double t1 = -omega * sigma_s * (w * (dn_s[j] * phi_s[i]));
          const double t2 = -omega * sigma_s * (w * (dn_s[i] * phi_s[j]));
          const double pp = pen * (w * (phi_s[i] * phi_s[j]));
          rows.a_diag(i, j) += (t1 + t2) + pp;
        }
      }
      // B rows of this element: {q}[[v]] with [[v]] = sum_t sigma_t v^t . n
      for (int i = 0; i < np; ++i) {
        for (int c = 0; c < 2; ++c) {
          for (int j = 0; j < nv; ++j) {
            rows.b_diag(i, c * nv + j) += omega * sigma_s * (w * (psi[i] * phi_s[j])) * n[c];
          }
        }
      }
      if (!interior) continue;

      const Eigen::Vector2d xi_t = other_map.to_reference(fp.x[q]);
      vb.values(xi_t, phi_t);
      vb.gradients(xi_t, rg);
      dn_t = other_map.push_gradients(rg) * n;
      for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nv; ++j) {
          const double t1 = -omega * sigma_s * (w * (dn_t[j] * phi_s[i]));
          const double t2 = -omega * sigma_t * (w * (dn_s[i] * phi_t[j]));
          const double pp = -pen * (w * (phi_s[i] * phi_t[j]));
          rows.a_off[lf](i, j) += (t1 + t2) + pp;
        }
      }
      for (int i = 0; i < np; ++i) {
        for (int c = 0; c < 2; ++c) {
          for (int j = 0; j < nv; ++j) {
            rows.b_off[lf](i, c * nv + j) += omega * sigma_t * (w * (psi[i] * phi_t[j])) * n[c];
          }
        }
      }
    }
  }
  return rows;
}

}  // namespace

AssembledSystem AssembledSystem::scaled(double mu) const {
  AssembledSystem out = *this;
  out.A *= mu;
  out.B *= mu;
  return out;
}

AssembledSystem assemble(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                         const AssemblyOptions& options) {
  STOKES_AFEM_REQUIRE(space.matches(mesh), InvalidArgument,
                      "layout was built for a different mesh");
  STOKES_AFEM_REQUIRE(options.gamma_c1 > 0.0, InvalidArgument, "penalty constant must be > 0");
  const int k = space.degree();
  const int nv = space.velocity_dim();
  const int np = space.pressure_dim();
  const int ne = mesh.num_elements();

  AssembledSystem sys;
  sys.degree = k;
  sys.gamma_c1 = options.gamma_c1;
  sys.gamma = options.gamma_c1 * k * k;

  const QuadratureRule volume = triangle_rule(2 * k);
  const QuadratureRule segment = segment_rule(2 * k + 1);

  std::vector<ElementRows> rows(ne);
  parallel_for(ne, resolve_threads(options.threads), [&](int begin, int end) {
    for (int e = begin; e < end; ++e) {
      rows[e] = element_rows(mesh, space, sys.gamma, volume, segment, e);
    }
  });

  const int nu = space.num_velocity_dofs();
  const int npd = space.num_pressure_dofs();
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(nu, nu);
  Eigen::SparseMatrix<double, Eigen::RowMajor> b(npd, nu);
  {
    Eigen::VectorXi a_nnz(nu);
    Eigen::VectorXi b_nnz(npd);
    for (int e = 0; e < ne; ++e) {
      const int blocks = 1 + static_cast<int>(std::count_if(
                                 rows[e].neighbor.begin(), rows[e].neighbor.end(),
                                 [](int x) { return x >= 0; }));
      a_nnz.segment(space.velocity_offset(e), 2 * nv).setConstant(blocks * nv);
      b_nnz.segment(space.pressure_offset(e), np).setConstant(blocks * 2 * nv);
    }
    a.reserve(a_nnz);
    b.reserve(b_nnz);
  }

  for (int e = 0; e < ne; ++e) {
    const ElementRows& r = rows[e];
    // Column blocks in ascending element order.
    std::vector<std::pair<int, int>> order{{e, -1}};
    for (int lf = 0; lf < 3; ++lf) {
      if (r.neighbor[lf] >= 0) order.emplace_back(r.neighbor[lf], lf);
    }
    std::sort(order.begin(), order.end());
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < nv; ++i) {
        const int row = space.velocity_dof(e, c, i);
        for (const auto& [col_el, lf] : order) {
          const Eigen::MatrixXd& blk = lf < 0 ? r.a_diag : r.a_off[lf];
          for (int j = 0; j < nv; ++j) a.insert(row, space.velocity_dof(col_el, c, j)) = blk(i, j);
        }
      }
    }
    for (int i = 0; i < np; ++i) {
      const int row = space.pressure_dof(e, i);
      for (const auto& [col_el, lf] : order) {
        const Eigen::MatrixXd& blk = lf < 0 ? r.b_diag : r.b_off[lf];
        for (int j = 0; j < 2 * nv; ++j) b.insert(row, space.velocity_offset(col_el) + j) = blk(i, j);
      }
    }
  }
  rows.clear();
  rows.shrink_to_fit();
  a.makeCompressed();
  b.makeCompressed();
  sys.A = a;
  sys.B = b;

  sys.mass_diagonal.resize(nu);
  sys.pressure_mean = Eigen::VectorXd::Zero(npd);
  const QuadratureRule pq = triangle_rule(std::max(k - 1, 0));
  Eigen::VectorXd psi(np);
  for (int e = 0; e < ne; ++e) {
    const double jac = 2.0 * mesh.area(e);
    sys.mass_diagonal.segment(space.velocity_offset(e), 2 * nv).setConstant(jac);
    for (std::size_t q = 0; q < pq.size(); ++q) {
      space.pressure_basis().values(pq.points[q], psi);
      sys.pressure_mean.segment(space.pressure_offset(e), np) += pq.weights[q] * jac * psi;
    }
  }
  sys.M = SparseMatrix(nu, nu);
  std::vector<Eigen::Triplet<double>> diag;
  diag.reserve(nu);
  for (int i = 0; i < nu; ++i) diag.emplace_back(i, i, sys.mass_diagonal[i]);
  sys.M.setFromTriplets(diag.begin(), diag.end());
  return sys;
}

Eigen::VectorXd assemble_load(const VectorField& f, const SimplicialMesh& mesh,
                              const BrokenSpaceLayout& space, int order) {
  STOKES_AFEM_REQUIRE(space.matches(mesh), InvalidArgument,
                      "layout was built for a different mesh");
  const int k = space.degree();
  const int nv = space.velocity_dim();
  const QuadratureRule rule = triangle_rule(order < 0 ? 2 * k + 2 : order);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(space.num_velocity_dofs());
  Eigen::VectorXd phi(nv);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementMap map(mesh, e);
    const double jac = std::abs(map.det);
    auto blk = load.segment(space.velocity_offset(e), 2 * nv);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.velocity_basis().values(rule.points[q], phi);
      const Eigen::Vector2d fv = f(map.to_physical(rule.points[q]));
      const double w = rule.weights[q] * jac;
      blk.head(nv) += (w * fv.x()) * phi;
      blk.tail(nv) += (w * fv.y()) * phi;
    }
  }
  return load;
}

Eigen::VectorXd constant_pressure(const BrokenSpaceLayout& space) {
  // The first pressure basis function is the constant sqrt(2).
  Eigen::VectorXd q = Eigen::VectorXd::Zero(space.num_pressure_dofs());
  for (int e = 0; e < space.num_elements(); ++e) q[space.pressure_dof(e, 0)] = 1.0 / std::sqrt(2.0);
  return q;
}

Eigen::VectorXd project_velocity(const VectorField& f, const SimplicialMesh& mesh,
                                 const BrokenSpaceLayout& space, int order) {
  Eigen::VectorXd coeffs = assemble_load(f, mesh, space, order);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    coeffs.segment(space.velocity_offset(e), space.velocity_block()) /= 2.0 * mesh.area(e);
  }
  return coeffs;
}

Eigen::VectorXd project_pressure(const std::function<double(const Point&)>& p,
                                 const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                                 int order) {
  STOKES_AFEM_REQUIRE(space.matches(mesh), InvalidArgument,
                      "layout was built for a different mesh");
  const int np = space.pressure_dim();
  const QuadratureRule rule = triangle_rule(order < 0 ? 2 * space.degree() + 2 : order);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(space.num_pressure_dofs());
  Eigen::VectorXd psi(np);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementMap map(mesh, e);
    auto blk = coeffs.segment(space.pressure_offset(e), np);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      space.pressure_basis().values(rule.points[q], psi);
      // Orthonormal basis: the reference weight alone gives the coefficient.
      blk += (rule.weights[q] * p(map.to_physical(rule.points[q]))) * psi;
    }
  }
  return coeffs;
}

}  // namespace stokes_afem
