#include "stokes_afem/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail.hpp"
#include "stokes_afem/error.hpp"
#include "stokes_afem/parallel.hpp"
#include "stokes_afem/quadrature.hpp"

namespace stokes_afem {

namespace {

struct Trace {
  Eigen::Vector2d u;
  Eigen::Matrix2d grad;  // grad(i, j) = d_j u_i
  double p = 0.0;
};

// Velocity, velocity gradient and pressure of element e at physical point x.
Trace trace_at(const SimplicialMesh& mesh, const BrokenSpaceLayout& space, int e,
               const Eigen::VectorXd& u, const Eigen::VectorXd& p, const Point& x) {
  const ElementMap map(mesh, e);
  const Eigen::Vector2d xi = map.to_reference(x);
  const int nv = space.velocity_dim();
  const auto ux = u.segment(space.velocity_offset(e), nv);
  const auto uy = u.segment(space.velocity_offset(e) + nv, nv);
  const Eigen::VectorXd phi = space.velocity_basis().values(xi);
  const Eigen::MatrixXd g = map.push_gradients(space.velocity_basis().gradients(xi));
  Trace t;
  t.u = {phi.dot(ux), phi.dot(uy)};
  t.grad.row(0) = ux.transpose() * g;
  t.grad.row(1) = uy.transpose() * g;
  if (p.size() > 0) {
    t.p = space.pressure_basis().values(xi).dot(p.segment(space.pressure_offset(e),
                                                          space.pressure_dim()));
  }
  return t;
}

int volume_order(const BrokenSpaceLayout& space, const EstimatorOptions& o) {
  return o.volume_order >= 0 ? o.volume_order : 2 * space.degree();
}

int face_order(const BrokenSpaceLayout& space, const EstimatorOptions& o) {
  return o.face_order >= 0 ? o.face_order : 2 * space.degree() + 1;
}

}  // namespace

double IndicatorField::eta_h() const { return std::sqrt(eta2_total); }

int IndicatorField::argmax() const {
  if (eta2.empty()) return -1;
  return static_cast<int>(std::max_element(eta2.begin(), eta2.end()) - eta2.begin());
}

double element_residual(const SimplicialMesh& mesh, const BrokenSpaceLayout& space, int e,
                        double lambda, const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                        const EstimatorOptions& options) {
  const QuadratureRule rule = triangle_rule(volume_order(space, options));
  const ElementMap map(mesh, e);
  const double jac = std::abs(map.det);
  const int nv = space.velocity_dim();
  const int np = space.pressure_dim();
  const auto ux = u.segment(space.velocity_offset(e), nv);
  const auto uy = u.segment(space.velocity_offset(e) + nv, nv);
  const auto pe = p.segment(space.pressure_offset(e), np);

  double strong = 0.0;
  double divergence = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Eigen::Vector2d& xi = rule.points[q];
    const double w = rule.weights[q] * jac;
    const Eigen::VectorXd phi = space.velocity_basis().values(xi);
    const Eigen::MatrixXd g = map.push_gradients(space.velocity_basis().gradients(xi));
    const Eigen::VectorXd lap = map.push_laplacians(space.velocity_basis().hessians(xi));
    const Eigen::MatrixXd gp = map.push_gradients(space.pressure_basis().gradients(xi));
    const Eigen::Vector2d grad_p = gp.transpose() * pe;
    const Eigen::Vector2d r(lambda * phi.dot(ux) + lap.dot(ux) - grad_p.x(),
                            lambda * phi.dot(uy) + lap.dot(uy) - grad_p.y());
    const double d = g.col(0).dot(ux) + g.col(1).dot(uy);
    strong += w * r.squaredNorm();
    divergence += w * d * d;
  }
  const double h = mesh.diameter(e);
  return h * h * strong + divergence;
}

double face_residual(const SimplicialMesh& mesh, const BrokenSpaceLayout& space, int e,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                     const EstimatorOptions& options) {
  const QuadratureRule segment = segment_rule(face_order(space, options));
  double sum = 0.0;
  for (int fid : mesh.element_faces(e)) {
    const Face& f = mesh.face(fid);
    if (f.is_boundary()) continue;
    const detail::FacePoints fp = detail::face_points(mesh, f, segment);
    double integral = 0.0;
    for (std::size_t q = 0; q < fp.x.size(); ++q) {
      const Trace plus = trace_at(mesh, space, f.elements[0], u, p, fp.x[q]);
      const Trace minus = trace_at(mesh, space, f.elements[1], u, p, fp.x[q]);
      // [[tau]] = (tau+ - tau-) n+ with tau = p I - grad u.
      const Eigen::Vector2d jump =
          (plus.p - minus.p) * f.normal - (plus.grad - minus.grad) * f.normal;
      integral += fp.w[q] * jump.squaredNorm();
    }
    sum += 0.5 * f.length * integral;
  }
  return sum;
}

JumpParts jump_indicator(const SimplicialMesh& mesh, const BrokenSpaceLayout& space, int e,
                         const Eigen::VectorXd& u, const EstimatorOptions& options) {
  const QuadratureRule segment = segment_rule(face_order(space, options));
  const Eigen::VectorXd no_pressure;
  JumpParts parts;
  for (int fid : mesh.element_faces(e)) {
    const Face& f = mesh.face(fid);
    const detail::FacePoints fp = detail::face_points(mesh, f, segment);
    double integral = 0.0;
    for (std::size_t q = 0; q < fp.x.size(); ++q) {
      Eigen::Vector2d jump = trace_at(mesh, space, f.elements[0], u, no_pressure, fp.x[q]).u;
      if (!f.is_boundary()) {
        jump -= trace_at(mesh, space, f.elements[1], u, no_pressure, fp.x[q]).u;
      }
      // |a (x) n|^2 = |a|^2 for a unit normal.
      integral += fp.w[q] * jump.squaredNorm();
    }
    const double value = options.gamma / f.length * integral;
    if (f.is_boundary()) {
      parts.boundary += value;
    } else {
      parts.interior += options.half_interior_jump ? 0.5 * value : value;
    }
  }
  return parts;
}

IndicatorField estimate(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                        double lambda, const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                        const EstimatorOptions& options) {
  STOKES_AFEM_REQUIRE(space.matches(mesh), InvalidArgument,
                      "layout was built for a different mesh");
  STOKES_AFEM_REQUIRE(u.size() == space.num_velocity_dofs() &&
                          p.size() == space.num_pressure_dofs(),
                      InvalidArgument, "discrete fields do not match the layout");
  const int ne = mesh.num_elements();
  IndicatorField field;
  field.eta2_R.assign(ne, 0.0);
  field.eta2_E.assign(ne, 0.0);
  field.eta2_J.assign(ne, 0.0);
  field.eta2_J_boundary.assign(ne, 0.0);
  field.eta2.assign(ne, 0.0);
  parallel_for(ne, resolve_threads(options.threads), [&](int begin, int end) {
    for (int e = begin; e < end; ++e) {
      field.eta2_R[e] = element_residual(mesh, space, e, lambda, u, p, options);
      field.eta2_E[e] = face_residual(mesh, space, e, u, p, options);
      const JumpParts jp = jump_indicator(mesh, space, e, u, options);
      field.eta2_J[e] = jp.total();
      field.eta2_J_boundary[e] = jp.boundary;
      field.eta2[e] = field.eta2_R[e] + field.eta2_E[e] + field.eta2_J[e];
    }
  });
  field.eta2_total = std::accumulate(field.eta2.begin(), field.eta2.end(), 0.0);
  return field;
}

IndicatorField sum_indicators(const std::vector<IndicatorField>& fields) {
  STOKES_AFEM_REQUIRE(!fields.empty(), InvalidArgument, "no indicator fields to combine");
  IndicatorField out = fields.front();
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const IndicatorField& f = fields[i];
    STOKES_AFEM_REQUIRE(f.size() == out.size(), InvalidArgument, "indicator sizes differ");
    for (int e = 0; e < out.size(); ++e) {
      out.eta2_R[e] += f.eta2_R[e];
      out.eta2_E[e] += f.eta2_E[e];
      out.eta2_J[e] += f.eta2_J[e];
      out.eta2_J_boundary[e] += f.eta2_J_boundary[e];
      out.eta2[e] = out.eta2_R[e] + out.eta2_E[e] + out.eta2_J[e];
    }
  }
  out.eta2_total = std::accumulate(out.eta2.begin(), out.eta2.end(), 0.0);
  return out;
}

}  // namespace stokes_afem
