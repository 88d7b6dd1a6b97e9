#include "stokes_afem/verify.hpp"

#include <array>
#include <cmath>
#include <string>

#include "detail.hpp"
#include "stokes_afem/error.hpp"
#include "stokes_afem/quadrature.hpp"

namespace stokes_afem {

namespace {

// a(t) = t^2 (1 - t)^2 and its first three derivatives.
std::array<double, 4> bump(double t) {
  const double s = 1.0 - t;
  return {t * t * s * s, 2.0 * t * s * (1.0 - 2.0 * t), 2.0 * (1.0 - 6.0 * t + 6.0 * t * t),
          12.0 * (2.0 * t - 1.0)};
}

ManufacturedCase make_ms1() {
  ManufacturedCase c;
  c.name = "MS1";
  c.domain = DomainKind::Square;
  // psi = a(x) b(y), u = (psi_y, -psi_x)
  c.velocity = [](const Point& x) {
    const auto a = bump(x.x());
    const auto b = bump(x.y());
    return Eigen::Vector2d(a[0] * b[1], -a[1] * b[0]);
  };
  c.velocity_gradient = [](const Point& x) {
    const auto a = bump(x.x());
    const auto b = bump(x.y());
    Eigen::Matrix2d g;
    g << a[1] * b[1], a[0] * b[2], -a[2] * b[0], -a[1] * b[1];
    return g;
  };
  c.pressure = [](const Point& x) { return x.x() * x.y() - 0.25; };
  c.pressure_gradient = [](const Point& x) { return Eigen::Vector2d(x.y(), x.x()); };
  c.forcing = [](const Point& x) {
    const auto a = bump(x.x());
    const auto b = bump(x.y());
    const double lap1 = a[2] * b[1] + a[0] * b[3];
    const double lap2 = -(a[3] * b[0] + a[1] * b[2]);
    return Eigen::Vector2d(-lap1 + x.y(), -lap2 + x.x());
  };
  return c;
}

constexpr std::array<ReferenceValue, 3> kReferences{{
    {DomainKind::Square, "lambda_S", 52.344691168, "Gedicke et al. (2019), unit square"},
    {DomainKind::LShape, "lambda_L", 32.13269465, "Gedicke et al. (2019), L-shaped domain"},
    {DomainKind::Slit, "lambda_C", 29.9168629, "Gedicke et al. (2019), slit domain"},
}};

int exact_order(const BrokenSpaceLayout& space, int order) {
  return order < 0 ? 2 * space.degree() + 4 : order;
}

}  // namespace

ManufacturedCase manufactured_case(std::string_view name) {
  if (name == "MS1" || name == "ms1") return make_ms1();
  throw Error(ErrorKind::InvalidArgument, "unknown manufactured case '" + std::string(name) + "'");
}

std::span<const ReferenceValue> ReferenceRegistry::entries() { return kReferences; }

std::optional<ReferenceValue> ReferenceRegistry::find(DomainKind domain) {
  for (const ReferenceValue& r : kReferences) {
    if (r.domain == domain) return r;
  }
  return std::nullopt;
}

double dg_norm(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
               const Eigen::VectorXd& v, double gamma) {
  STOKES_AFEM_REQUIRE(space.matches(mesh) && v.size() == space.num_velocity_dofs(),
                      InvalidArgument, "velocity does not match the layout");
  const int k = space.degree();
  const int nv = space.velocity_dim();
  const QuadratureRule volume = triangle_rule(2 * k);
  const QuadratureRule segment = segment_rule(2 * k + 1);
  const ReferenceBasis& vb = space.velocity_basis();

  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementMap map(mesh, e);
    const auto vx = v.segment(space.velocity_offset(e), nv);
    const auto vy = v.segment(space.velocity_offset(e) + nv, nv);
    for (std::size_t q = 0; q < volume.size(); ++q) {
      const Eigen::MatrixXd g = map.push_gradients(vb.gradients(volume.points[q]));
      const Eigen::RowVector2d gx = vx.transpose() * g;
      const Eigen::RowVector2d gy = vy.transpose() * g;
      sum += volume.weights[q] * std::abs(map.det) * (gx.squaredNorm() + gy.squaredNorm());
    }
  }
  auto trace = [&](int e, const Point& x) {
    const ElementMap map(mesh, e);
    const Eigen::VectorXd phi = vb.values(map.to_reference(x));
    return Eigen::Vector2d(phi.dot(v.segment(space.velocity_offset(e), nv)),
                           phi.dot(v.segment(space.velocity_offset(e) + nv, nv)));
  };
  for (const Face& f : mesh.faces()) {
    const detail::FacePoints fp = detail::face_points(mesh, f, segment);
    double jump2 = 0.0;
    for (std::size_t q = 0; q < fp.x.size(); ++q) {
      Eigen::Vector2d j = trace(f.elements[0], fp.x[q]);
      if (!f.is_boundary()) j -= trace(f.elements[1], fp.x[q]);
      jump2 += fp.w[q] * j.squaredNorm();
    }
    sum += gamma / f.length * jump2;
  }
  return std::sqrt(sum);
}

DgError dg_error(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                 const Eigen::VectorXd& u, const Eigen::VectorXd& p, const ManufacturedCase& exact,
                 double gamma, int order) {
  STOKES_AFEM_REQUIRE(space.matches(mesh), InvalidArgument,
                      "layout was built for a different mesh");
  STOKES_AFEM_REQUIRE(u.size() == space.num_velocity_dofs() &&
                          p.size() == space.num_pressure_dofs(),
                      InvalidArgument, "discrete fields do not match the layout");
  const QuadratureRule rule = triangle_rule(exact_order(space, order));
  const ReferenceBasis& vb = space.velocity_basis();
  const ReferenceBasis& pb = space.pressure_basis();
  const int nv = space.velocity_dim();
  const int np = space.pressure_dim();

  double grad2 = 0.0;
  double l2 = 0.0;
  double dp_mean = 0.0;
  double dp2 = 0.0;
  double area = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementMap map(mesh, e);
    const double jac = std::abs(map.det);
    const auto ux = u.segment(space.velocity_offset(e), nv);
    const auto uy = u.segment(space.velocity_offset(e) + nv, nv);
    const auto pe = p.segment(space.pressure_offset(e), np);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point& xi = rule.points[q];
      const Point x = map.to_physical(xi);
      const double w = rule.weights[q] * jac;
      const Eigen::VectorXd phi = vb.values(xi);
      const Eigen::MatrixXd g = map.push_gradients(vb.gradients(xi));
      Eigen::Matrix2d gh;
      gh.row(0) = ux.transpose() * g;
      gh.row(1) = uy.transpose() * g;
      const Eigen::Vector2d uh(phi.dot(ux), phi.dot(uy));
      grad2 += w * (exact.velocity_gradient(x) - gh).squaredNorm();
      l2 += w * (exact.velocity(x) - uh).squaredNorm();
      const double dp = exact.pressure(x) - pb.values(xi).dot(pe);
      dp_mean += w * dp;
      dp2 += w * dp * dp;
      area += w;
    }
  }
  DgError out;
  // The exact velocity has no jumps, so only the jumps of u_h remain.
  const double jumps = [&] {
    const double full = dg_norm(mesh, space, u, gamma);
    const double broken = dg_norm(mesh, space, u, 0.0);
    return full * full - broken * broken;
  }();
  out.velocity_dg = std::sqrt(grad2 + std::max(jumps, 0.0));
  out.velocity_l2 = std::sqrt(l2);
  out.pressure_l2 = std::sqrt(std::max(dp2 - dp_mean * dp_mean / area, 0.0));
  return out;
}

Eigen::VectorXd exact_form_vector(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                                  const ManufacturedCase& exact, int order) {
  STOKES_AFEM_REQUIRE(space.matches(mesh), InvalidArgument,
                      "layout was built for a different mesh");
  const int q_order = exact_order(space, order);
  const QuadratureRule volume = triangle_rule(q_order);
  const QuadratureRule segment = segment_rule(q_order);
  const ReferenceBasis& vb = space.velocity_basis();
  const int nv = space.velocity_dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(space.num_velocity_dofs());

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementMap map(mesh, e);
    const double jac = std::abs(map.det);
    auto blk = out.segment(space.velocity_offset(e), 2 * nv);
    // grad u : grad phi - p div phi
    for (std::size_t q = 0; q < volume.size(); ++q) {
      const Point x = map.to_physical(volume.points[q]);
      const double w = volume.weights[q] * jac;
      const Eigen::MatrixXd g = map.push_gradients(vb.gradients(volume.points[q]));
      const Eigen::Matrix2d gu = exact.velocity_gradient(x);
      const double pv = exact.pressure(x);
      blk.head(nv) += w * (g * gu.row(0).transpose() - pv * g.col(0));
      blk.tail(nv) += w * (g * gu.row(1).transpose() - pv * g.col(1));
    }
    // Continuous exact fields: {grad u} = grad u, {p} = p, and the jump of
    // phi on element e is sigma_e phi n+ = phi n_e (outward normal).
    for (int fid : mesh.element_faces(e)) {
      const Face& f = mesh.face(fid);
      const double sigma = detail::side_of(f, e) == 0 ? 1.0 : -1.0;
      const Eigen::Vector2d n = sigma * f.normal;
      const detail::FacePoints fp = detail::face_points(mesh, f, segment);
      for (std::size_t q = 0; q < fp.x.size(); ++q) {
        const Eigen::VectorXd phi = vb.values(map.to_reference(fp.x[q]));
        const Eigen::Vector2d flux =
            exact.pressure(fp.x[q]) * n - exact.velocity_gradient(fp.x[q]) * n;
        blk.head(nv) += fp.w[q] * flux.x() * phi;
        blk.tail(nv) += fp.w[q] * flux.y() * phi;
      }
    }
  }
  return out;
}

std::vector<double> eoc_h(std::span<const double> errors, std::span<const double> h) {
  STOKES_AFEM_REQUIRE(errors.size() == h.size() && errors.size() >= 2, InvalidArgument,
                      "eoc needs two equally long sequences of length >= 2");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    STOKES_AFEM_REQUIRE(errors[i] > 0.0 && errors[i + 1] > 0.0 && h[i] > 0.0 && h[i + 1] > 0.0,
                        InvalidArgument, "eoc needs positive errors and mesh sizes");
    out.push_back(std::log(errors[i] / errors[i + 1]) / std::log(h[i] / h[i + 1]));
  }
  return out;
}

std::vector<double> eoc_dof(std::span<const double> errors, std::span<const double> dofs,
                            int dim) {
  STOKES_AFEM_REQUIRE(errors.size() == dofs.size() && errors.size() >= 2, InvalidArgument,
                      "eoc needs two equally long sequences of length >= 2");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    STOKES_AFEM_REQUIRE(errors[i] > 0.0 && errors[i + 1] > 0.0 && dofs[i] > 0.0 &&
                            dofs[i + 1] > 0.0,
                        InvalidArgument, "eoc needs positive errors and dof counts");
    out.push_back(dim * std::log(errors[i] / errors[i + 1]) /
                  (2.0 * std::log(dofs[i + 1] / dofs[i])));
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  STOKES_AFEM_REQUIRE(x.size() == y.size() && x.size() >= 2, InvalidArgument,
                      "slope needs two equally long sequences of length >= 2");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    STOKES_AFEM_REQUIRE(x[i] > 0.0 && y[i] > 0.0, InvalidArgument,
                        "log-log slope needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  STOKES_AFEM_REQUIRE(denom > 0.0, InvalidArgument, "slope needs at least two distinct x values");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace stokes_afem
