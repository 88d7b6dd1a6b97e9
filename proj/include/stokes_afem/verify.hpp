#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "stokes_afem/assembly.hpp"
#include "stokes_afem/mesh.hpp"
#include "stokes_afem/space.hpp"

namespace stokes_afem {

/// Exact Stokes source solution with closed-form forcing f = -Laplace u + grad p.
struct ManufacturedCase {
  std::string name;
  DomainKind domain = DomainKind::Square;
  VectorField velocity;
  /// grad(i, j) = d_j u_i
  std::function<Eigen::Matrix2d(const Point&)> velocity_gradient;
  std::function<double(const Point&)> pressure;
  std::function<Eigen::Vector2d(const Point&)> pressure_gradient;
  VectorField forcing;
};

/// Known cases: "MS1" (stream function x^2(1-x)^2 y^2(1-y)^2, p = xy - 1/4).
ManufacturedCase manufactured_case(std::string_view name);

struct ReferenceValue {
  DomainKind domain;
  std::string_view symbol;
  double lambda1;
  std::string_view provenance;
};

/// Published first eigenvalues of the three test domains.
class ReferenceRegistry {
public:
  static std::span<const ReferenceValue> entries();
  static std::optional<ReferenceValue> find(DomainKind domain);
};

struct DgError {
  /// (sum_K |grad(u - u_h)|^2 + sum_E gamma/h_E |[[u_h]]|^2)^(1/2)
  double velocity_dg = 0.0;
  double velocity_l2 = 0.0;
  /// L2 error of the pressure after removing the mean of the difference.
  double pressure_l2 = 0.0;
};

/// Errors of a discrete pair against an exact solution that vanishes on the
/// boundary. order < 0 selects 2k + 4.
DgError dg_error(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                 const Eigen::VectorXd& u, const Eigen::VectorXd& p, const ManufacturedCase& exact,
                 double gamma, int order = -1);

/// Vector with entries A_h(u, phi_i) + B_h(phi_i, p) for the exact fields,
/// integrated with quadrature of the given order (< 0: 2k + 4). For a
/// consistent method it coincides with the load vector.
Eigen::VectorXd exact_form_vector(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                                  const ManufacturedCase& exact, int order = -1);

/// DG norm of a discrete velocity: broken gradient plus penalised jumps.
double dg_norm(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
               const Eigen::VectorXd& v, double gamma);

/// log(e_i / e_{i+1}) / log(h_i / h_{i+1}).
std::vector<double> eoc_h(std::span<const double> errors, std::span<const double> h);

/// dim * log(e_i / e_{i+1}) / (2 log(N_{i+1} / N_i)); for eigenvalue errors
/// this is comparable to k.
std::vector<double> eoc_dof(std::span<const double> errors, std::span<const double> dofs,
                            int dim = 2);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace stokes_afem
