#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "stokes_afem/mesh.hpp"

namespace stokes_afem {

inline constexpr int kMaxDegree = 3;

inline constexpr int poly_dim(int k) { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }

/// Orthonormal modal basis of P_k on the reference triangle, obtained by
/// Cholesky orthogonalisation of the degree-ordered monomials against the exact
/// reference mass matrix. The basis is hierarchical: its first poly_dim(k-1)
/// functions span P_{k-1}. The first function is the constant sqrt(2).
class ReferenceBasis {
public:
  explicit ReferenceBasis(int degree);

  int degree() const { return degree_; }
  int dim() const { return dim_; }

  /// Monomial exponents (a, b) of x^a y^b, in basis order.
  const std::vector<std::array<int, 2>>& exponents() const { return exponents_; }
  /// Row i holds the monomial coefficients of basis function i.
  const Eigen::MatrixXd& coefficients() const { return coeffs_; }

  void values(const Eigen::Vector2d& xi, Eigen::Ref<Eigen::VectorXd> out) const;
  /// out(i, 0..1) = reference gradient of basis function i.
  void gradients(const Eigen::Vector2d& xi, Eigen::Ref<Eigen::MatrixXd> out) const;
  /// out(i, 0..2) = (d_xx, d_xy, d_yy) of basis function i.
  void hessians(const Eigen::Vector2d& xi, Eigen::Ref<Eigen::MatrixXd> out) const;

  Eigen::VectorXd values(const Eigen::Vector2d& xi) const;
  Eigen::MatrixXd gradients(const Eigen::Vector2d& xi) const;
  Eigen::MatrixXd hessians(const Eigen::Vector2d& xi) const;

  /// Mass matrix of the basis on the reference triangle, integrated exactly
  /// from the monomial expansion.
  Eigen::MatrixXd reference_mass() const;

private:
  int degree_;
  int dim_;
  std::vector<std::array<int, 2>> exponents_;
  Eigen::MatrixXd coeffs_;
};

/// Exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!.
double reference_monomial_integral(int a, int b);

/// Construct the basis for 0 <= k <= kMaxDegree; throws otherwise.
ReferenceBasis make_basis(int k);

/// Affine map x = origin + J xi from the reference triangle onto element e.
struct ElementMap {
  Point origin = Point::Zero();
  Eigen::Matrix2d jacobian = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d inverse = Eigen::Matrix2d::Identity();
  double det = 1.0;

  ElementMap() = default;
  ElementMap(const SimplicialMesh& mesh, int e);

  Point to_physical(const Eigen::Vector2d& xi) const { return origin + jacobian * xi; }
  Eigen::Vector2d to_reference(const Point& x) const { return inverse * (x - origin); }
  /// Physical gradients from reference gradients (rows are functions).
  Eigen::MatrixXd push_gradients(const Eigen::MatrixXd& ref_grad) const {
    return ref_grad * inverse;
  }
  /// Physical Laplacians from reference Hessians (d_xx, d_xy, d_yy rows).
  Eigen::VectorXd push_laplacians(const Eigen::MatrixXd& ref_hess) const;
};

}  // namespace stokes_afem
