#pragma once

#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "stokes_afem/mesh.hpp"
#include "stokes_afem/space.hpp"

namespace stokes_afem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using VectorField = std::function<Eigen::Vector2d(const Point&)>;

/// Discrete operators of the interior-penalty P_k - P_{k-1} discretisation.
///
///   A : velocity x velocity, symmetric interior-penalty form
///   B : pressure x velocity, B(i, j) = B_h(phi_j, psi_i)
///   M : velocity mass, diagonal (2|K| per dof with the orthonormal basis)
///   pressure_mean : c_i = integral of pressure basis function i
struct AssembledSystem {
  SparseMatrix A;
  SparseMatrix B;
  SparseMatrix M;
  Eigen::VectorXd mass_diagonal;
  Eigen::VectorXd pressure_mean;
  int degree = 1;
  double gamma_c1 = 10.0;
  /// gamma = gamma_c1 * k^2
  double gamma = 10.0;

  int num_velocity_dofs() const { return static_cast<int>(A.rows()); }
  int num_pressure_dofs() const { return static_cast<int>(B.rows()); }
  double penalty(const Face& f) const { return gamma / f.length; }

  /// Copy with A and B multiplied by a constant viscosity mu.
  AssembledSystem scaled(double mu) const;
};

struct AssemblyOptions {
  double gamma_c1 = 10.0;
  int threads = 1;
};

AssembledSystem assemble(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                         const AssemblyOptions& options = {});

/// Load vector (f, phi_i) for every velocity basis function. order < 0 selects
/// 2k + 2.
Eigen::VectorXd assemble_load(const VectorField& f, const SimplicialMesh& mesh,
                              const BrokenSpaceLayout& space, int order = -1);

/// Coefficients of the constant pressure 1 in the pressure basis.
Eigen::VectorXd constant_pressure(const BrokenSpaceLayout& space);

/// Element-wise L2 projection of a vector field onto V_h (order < 0: 2k + 2).
Eigen::VectorXd project_velocity(const VectorField& f, const SimplicialMesh& mesh,
                                 const BrokenSpaceLayout& space, int order = -1);

/// Element-wise L2 projection of a scalar field onto Q_h.
Eigen::VectorXd project_pressure(const std::function<double(const Point&)>& p,
                                 const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                                 int order = -1);

}  // namespace stokes_afem
