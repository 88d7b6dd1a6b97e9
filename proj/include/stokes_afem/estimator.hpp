#pragma once

#include <vector>

#include <Eigen/Core>

#include "stokes_afem/mesh.hpp"
#include "stokes_afem/space.hpp"

namespace stokes_afem {

/// Squared residual indicators per element.
struct IndicatorField {
  std::vector<double> eta2_R;
  std::vector<double> eta2_E;
  std::vector<double> eta2_J;
  /// Boundary-face part of eta2_J (diagnostic; already included in eta2_J).
  std::vector<double> eta2_J_boundary;
  std::vector<double> eta2;
  /// Sum of eta2.
  double eta2_total = 0.0;

  double eta_h() const;
  int size() const { return static_cast<int>(eta2.size()); }
  /// Element with the largest eta2 (lowest index on ties).
  int argmax() const;
};

struct EstimatorOptions {
  /// Penalty gamma = C1 k^2; must match the assembled system.
  double gamma = 10.0;
  /// Split interior-face jump energy between the two neighbours (factor 1/2).
  /// Off by default: each neighbour receives the full face contribution.
  bool half_interior_jump = false;
  /// Quadrature orders; negative selects 2k (volume) and 2k + 1 (faces).
  int volume_order = -1;
  int face_order = -1;
  int threads = 1;
};

/// h_K^2 ||lambda u + Laplace u - grad p||^2_K + ||div u||^2_K.
double element_residual(const SimplicialMesh& mesh, const BrokenSpaceLayout& space, int e,
                        double lambda, const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                        const EstimatorOptions& options = {});

/// 1/2 sum over interior edges E of K: h_E ||[[p I - grad u]]||^2_E.
double face_residual(const SimplicialMesh& mesh, const BrokenSpaceLayout& space, int e,
                     const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                     const EstimatorOptions& options = {});

struct JumpParts {
  double interior = 0.0;
  double boundary = 0.0;
  double total() const { return interior + boundary; }
};

/// gamma/h_E ||[[u]]||^2 over interior edges plus gamma/h_E ||u (x) n||^2 over
/// boundary edges of K.
JumpParts jump_indicator(const SimplicialMesh& mesh, const BrokenSpaceLayout& space, int e,
                         const Eigen::VectorXd& u, const EstimatorOptions& options = {});

IndicatorField estimate(const SimplicialMesh& mesh, const BrokenSpaceLayout& space,
                        double lambda, const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                        const EstimatorOptions& options = {});

/// Element-wise sum of several indicator fields (multi-eigenpair marking).
IndicatorField sum_indicators(const std::vector<IndicatorField>& fields);

}  // namespace stokes_afem
