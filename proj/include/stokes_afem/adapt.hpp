#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "stokes_afem/assembly.hpp"
#include "stokes_afem/estimator.hpp"
#include "stokes_afem/mesh.hpp"
#include "stokes_afem/solver.hpp"
#include "stokes_afem/space.hpp"

namespace stokes_afem {

/// Smallest set whose indicator sum reaches theta * total: indicators are
/// taken in descending order, ties by ascending element index. Returns an
/// empty set when every indicator is zero.
std::vector<int> dorfler_mark(std::span<const double> eta2, double theta);

struct IterationRecord {
  int level = 0;
  int dofs = 0;
  int elements = 0;
  double lambda1 = 0.0;
  std::vector<double> eigenvalues;
  double eta2 = 0.0;
  /// Wall time of this iteration in seconds (assemble, solve, estimate).
  double seconds = 0.0;
  int marked = 0;
  int max_eta_element = -1;
  /// Distance from the max-eta element (closest point) to the singular point
  /// (negative when the domain has none) and that element's diameter.
  double max_eta_distance = -1.0;
  double max_eta_diameter = 0.0;
};

enum class Termination { MaxDof, EtaTolerance, EstimatorZero, MaxLevels, Completed };

std::string_view to_string(Termination t);

struct AdaptiveTrace {
  std::vector<IterationRecord> records;
  Termination reason = Termination::Completed;
};

/// Everything known about one level, handed to observers (artifact writers).
struct LevelState {
  const SimplicialMesh& mesh;
  const BrokenSpaceLayout& space;
  const AssembledSystem& system;
  const EigenSolution& eigen;
  const IndicatorField& indicators;
  const IterationRecord& record;
};

struct AdaptiveOptions {
  DomainKind domain = DomainKind::Square;
  int k = 1;
  double theta = 0.5;
  double gamma_c1 = 10.0;
  /// Initial grid subdivisions per unit length.
  int n = 16;
  /// Never solve on a space with more degrees of freedom than this (the
  /// initial mesh is always solved).
  long max_dof = 200000;
  /// Stop once eta^2 falls below this value (0 disables).
  double eta_tol = 0.0;
  int nev = 1;
  /// Number of leading eigenpairs whose indicators are summed for marking.
  int marked_pairs = 1;
  int max_levels = 1000;
  bool half_interior_jump = false;
  /// Seed the Krylov solver with the previous eigenvector.
  bool warm_start = true;
  int threads = 1;
  std::function<void(const LevelState&)> on_level;
};

/// Solve, estimate, mark, refine until a stopping rule fires. Any solver
/// error propagates after on_level has seen every completed level.
AdaptiveTrace adaptive_loop(const AdaptiveOptions& options);

/// Same pipeline on the uniform meshes with n, 2n, 4n, ... subdivisions
/// (levels meshes, fewer if max_dof would be exceeded).
AdaptiveTrace uniform_loop(const AdaptiveOptions& options, int levels);

/// Express a velocity field of `coarse` on the refined mesh `fine`, given the
/// parent map returned by bisect. Exact, since the spaces are nested.
Eigen::VectorXd transfer_velocity(const SimplicialMesh& coarse, const BrokenSpaceLayout& coarse_space,
                                  const Eigen::VectorXd& u, const SimplicialMesh& fine,
                                  const BrokenSpaceLayout& fine_space,
                                  std::span<const int> parent);

}  // namespace stokes_afem
