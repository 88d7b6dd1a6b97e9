#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "stokes_afem/assembly.hpp"

namespace stokes_afem {

/// LU factorisation of the saddle-point matrix augmented with the zero-mean
/// pressure constraint:
///
///   [ A   B^T  0 ]
///   [ B   0    c ]
///   [ 0   c^T  0 ]
///
/// Vectors passed to `solve` have length N_u + N_p + 1.
class SaddleFactorization {
public:
  explicit SaddleFactorization(const AssembledSystem& system);
  ~SaddleFactorization();
  SaddleFactorization(const SaddleFactorization&) = delete;
  SaddleFactorization& operator=(const SaddleFactorization&) = delete;

  int size() const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SourceSolution {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  /// ||K x - b|| / ||b|| of the augmented system (0 for b = 0).
  double residual = 0.0;
};

/// Discrete Stokes source problem. `pressure_load` (length N_p) is an optional
/// right-hand side for the divergence rows; it defaults to zero.
SourceSolution solve_source(const AssembledSystem& system, const Eigen::VectorXd& load,
                            const Eigen::VectorXd& pressure_load = {});

struct EigenOptions {
  int nev = 1;
  /// Krylov subspace size; 0 picks max(2 nev + 1, 20).
  int ncv = 0;
  double arpack_tol = 1e-13;
  int max_iterations = 3000;
  double min_eigenvalue = 1e-8;
  double max_eigenvalue = 1e12;
  double residual_tol = 1e-8;
  /// Optional starting velocity (length N_u); a fixed pseudo-random vector
  /// is used otherwise.
  std::optional<Eigen::VectorXd> initial_velocity;
};

struct EigenSolution {
  /// Ascending.
  std::vector<double> eigenvalues;
  std::vector<Eigen::VectorXd> velocity;
  std::vector<Eigen::VectorXd> pressure;
  /// ||K x - lambda M~ x|| / ||K x|| per pair.
  std::vector<double> residuals;
  int dofs = 0;
  /// Ritz values rejected by the spurious-mode filter.
  int filtered = 0;
  int operator_applications = 0;
};

/// Smallest eigenpairs of A u + B^T p = lambda M u, B u = 0, c.p = 0 by
/// shift-invert (shift 0) Lanczos. Velocities satisfy u^T M u = 1; the entry
/// of largest magnitude (first one on ties) is positive.
EigenSolution solve_eigen(const AssembledSystem& system, const EigenOptions& options = {});

/// u^T A u + 2 p^T B u, equal to lambda at a normalised discrete eigenpair and
/// stationary there.
double rayleigh_quotient(const AssembledSystem& system, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& p);

}  // namespace stokes_afem
