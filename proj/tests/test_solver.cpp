#include <gtest/gtest.h>

#include <cmath>

#include "stokes_afem/assembly.hpp"
#include "stokes_afem/solver.hpp"
#include "stokes_afem/verify.hpp"
#include "support.hpp"

namespace stokes_afem {
namespace {

constexpr double kSquare = 52.344691168;

struct Problem {
  SimplicialMesh mesh;
  BrokenSpaceLayout space;
  AssembledSystem system;

  Problem(DomainKind kind, int n, int k)
      : mesh(generate_domain(kind, n)), space(mesh, k), system(assemble(mesh, space)) {}
};

TEST(Source, ZeroLoadGivesZeroSolution) {
  const Problem pb(DomainKind::Square, 4, 2);
  const SourceSolution s =
      solve_source(pb.system, Eigen::VectorXd::Zero(pb.space.num_velocity_dofs()));
  EXPECT_EQ(s.velocity.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.pressure.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Source, PressureHasZeroMeanAndResidualIsSmall) {
  const Problem pb(DomainKind::LShape, 4, 2);
  const ManufacturedCase ms = manufactured_case("MS1");
  const Eigen::VectorXd load = assemble_load(ms.forcing, pb.mesh, pb.space);
  const SourceSolution s = solve_source(pb.system, load);
  EXPECT_LE(s.residual, 1e-10);
  EXPECT_LE(std::abs(pb.system.pressure_mean.dot(s.pressure)), 1e-12);
  const Eigen::VectorXd r = pb.system.A * s.velocity +
                            SparseMatrix(pb.system.B.transpose()) * s.pressure - load;
  EXPECT_LE(r.norm(), 1e-10 * load.norm());
  EXPECT_LE((pb.system.B * s.velocity).norm(), 1e-10 * load.norm());
}

TEST(Source, ConstantShiftOfPressureDataIsAbsorbed) {
  const Problem pb(DomainKind::Square, 4, 1);
  const Eigen::VectorXd load = testing::random_vector(pb.space.num_velocity_dofs(), 5);
  Eigen::VectorXd g = testing::random_vector(pb.space.num_pressure_dofs(), 6);
  // Make g compatible with the constant pressure mode first.
  const Eigen::VectorXd one = constant_pressure(pb.space);
  g -= (g.dot(one) / pb.system.pressure_mean.dot(one)) * pb.system.pressure_mean;
  const SourceSolution a = solve_source(pb.system, load, g);
  const SourceSolution b = solve_source(pb.system, load, g + 3.0 * pb.system.pressure_mean);
  EXPECT_LE((a.velocity - b.velocity).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((a.pressure - b.pressure).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Factorization, SolveInvertsApply) {
  const Problem pb(DomainKind::Slit, 2, 3);
  const SaddleFactorization f(pb.system);
  EXPECT_EQ(f.size(), pb.space.num_dofs() + 1);
  const Eigen::VectorXd x = testing::random_vector(f.size(), 11);
  const Eigen::VectorXd y = f.solve(f.apply(x));
  EXPECT_LE((y - x).norm(), 1e-9 * x.norm());
}

TEST(Eigen, SquareQuadraticOnFineMesh) {
  const Problem pb(DomainKind::Square, 64, 2);
  const EigenSolution s = solve_eigen(pb.system);
  ASSERT_EQ(s.eigenvalues.size(), 1u);
  EXPECT_GE(s.eigenvalues[0], 52.3446);
  EXPECT_LE(s.eigenvalues[0], 52.3448);
}

TEST(Eigen, PairsAreNormalisedSortedAndMassOrthogonal) {
  const Problem pb(DomainKind::LShape, 4, 2);
  EigenOptions o;
  o.nev = 5;
  const EigenSolution s = solve_eigen(pb.system, o);
  ASSERT_EQ(s.eigenvalues.size(), 5u);
  EXPECT_GT(s.eigenvalues[0], 0.0);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    if (i > 0) {
      EXPECT_LE(s.eigenvalues[i - 1], s.eigenvalues[i]);
    }
    EXPECT_NEAR(s.velocity[i].dot(pb.system.M * s.velocity[i]), 1.0, 1e-12);
    EXPECT_LE(s.residuals[i], 1e-8);
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(s.eigenvalues[i] - s.eigenvalues[j]) > 1e-6 * s.eigenvalues[i]) {
        EXPECT_LE(std::abs(s.velocity[i].dot(pb.system.M * s.velocity[j])), 1e-8);
      }
    }
    // Sign convention: the entry of largest magnitude is positive.
    Eigen::Index at;
    s.velocity[i].cwiseAbs().maxCoeff(&at);
    EXPECT_GT(s.velocity[i][at], 0.0);
  }
}

TEST(Eigen, ViscosityScalesEigenvaluesLinearly) {
  const Problem pb(DomainKind::LShape, 4, 1);
  EigenOptions o;
  o.nev = 3;
  const EigenSolution a = solve_eigen(pb.system, o);
  const EigenSolution b = solve_eigen(pb.system.scaled(2.0), o);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(b.eigenvalues[i], 2.0 * a.eigenvalues[i], 1e-10 * b.eigenvalues[i]);
  }
  EXPECT_LE((a.velocity[0] - b.velocity[0]).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Eigen, RepeatedSolvesAreIdentical) {
  const Problem pb(DomainKind::Slit, 2, 2);
  const EigenSolution a = solve_eigen(pb.system);
  const EigenSolution b = solve_eigen(pb.system);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.velocity[0], b.velocity[0]);
}

TEST(Eigen, WarmStartConvergesToSamePair) {
  const Problem pb(DomainKind::Square, 8, 1);
  const EigenSolution cold = solve_eigen(pb.system);
  EigenOptions o;
  o.initial_velocity = cold.velocity[0] + 0.01 * testing::random_vector(cold.velocity[0].size(), 3);
  const EigenSolution warm = solve_eigen(pb.system, o);
  EXPECT_NEAR(warm.eigenvalues[0], cold.eigenvalues[0], 1e-10 * cold.eigenvalues[0]);
  EXPECT_LE((warm.velocity[0] - cold.velocity[0]).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Eigen, UniformRefinementConvergesOnSquare) {
  double previous = INFINITY;
  for (int n : {4, 8, 16}) {
    const Problem pb(DomainKind::Square, n, 1);
    const double err = std::abs(solve_eigen(pb.system).eigenvalues[0] - kSquare);
    EXPECT_LT(err, previous) << "n=" << n;
    previous = err;
  }
}

TEST(Rayleigh, EqualsEigenvalueAtEigenpair) {
  const Problem pb(DomainKind::Square, 8, 2);
  const EigenSolution s = solve_eigen(pb.system);
  EXPECT_NEAR(rayleigh_quotient(pb.system, s.velocity[0], s.pressure[0]), s.eigenvalues[0],
              1e-9 * s.eigenvalues[0]);
  EXPECT_NEAR(rayleigh_quotient(pb.system.scaled(3.0), s.velocity[0], s.pressure[0]),
              3.0 * s.eigenvalues[0], 1e-9 * s.eigenvalues[0]);
}

TEST(Rayleigh, IsStationaryUnderVelocityPerturbation) {
  const Problem pb(DomainKind::Square, 8, 1);
  const EigenSolution s = solve_eigen(pb.system);
  const Eigen::VectorXd& u = s.velocity[0];
  Eigen::VectorXd w = testing::random_vector(u.size(), 21);
  w /= std::sqrt(w.dot(pb.system.M * w));
  auto shifted = [&](double eps) {
    Eigen::VectorXd v = u + eps * w;
    v /= std::sqrt(v.dot(pb.system.M * v));
    return rayleigh_quotient(pb.system, v, s.pressure[0]) - s.eigenvalues[0];
  };
  const double eps = 1e-4;
  const double d1 = shifted(eps);
  const double d2 = shifted(2 * eps);
  // Quadratic, not linear, response: doubling eps quadruples the change.
  EXPECT_NEAR(d2 / d1, 4.0, 0.2);
  EXPECT_LE(std::abs(d1), 1e-4 * s.eigenvalues[0]);
}

}  // namespace
}  // namespace stokes_afem
