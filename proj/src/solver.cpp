#include "stokes_afem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/UmfPackSupport>
#include <arpack/arpack.hpp>

#include "stokes_afem/basis.hpp"
#include "stokes_afem/error.hpp"

namespace stokes_afem {

struct SaddleFactorization::Impl {
  int nu = 0;
  int np = 0;
  SparseMatrix K;        // augmented matrix, used for products only
  SparseMatrix pinned;   // [A B^T; B 0] with pressure dof 0 fixed
  Eigen::VectorXd mean;  // c
  Eigen::VectorXd ones;  // discrete constant pressure
  double mean_of_ones = 0.0;
  Eigen::UmfPackLU<SparseMatrix> lu;
};

namespace {

SparseMatrix augmented_matrix(const AssembledSystem& sys) {
  const int nu = sys.num_velocity_dofs();
  const int np = sys.num_pressure_dofs();
  const int n = nu + np + 1;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(sys.A.nonZeros() + 2 * sys.B.nonZeros() + 2 * np));
  for (int col = 0; col < sys.A.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(sys.A, col); it; ++it) {
      trip.emplace_back(static_cast<int>(it.row()), col, it.value());
    }
  }
  for (int col = 0; col < sys.B.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(sys.B, col); it; ++it) {
      const int prow = nu + static_cast<int>(it.row());
      trip.emplace_back(prow, col, it.value());
      trip.emplace_back(col, prow, it.value());
    }
  }
  for (int i = 0; i < np; ++i) {
    const double c = sys.pressure_mean[i];
    if (c == 0.0) continue;
    trip.emplace_back(nu + i, n - 1, c);
    trip.emplace_back(n - 1, nu + i, c);
  }
  SparseMatrix K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  K.makeCompressed();
  return K;
}

// The multiplier row is dense and ruins the fill-reducing ordering, so the
// factorised matrix fixes the first pressure coefficient instead. Constant
// pressures span the kernel of B^T, which makes both forms equivalent up to
// the constant shift applied in solve().
SparseMatrix pinned_matrix(const AssembledSystem& sys) {
  const int nu = sys.num_velocity_dofs();
  const int np = sys.num_pressure_dofs();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(sys.A.nonZeros() + 2 * sys.B.nonZeros() + 1));
  for (int col = 0; col < sys.A.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(sys.A, col); it; ++it) {
      trip.emplace_back(static_cast<int>(it.row()), col, it.value());
    }
  }
  for (int col = 0; col < sys.B.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(sys.B, col); it; ++it) {
      if (it.row() == 0) continue;
      const int prow = nu + static_cast<int>(it.row());
      trip.emplace_back(prow, col, it.value());
      trip.emplace_back(col, prow, it.value());
    }
  }
  trip.emplace_back(nu, nu, 1.0);
  SparseMatrix K(nu + np, nu + np);
  K.setFromTriplets(trip.begin(), trip.end());
  K.makeCompressed();
  return K;
}

}  // namespace

SaddleFactorization::SaddleFactorization(const AssembledSystem& system)
    : impl_(std::make_unique<Impl>()) {
  STOKES_AFEM_REQUIRE(system.B.cols() == system.A.rows(), InvalidArgument,
                      "B and A have inconsistent velocity dimensions");
  STOKES_AFEM_REQUIRE(system.pressure_mean.size() == system.B.rows(), InvalidArgument,
                      "pressure mean vector has wrong length");
  Impl& d = *impl_;
  d.nu = system.num_velocity_dofs();
  d.np = system.num_pressure_dofs();
  d.K = augmented_matrix(system);
  d.pinned = pinned_matrix(system);
  d.mean = system.pressure_mean;
  // Pressure basis 0 is the constant sqrt(2) on every element.
  const int per_element = poly_dim(system.degree - 1);
  d.ones = Eigen::VectorXd::Zero(d.np);
  for (int i = 0; i < d.np; i += per_element) d.ones[i] = 1.0 / std::sqrt(2.0);
  d.mean_of_ones = d.mean.dot(d.ones);
  STOKES_AFEM_REQUIRE(std::abs(d.mean_of_ones) > 0.0, Solver,
                      "mean constraint does not fix the constant pressure");
  d.lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
  d.lu.umfpackControl()(UMFPACK_IRSTEP) = 0;
  d.lu.compute(d.pinned);
  STOKES_AFEM_REQUIRE(d.lu.info() == Eigen::Success, Solver,
                      "factorisation of the saddle-point matrix failed (singular system)");
}

SaddleFactorization::~SaddleFactorization() = default;

int SaddleFactorization::size() const { return static_cast<int>(impl_->K.rows()); }

Eigen::VectorXd SaddleFactorization::solve(const Eigen::VectorXd& rhs) const {
  STOKES_AFEM_REQUIRE(rhs.size() == size(), InvalidArgument, "right-hand side has wrong length");
  const Impl& d = *impl_;
  // B u + c mu = g is solvable only for mu = 1.g / 1.c.
  const double mu = d.ones.dot(rhs.segment(d.nu, d.np)) / d.mean_of_ones;
  Eigen::VectorXd reduced = rhs.head(d.nu + d.np);
  reduced.tail(d.np) -= mu * d.mean;
  reduced[d.nu] = 0.0;
  Eigen::VectorXd y = d.lu.solve(reduced);
  STOKES_AFEM_REQUIRE(d.lu.info() == Eigen::Success && y.allFinite(), Solver,
                      "saddle-point solve failed");
  Eigen::VectorXd x(size());
  x.head(d.nu) = y.head(d.nu);
  auto p = x.segment(d.nu, d.np);
  p = y.tail(d.np);
  p += ((rhs[size() - 1] - d.mean.dot(p)) / d.mean_of_ones) * d.ones;
  x[size() - 1] = mu;
  return x;
}

Eigen::VectorXd SaddleFactorization::apply(const Eigen::VectorXd& x) const { return impl_->K * x; }

SourceSolution solve_source(const AssembledSystem& system, const Eigen::VectorXd& load,
                            const Eigen::VectorXd& pressure_load) {
  const int nu = system.num_velocity_dofs();
  const int np = system.num_pressure_dofs();
  STOKES_AFEM_REQUIRE(load.size() == nu, InvalidArgument, "load vector has wrong length");
  STOKES_AFEM_REQUIRE(pressure_load.size() == 0 || pressure_load.size() == np, InvalidArgument,
                      "pressure load has wrong length");
  const SaddleFactorization lu(system);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(lu.size());
  rhs.head(nu) = load;
  if (pressure_load.size() == np) rhs.segment(nu, np) = pressure_load;

  Eigen::VectorXd x = lu.solve(rhs);
  const double bnorm = rhs.norm();
  double res = bnorm > 0.0 ? (lu.apply(x) - rhs).norm() / bnorm : 0.0;
  for (int it = 0; it < 3 && res > 1e-12; ++it) {
    x += lu.solve(rhs - lu.apply(x));
    res = (lu.apply(x) - rhs).norm() / bnorm;
  }
  STOKES_AFEM_REQUIRE(res <= 1e-10, Solver,
                      "source solve did not reach the residual tolerance (" + std::to_string(res) +
                          ")");
  SourceSolution sol;
  sol.velocity = x.head(nu);
  sol.pressure = x.segment(nu, np);
  sol.residual = res;
  return sol;
}

EigenSolution solve_eigen(const AssembledSystem& system, const EigenOptions& options) {
  const int nu = system.num_velocity_dofs();
  const int np = system.num_pressure_dofs();
  STOKES_AFEM_REQUIRE(options.nev >= 1, InvalidArgument, "nev must be >= 1");
  STOKES_AFEM_REQUIRE(options.nev + 2 < nu, InvalidArgument, "nev too large for the space");

  const SaddleFactorization lu(system);
  const Eigen::VectorXd sqrt_mass = system.mass_diagonal.cwiseSqrt();

  // Symmetric operator w -> D^{1/2} (K^{-1} [D^{1/2} w; 0; 0])_u on the
  // velocity space; its nonzero eigenvalues are 1 / lambda.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(lu.size());
  int applications = 0;
  auto apply_op = [&](const double* in, double* out) {
    rhs.head(nu) = sqrt_mass.cwiseProduct(Eigen::Map<const Eigen::VectorXd>(in, nu));
    const Eigen::VectorXd z = lu.solve(rhs);
    Eigen::Map<Eigen::VectorXd>(out, nu) = sqrt_mass.cwiseProduct(z.head(nu));
    ++applications;
  };

  const a_int n = nu;
  const a_int nev = options.nev;
  const a_int ncv = std::min<a_int>(n, options.ncv > 0 ? options.ncv : std::max(2 * nev + 1, 20));
  STOKES_AFEM_REQUIRE(ncv > nev, InvalidArgument, "ncv must exceed nev");

  Eigen::VectorXd resid(n);
  if (options.initial_velocity && options.initial_velocity->size() == nu &&
      options.initial_velocity->norm() > 0.0) {
    resid = sqrt_mass.cwiseProduct(*options.initial_velocity);
  } else {
    std::mt19937_64 gen(20240917);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (a_int i = 0; i < n; ++i) resid[i] = dist(gen);
  }

  Eigen::MatrixXd basis(n, ncv);
  std::array<a_int, 11> iparam{};
  std::array<a_int, 14> ipntr{};
  iparam[0] = 1;
  iparam[2] = options.max_iterations;
  iparam[6] = 1;
  Eigen::VectorXd workd(3 * n);
  const a_int lworkl = ncv * (ncv + 8);
  Eigen::VectorXd workl(lworkl);
  a_int ido = 0;
  a_int info = 1;

  while (true) {
    arpack::saupd(ido, arpack::bmat::identity, n, arpack::which::largest_magnitude, nev,
                  options.arpack_tol, resid.data(), ncv, basis.data(), n, iparam.data(),
                  ipntr.data(), workd.data(), workl.data(), lworkl, info);
    if (ido == -1 || ido == 1) {
      apply_op(workd.data() + ipntr[0] - 1, workd.data() + ipntr[1] - 1);
    } else {
      break;
    }
  }
  if (info == 1) {
    throw Error(ErrorKind::Solver, "Lanczos iteration did not converge within " +
                                       std::to_string(options.max_iterations) + " restarts");
  }
  STOKES_AFEM_REQUIRE(info >= 0, Solver, "ARPACK saupd failed with info " + std::to_string(info));

  std::vector<a_int> select(ncv);
  Eigen::VectorXd theta(nev);
  Eigen::MatrixXd vectors(n, nev);
  a_int info_eupd = 0;
  arpack::seupd(1, arpack::howmny::ritz_vectors, select.data(), theta.data(), vectors.data(), n,
                0.0, arpack::bmat::identity, n, arpack::which::largest_magnitude, nev,
                options.arpack_tol, resid.data(), ncv, basis.data(), n, iparam.data(),
                ipntr.data(), workd.data(), workl.data(), lworkl, info_eupd);
  STOKES_AFEM_REQUIRE(info_eupd == 0, Solver,
                      "ARPACK seupd failed with info " + std::to_string(info_eupd));
  const a_int converged = iparam[4];

  struct Pair {
    double lambda;
    int column;
  };
  std::vector<Pair> pairs;
  EigenSolution out;
  for (a_int j = 0; j < std::min(converged, nev); ++j) {
    const double lambda = theta[j] != 0.0 ? 1.0 / theta[j] : 0.0;
    if (!(lambda >= options.min_eigenvalue && lambda <= options.max_eigenvalue)) {
      ++out.filtered;
      continue;
    }
    pairs.push_back({lambda, static_cast<int>(j)});
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Pair& a, const Pair& b) { return a.lambda < b.lambda; });

  out.dofs = nu + np;
  for (const Pair& pr : pairs) {
    Eigen::VectorXd u = vectors.col(pr.column).cwiseQuotient(sqrt_mass);
    u /= std::sqrt(u.dot(system.mass_diagonal.cwiseProduct(u)));
    Eigen::Index imax = 0;
    u.cwiseAbs().maxCoeff(&imax);
    if (u[imax] < 0.0) u = -u;

    // Pressure (and multiplier) from one more solve: x = lambda K^{-1} [M u; 0; 0].
    rhs.setZero();
    rhs.head(nu) = system.mass_diagonal.cwiseProduct(u);
    Eigen::VectorXd x = pr.lambda * lu.solve(rhs);
    ++applications;
    x.head(nu) = u;
    Eigen::VectorXd mx = Eigen::VectorXd::Zero(lu.size());
    mx.head(nu) = system.mass_diagonal.cwiseProduct(u);
    const Eigen::VectorXd kx = lu.apply(x);
    const double res = (kx - pr.lambda * mx).norm() / kx.norm();
    if (res > options.residual_tol) {
      throw Error(ErrorKind::Solver, "eigenpair residual " + std::to_string(res) +
                                         " exceeds tolerance for lambda = " +
                                         std::to_string(pr.lambda));
    }
    out.eigenvalues.push_back(pr.lambda);
    out.velocity.push_back(std::move(u));
    out.pressure.push_back(x.segment(nu, np));
    out.residuals.push_back(res);
  }
  out.operator_applications = applications;
  STOKES_AFEM_REQUIRE(!out.eigenvalues.empty(), Solver, "no admissible eigenpair converged");
  return out;
}

double rayleigh_quotient(const AssembledSystem& system, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& p) {
  return u.dot(system.A * u) + 2.0 * p.dot(system.B * u);
}

}  // namespace stokes_afem
