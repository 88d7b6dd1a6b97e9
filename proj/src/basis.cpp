#include "stokes_afem/basis.hpp"

#include <string>

#include <Eigen/LU>

#include "stokes_afem/error.hpp"

namespace stokes_afem {

namespace {

long double factorial(int n) {
  long double r = 1.0L;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

long double monomial_integral_ld(int a, int b) {
  return factorial(a) * factorial(b) / factorial(a + b + 2);
}

// Powers x^0..x^k and y^0..y^k.
struct Powers {
  std::array<double, kMaxDegree + 1> x{};
  std::array<double, kMaxDegree + 1> y{};

  Powers(const Eigen::Vector2d& p, int k) {
    x[0] = y[0] = 1.0;
    for (int i = 1; i <= k; ++i) {
      x[i] = x[i - 1] * p.x();
      y[i] = y[i - 1] * p.y();
    }
  }
  // d^n/dx^n of x^a evaluated at the point.
  double dx(int a, int n) const {
    if (a < n) return 0.0;
    double c = 1.0;
    for (int i = 0; i < n; ++i) c *= a - i;
    return c * x[a - n];
  }
  double dy(int b, int n) const {
    if (b < n) return 0.0;
    double c = 1.0;
    for (int i = 0; i < n; ++i) c *= b - i;
    return c * y[b - n];
  }
};

}  // namespace

double reference_monomial_integral(int a, int b) {
  return static_cast<double>(monomial_integral_ld(a, b));
}

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree), dim_(poly_dim(degree)) {
  STOKES_AFEM_REQUIRE(degree >= 0 && degree <= kMaxDegree, InvalidArgument,
                      "unsupported polynomial degree " + std::to_string(degree));
  for (int d = 0; d <= degree; ++d) {
    for (int b = 0; b <= d; ++b) exponents_.push_back({d - b, b});
  }

  using MatLD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  MatLD gram(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      gram(i, j) = monomial_integral_ld(exponents_[i][0] + exponents_[j][0],
                                        exponents_[i][1] + exponents_[j][1]);
    }
  }
  // gram = L L^T; basis = L^{-1} * monomials.
  MatLD lower = MatLD::Zero(dim_, dim_);
  for (int j = 0; j < dim_; ++j) {
    long double s = gram(j, j);
    for (int p = 0; p < j; ++p) s -= lower(j, p) * lower(j, p);
    lower(j, j) = std::sqrt(s);
    for (int i = j + 1; i < dim_; ++i) {
      long double t = gram(i, j);
      for (int p = 0; p < j; ++p) t -= lower(i, p) * lower(j, p);
      lower(i, j) = t / lower(j, j);
    }
  }
  MatLD inv = MatLD::Identity(dim_, dim_);
  for (int c = 0; c < dim_; ++c) {
    for (int i = 0; i < dim_; ++i) {
      long double t = inv(i, c);
      for (int p = 0; p < i; ++p) t -= lower(i, p) * inv(p, c);
      inv(i, c) = t / lower(i, i);
    }
  }
  coeffs_ = inv.cast<double>();
}

void ReferenceBasis::values(const Eigen::Vector2d& xi, Eigen::Ref<Eigen::VectorXd> out) const {
  const Powers pw(xi, degree_);
  Eigen::Matrix<double, poly_dim(kMaxDegree), 1> mono;
  for (int j = 0; j < dim_; ++j) mono[j] = pw.x[exponents_[j][0]] * pw.y[exponents_[j][1]];
  out = coeffs_ * mono.head(dim_);
}

void ReferenceBasis::gradients(const Eigen::Vector2d& xi,
                               Eigen::Ref<Eigen::MatrixXd> out) const {
  const Powers pw(xi, degree_);
  Eigen::Matrix<double, poly_dim(kMaxDegree), 2> mono;
  for (int j = 0; j < dim_; ++j) {
    const auto [a, b] = exponents_[j];
    mono(j, 0) = pw.dx(a, 1) * pw.y[b];
    mono(j, 1) = pw.x[a] * pw.dy(b, 1);
  }
  out = coeffs_ * mono.topRows(dim_);
}

void ReferenceBasis::hessians(const Eigen::Vector2d& xi, Eigen::Ref<Eigen::MatrixXd> out) const {
  const Powers pw(xi, degree_);
  Eigen::Matrix<double, poly_dim(kMaxDegree), 3> mono;
  for (int j = 0; j < dim_; ++j) {
    const auto [a, b] = exponents_[j];
    mono(j, 0) = pw.dx(a, 2) * pw.y[b];
    mono(j, 1) = pw.dx(a, 1) * pw.dy(b, 1);
    mono(j, 2) = pw.x[a] * pw.dy(b, 2);
  }
  out = coeffs_ * mono.topRows(dim_);
}

Eigen::VectorXd ReferenceBasis::values(const Eigen::Vector2d& xi) const {
  Eigen::VectorXd out(dim_);
  values(xi, out);
  return out;
}

Eigen::MatrixXd ReferenceBasis::gradients(const Eigen::Vector2d& xi) const {
  Eigen::MatrixXd out(dim_, 2);
  gradients(xi, out);
  return out;
}

Eigen::MatrixXd ReferenceBasis::hessians(const Eigen::Vector2d& xi) const {
  Eigen::MatrixXd out(dim_, 3);
  hessians(xi, out);
  return out;
}

Eigen::MatrixXd ReferenceBasis::reference_mass() const {
  Eigen::MatrixXd mono(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      mono(i, j) = reference_monomial_integral(exponents_[i][0] + exponents_[j][0],
                                               exponents_[i][1] + exponents_[j][1]);
    }
  }
  return coeffs_ * mono * coeffs_.transpose();
}

ReferenceBasis make_basis(int k) { return ReferenceBasis(k); }

ElementMap::ElementMap(const SimplicialMesh& mesh, int e) {
  const auto& t = mesh.element(e);
  origin = mesh.vertex(t[0]);
  jacobian.col(0) = mesh.vertex(t[1]) - origin;
  jacobian.col(1) = mesh.vertex(t[2]) - origin;
  det = jacobian.determinant();
  inverse = jacobian.inverse();
}

Eigen::VectorXd ElementMap::push_laplacians(const Eigen::MatrixXd& ref_hess) const {
  const Eigen::Matrix2d g = inverse * inverse.transpose();
  return ref_hess.col(0) * g(0, 0) + ref_hess.col(1) * (2.0 * g(0, 1)) +
         ref_hess.col(2) * g(1, 1);
}

}  // namespace stokes_afem
