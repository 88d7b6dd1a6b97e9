#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stokes_afem/basis.hpp"
#include "stokes_afem/error.hpp"
#include "stokes_afem/quadrature.hpp"

namespace stokes_afem {
namespace {

std::vector<Eigen::Vector2d> random_reference_points(int count, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.02, 0.96);
  std::vector<Eigen::Vector2d> pts;
  while (static_cast<int>(pts.size()) < count) {
    const Eigen::Vector2d x(u(gen), u(gen));
    if (x.sum() < 0.98) pts.push_back(x);
  }
  return pts;
}

TEST(Quadrature, CentroidRule) {
  const QuadratureRule r = triangle_rule(1);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r.points[0].x(), 1.0 / 3, 1e-16);
  EXPECT_NEAR(r.points[0].y(), 1.0 / 3, 1e-16);
  EXPECT_NEAR(r.weights[0], 0.5, 1e-16);
}

TEST(Quadrature, TwoPointGaussIntegratesCubic) {
  const QuadratureRule r = segment_rule(3);
  ASSERT_EQ(r.size(), 2u);
  double s = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q].x(), 3);
  EXPECT_NEAR(s, 0.25, 1e-16);
}

TEST(Quadrature, SixthOrderRuleIntegratesX3Y3) {
  const QuadratureRule r = triangle_rule(6);
  double s = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) {
    s += r.weights[q] * std::pow(r.points[q].x(), 3) * std::pow(r.points[q].y(), 3);
  }
  // 3! 3! / 8!
  EXPECT_NEAR(s, 1.0 / 1120, 1e-14);
  EXPECT_NEAR(reference_monomial_integral(3, 3), 1.0 / 1120, 1e-18);
}

TEST(Quadrature, ExactForAllMonomialsUpToOrder) {
  for (int order = 0; order <= 12; ++order) {
    const QuadratureRule r = triangle_rule(order);
    for (int a = 0; a <= order; ++a) {
      for (int b = 0; a + b <= order; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < r.size(); ++q) {
          s += r.weights[q] * std::pow(r.points[q].x(), a) * std::pow(r.points[q].y(), b);
        }
        EXPECT_NEAR(s, reference_monomial_integral(a, b), 1e-15) << order << ' ' << a << ' ' << b;
      }
    }
    const QuadratureRule g = segment_rule(order);
    for (int a = 0; a <= order; ++a) {
      double s = 0.0;
      for (std::size_t q = 0; q < g.size(); ++q) s += g.weights[q] * std::pow(g.points[q].x(), a);
      EXPECT_NEAR(s, 1.0 / (a + 1), 1e-15);
    }
  }
  EXPECT_THROW(triangle_rule(kMaxQuadratureOrder + 1), Error);
}

TEST(Basis, PiecewiseConstantIsSqrtTwo) {
  const ReferenceBasis b = make_basis(0);
  ASSERT_EQ(b.dim(), 1);
  EXPECT_NEAR(b.values(Eigen::Vector2d(0.2, 0.3))[0], std::sqrt(2.0), 1e-15);
}

TEST(Basis, OrthonormalOnReferenceTriangle) {
  for (int k = 0; k <= kMaxDegree; ++k) {
    const ReferenceBasis b = make_basis(k);
    EXPECT_EQ(b.dim(), poly_dim(k));
    const Eigen::MatrixXd mass = b.reference_mass();
    EXPECT_LE((mass - Eigen::MatrixXd::Identity(b.dim(), b.dim())).cwiseAbs().maxCoeff(), 1e-12);
    // Same check through quadrature, independent of the monomial expansion.
    const QuadratureRule r = triangle_rule(2 * k);
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(b.dim(), b.dim());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const Eigen::VectorXd phi = b.values(r.points[i]);
      q += r.weights[i] * phi * phi.transpose();
    }
    EXPECT_LE((q - Eigen::MatrixXd::Identity(b.dim(), b.dim())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Basis, HierarchicalPrefixSpansLowerDegree) {
  const ReferenceBasis b3 = make_basis(3);
  const ReferenceBasis b1 = make_basis(1);
  for (const auto& x : random_reference_points(5, 1)) {
    const Eigen::VectorXd v3 = b3.values(x);
    const Eigen::VectorXd v1 = b1.values(x);
    EXPECT_LE((v3.head(3) - v1).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Basis, CubicBasisReproducesX2Y) {
  const ReferenceBasis b = make_basis(3);
  const QuadratureRule r = triangle_rule(6);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(b.dim());
  auto f = [](const Eigen::Vector2d& x) { return x.x() * x.x() * x.y(); };
  for (std::size_t q = 0; q < r.size(); ++q) c += r.weights[q] * f(r.points[q]) * b.values(r.points[q]);
  double worst = 0.0;
  for (const auto& x : random_reference_points(50, 2)) {
    worst = std::max(worst, std::abs(c.dot(b.values(x)) - f(x)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Basis, GradientsMatchCentralDifferences) {
  const double step = 1e-5;
  for (int k = 1; k <= kMaxDegree; ++k) {
    const ReferenceBasis b = make_basis(k);
    for (const auto& x : random_reference_points(20, 3 + k)) {
      const Eigen::MatrixXd g = b.gradients(x);
      for (int d = 0; d < 2; ++d) {
        Eigen::Vector2d h = Eigen::Vector2d::Zero();
        h[d] = step;
        const Eigen::VectorXd fd = (b.values(x + h) - b.values(x - h)) / (2 * step);
        for (int i = 0; i < b.dim(); ++i) {
          const double scale = std::max(1.0, std::abs(g(i, d)));
          EXPECT_LE(std::abs(fd[i] - g(i, d)) / scale, 1e-6);
        }
      }
    }
  }
}

TEST(Basis, HessiansMatchDifferencesOfGradients) {
  const double step = 1e-5;
  const ReferenceBasis b = make_basis(3);
  for (const auto& x : random_reference_points(10, 9)) {
    const Eigen::MatrixXd hess = b.hessians(x);
    const Eigen::Vector2d ex(step, 0), ey(0, step);
    const Eigen::MatrixXd dx = (b.gradients(x + ex) - b.gradients(x - ex)) / (2 * step);
    const Eigen::MatrixXd dy = (b.gradients(x + ey) - b.gradients(x - ey)) / (2 * step);
    for (int i = 0; i < b.dim(); ++i) {
      EXPECT_NEAR(hess(i, 0), dx(i, 0), 1e-5 * std::max(1.0, std::abs(hess(i, 0))));
      EXPECT_NEAR(hess(i, 1), dx(i, 1), 1e-5 * std::max(1.0, std::abs(hess(i, 1))));
      EXPECT_NEAR(hess(i, 2), dy(i, 1), 1e-5 * std::max(1.0, std::abs(hess(i, 2))));
    }
  }
}

TEST(Basis, RejectsUnsupportedDegree) {
  EXPECT_THROW(make_basis(-1), Error);
  EXPECT_THROW(make_basis(kMaxDegree + 1), Error);
}

TEST(ElementMap, PushForwardIntegratesMonomialExactly) {
  // Right triangle with legs a along x and b along y:
  //   integral of x^p y^q = a^(p+1) b^(q+1) p! q! / (p+q+2)!
  const double a = 2.0, b = 3.0;
  const SimplicialMesh m({{0, 0}, {a, 0}, {0, b}}, {{0, 1, 2}});
  const ElementMap map(m, 0);
  EXPECT_NEAR(map.det, a * b, 1e-14);
  const QuadratureRule r = triangle_rule(5);
  double s = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) {
    const Point x = map.to_physical(r.points[q]);
    s += r.weights[q] * std::abs(map.det) * x.x() * x.x() * x.y() * x.y() * x.y();
  }
  const double exact = std::pow(a, 3) * std::pow(b, 4) * reference_monomial_integral(2, 3);
  EXPECT_NEAR(s, exact, 1e-12 * exact);
  EXPECT_TRUE(map.to_reference(map.to_physical({0.25, 0.5})).isApprox(Eigen::Vector2d(0.25, 0.5)));
}

TEST(ElementMap, PhysicalGradientsOfLinearFunction) {
  const SimplicialMesh m({{1, 1}, {3, 2}, {0, 4}}, {{0, 1, 2}});
  const ElementMap map(m, 0);
  const ReferenceBasis b = make_basis(1);
  // Project f = 2x - 3y onto P1 on the element (exact) and differentiate.
  const QuadratureRule r = triangle_rule(2);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
  for (std::size_t q = 0; q < r.size(); ++q) {
    const Point x = map.to_physical(r.points[q]);
    c += r.weights[q] * (2 * x.x() - 3 * x.y()) * b.values(r.points[q]);
  }
  const Eigen::MatrixXd g = map.push_gradients(b.gradients({0.3, 0.3}));
  const Eigen::Vector2d grad = g.transpose() * c;
  EXPECT_NEAR(grad.x(), 2.0, 1e-13);
  EXPECT_NEAR(grad.y(), -3.0, 1e-13);
}

}  // namespace
}  // namespace stokes_afem
