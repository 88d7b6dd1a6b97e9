#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "support.hpp"

extern "C" {
void dgemm_(const char* transa, const char* transb, const int* m, const int* n, const int* k,
            const double* alpha, const double* a, const int* lda, const double* b, const int* ldb,
            const double* beta, double* c, const int* ldc);
void dtrsm_(const char* side, const char* uplo, const char* transa, const char* diag, const int* m,
            const int* n, const double* alpha, const double* a, const int* lda, double* b,
            const int* ldb);
}

namespace {

using Eigen::MatrixXd;

MatrixXd random_matrix(int rows, int cols, unsigned seed) {
  return Eigen::Map<const MatrixXd>(stokes_afem::testing::random_vector(rows * cols, seed).data(),
                                    rows, cols);
}

TEST(DenseKernels, GemmAllTransposeCombinations) {
  const int m = 7, n = 5, k = 9;
  for (char ta : {'N', 'T'}) {
    for (char tb : {'N', 'T'}) {
      // Leading dimensions larger than the logical sizes.
      const int lda = (ta == 'N' ? m : k) + 3;
      const int ldb = (tb == 'N' ? k : n) + 2;
      const int ldc = m + 4;
      MatrixXd abuf = random_matrix(lda, ta == 'N' ? k : m, 1);
      MatrixXd bbuf = random_matrix(ldb, tb == 'N' ? n : k, 2);
      MatrixXd cbuf = random_matrix(ldc, n, 3);
      const MatrixXd aop = ta == 'N' ? MatrixXd(abuf.topRows(m)) : MatrixXd(abuf.topRows(k).transpose());
      const MatrixXd bop = tb == 'N' ? MatrixXd(bbuf.topRows(k)) : MatrixXd(bbuf.topRows(n).transpose());
      const double alpha = 0.7, beta = -1.3;
      MatrixXd expected = cbuf;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < k; ++l) s += aop(i, l) * bop(l, j);
          expected(i, j) = alpha * s + beta * cbuf(i, j);
        }
      }
      dgemm_(&ta, &tb, &m, &n, &k, &alpha, abuf.data(), &lda, bbuf.data(), &ldb, &beta,
             cbuf.data(), &ldc);
      EXPECT_LE((cbuf - expected).cwiseAbs().maxCoeff(), 1e-13) << ta << tb;
    }
  }
}

TEST(DenseKernels, GemmWithZeroBetaIgnoresNaNInOutput) {
  const int m = 3, n = 3, k = 3;
  MatrixXd a = random_matrix(3, 3, 4), b = random_matrix(3, 3, 5);
  MatrixXd c = MatrixXd::Constant(3, 3, std::numeric_limits<double>::quiet_NaN());
  const double alpha = 1.0, beta = 0.0;
  const char t = 'N';
  dgemm_(&t, &t, &m, &n, &k, &alpha, a.data(), &m, b.data(), &k, &beta, c.data(), &m);
  EXPECT_LE((c - a * b).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(DenseKernels, TrsmAllVariants) {
  const int m = 6, n = 4;
  for (char side : {'L', 'R'}) {
    for (char uplo : {'U', 'L'}) {
      for (char trans : {'N', 'T'}) {
        for (char diag : {'N', 'U'}) {
          const int na = side == 'L' ? m : n;
          const int lda = na + 2, ldb = m + 1;
          MatrixXd abuf = random_matrix(lda, na, 6);
          abuf.topRows(na).diagonal().array() += 4.0;
          MatrixXd tri = MatrixXd::Zero(na, na);
          for (int i = 0; i < na; ++i) {
            for (int j = 0; j < na; ++j) {
              const bool keep = uplo == 'U' ? j >= i : j <= i;
              if (keep) tri(i, j) = abuf(i, j);
            }
            if (diag == 'U') tri(i, i) = 1.0;
          }
          const MatrixXd op = trans == 'N' ? tri : MatrixXd(tri.transpose());
          MatrixXd bbuf = random_matrix(ldb, n, 7);
          const MatrixXd rhs = bbuf.topRows(m);
          const double alpha = 2.5;
          dtrsm_(&side, &uplo, &trans, &diag, &m, &n, &alpha, abuf.data(), &lda, bbuf.data(), &ldb);
          const MatrixXd x = bbuf.topRows(m);
          const MatrixXd check = side == 'L' ? MatrixXd(op * x) : MatrixXd(x * op);
          EXPECT_LE((check - alpha * rhs).cwiseAbs().maxCoeff(), 1e-12)
              << side << uplo << trans << diag;
        }
      }
    }
  }
}

}  // namespace
