// Level-3 BLAS entry points used by the sparse LU (dgemm, dtrsm), implemented
// with Eigen's blocked kernels. The library is linked ahead of the system BLAS
// so that UMFPACK binds to these symbols; every other BLAS/LAPACK routine still
// comes from the system libraries.

#include <cctype>

#include <Eigen/Core>

namespace {

using Stride = Eigen::OuterStride<>;
using ConstMap = Eigen::Map<const Eigen::MatrixXd, 0, Stride>;
using Map = Eigen::Map<Eigen::MatrixXd, 0, Stride>;

bool is(const char* c, char v) { return std::toupper(static_cast<unsigned char>(*c)) == v; }

template <int Side, class Tri>
void solve_in_place(const Tri& a, bool upper, bool unit, Map& b) {
  if (upper) {
    if (unit) {
      a.template triangularView<Eigen::UnitUpper>().template solveInPlace<Side>(b);
    } else {
      a.template triangularView<Eigen::Upper>().template solveInPlace<Side>(b);
    }
  } else {
    if (unit) {
      a.template triangularView<Eigen::UnitLower>().template solveInPlace<Side>(b);
    } else {
      a.template triangularView<Eigen::Lower>().template solveInPlace<Side>(b);
    }
  }
}

}  // namespace

extern "C" {

// C := alpha op(A) op(B) + beta C
void dgemm_(const char* transa, const char* transb, const int* m, const int* n, const int* k,
            const double* alpha, const double* a, const int* lda, const double* b,
            const int* ldb, const double* beta, double* c, const int* ldc) {
  if (*m <= 0 || *n <= 0) return;
  Map cm(c, *m, *n, Stride(*ldc));
  if (*beta == 0.0) {
    cm.setZero();
  } else if (*beta != 1.0) {
    cm *= *beta;
  }
  if (*k <= 0 || *alpha == 0.0) return;
  const bool ta = !is(transa, 'N');
  const bool tb = !is(transb, 'N');
  const ConstMap am(a, ta ? *k : *m, ta ? *m : *k, Stride(*lda));
  const ConstMap bm(b, tb ? *n : *k, tb ? *k : *n, Stride(*ldb));
  if (!ta && !tb) {
    cm.noalias() += *alpha * am * bm;
  } else if (ta && !tb) {
    cm.noalias() += *alpha * am.transpose() * bm;
  } else if (!ta && tb) {
    cm.noalias() += *alpha * am * bm.transpose();
  } else {
    cm.noalias() += *alpha * am.transpose() * bm.transpose();
  }
}

// B := alpha op(A)^{-1} B (side L) or alpha B op(A)^{-1} (side R)
void dtrsm_(const char* side, const char* uplo, const char* transa, const char* diag,
            const int* m, const int* n, const double* alpha, const double* a, const int* lda,
            double* b, const int* ldb) {
  if (*m <= 0 || *n <= 0) return;
  Map bm(b, *m, *n, Stride(*ldb));
  if (*alpha == 0.0) {
    bm.setZero();
    return;
  }
  if (*alpha != 1.0) bm *= *alpha;
  const bool left = is(side, 'L');
  const int order = left ? *m : *n;
  const ConstMap am(a, order, order, Stride(*lda));
  const bool upper = is(uplo, 'U');
  const bool trans = !is(transa, 'N');
  const bool unit = is(diag, 'U');
  if (left) {
    if (trans) {
      solve_in_place<Eigen::OnTheLeft>(am.transpose(), !upper, unit, bm);
    } else {
      solve_in_place<Eigen::OnTheLeft>(am, upper, unit, bm);
    }
  } else {
    if (trans) {
      solve_in_place<Eigen::OnTheRight>(am.transpose(), !upper, unit, bm);
    } else {
      solve_in_place<Eigen::OnTheRight>(am, upper, unit, bm);
    }
  }
}

}  // extern "C"
