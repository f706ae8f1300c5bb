#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bicircle/moments.hpp"

namespace bicircle {

// One orthonormal level: the rows of `coeffs` hold, top to bottom, the
// coefficient vectors of the orthonormal polynomials of the level over the
// descending monomial columns (lex: m+1 rows; revlex: n+1 rows). Row j has
// exact zeros before its pivot column j, and pivots[j] > 0 makes the system
// unique.
struct OrthoLevel {
  int n = 0, m = 0;
  Ordering ordering = Ordering::lex;
  Eigen::MatrixXcd coeffs;
  Eigen::VectorXd pivots;
};

// Gram-Schmidt orthonormalization of the level-(n, m) monomial block via a
// Cholesky factorization of the ascending-monomial Gram matrix. Throws
// LevelExceedsMoments if the table is too small and NotPositiveDefinite if
// the Gram matrix fails the relative spectral threshold 1e-10.
OrthoLevel orthonormalize(const MomentTable& t, int n, int m, Ordering ord);

LaurentPoly row_poly(const OrthoLevel& lev, int row);
// All rows, top to bottom.
std::vector<LaurentPoly> level_polys(const OrthoLevel& lev);

// Elementwise degree-(n, m) reversal, preserving list order.
std::vector<LaurentPoly> reversed_polys(const std::vector<LaurentPoly>& polys,
                                        int n, int m);
// Elementwise multiplication by z^dk w^dl.
std::vector<LaurentPoly> shifted_polys(const std::vector<LaurentPoly>& polys,
                                       int dk, int dl);

// Gram matrix M(i, j) = <F_i, G_j> under the moment functional.
Eigen::MatrixXcd gram(const MomentTable& t, const std::vector<LaurentPoly>& F,
                      const std::vector<LaurentPoly>& G);

// Matrix polynomial view of a lex level: Phi(z, w) = sum_k A[k] z^k applied
// to the descending w-monomial column (w^m, ..., 1)^T.
struct MatrixPolyZ {
  int n = 0, m = 0;
  std::vector<Eigen::MatrixXcd> A;  // ascending z-powers, each (m+1)x(m+1)
};
MatrixPolyZ matrix_poly_z(const OrthoLevel& lev);
Eigen::MatrixXcd eval_matrix_poly(const MatrixPolyZ& mp, cplx z);

// Levels used by the two-point kernel (Christoffel-Darboux) identities.
struct CDLevelSet {
  int n = 0, m = 0;
  OrthoLevel lex_nm, lex_nm1, rev_nm, rev_n1m;
};
CDLevelSet cd_levels(const MomentTable& t, int n, int m);

// Max absolute deviation, at the point pair ((z, w), (z1, w1)), of the two
// reproducing-kernel identities tying the lex and revlex systems together
// (the reversed-kernel difference identity and the kernel-difference
// equality between the two orderings).
double cd_residual(const CDLevelSet& ls, cplx z, cplx w, cplx z1, cplx w1);

}  // namespace bicircle
