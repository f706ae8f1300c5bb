#include <cmath>
#include <vector>

#include "bicircle/orthopoly.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bicircle;

namespace {

MomentTable fixture_table(const LaurentPoly& factor, int K = 4, int L = 4) {
  return compute_moments(fixtures::weight_of(factor), K, L);
}

}  // namespace

TEST_CASE("levels are orthonormal with positive pivots") {
  for (const LaurentPoly& f :
       {fixtures::splitting_factor(), fixtures::one_sided_factor()}) {
    MomentTable t = fixture_table(f);
    for (Ordering ord : {Ordering::lex, Ordering::revlex}) {
      for (auto [n, m] : {std::pair{2, 2}, std::pair{1, 2}, std::pair{2, 1}}) {
        OrthoLevel lev = orthonormalize(t, n, m, ord);
        int rows = (ord == Ordering::lex) ? m + 1 : n + 1;
        REQUIRE(lev.coeffs.rows() == rows);
        REQUIRE(lev.coeffs.cols() == (n + 1) * (m + 1));
        std::vector<LaurentPoly> polys = level_polys(lev);
        Eigen::MatrixXcd G = gram(t, polys, polys);
        Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(rows, rows);
        CHECK((G - I).cwiseAbs().maxCoeff() < 1e-10);
        for (int j = 0; j < rows; ++j) {
          CHECK(lev.pivots(j) > 0.0);
          CHECK(std::abs(lev.coeffs(j, j) - cplx(lev.pivots(j), 0.0)) < 1e-13);
          for (int c = 0; c < j; ++c) CHECK(lev.coeffs(j, c) == cplx(0.0));
        }
      }
    }
  }
}

TEST_CASE("rows kill every lower monomial of the level") {
  MomentTable t = fixture_table(fixtures::one_sided_factor());
  const int n = 2, m = 2;
  for (Ordering ord : {Ordering::lex, Ordering::revlex}) {
    OrthoLevel lev = orthonormalize(t, n, m, ord);
    int rows = (ord == Ordering::lex) ? m + 1 : n + 1;
    int D = (n + 1) * (m + 1);
    for (int j = 0; j < rows; ++j) {
      LaurentPoly phi = row_poly(lev, j);
      // Orthogonal to every strictly later (lower-order) monomial of the
      // descending list; unit pairing against its own pivot monomial up to
      // the triangular correction.
      for (int tpos = j + 1; tpos < D; ++tpos) {
        auto [k, l] = descending_monomial(n, m, ord, tpos);
        CHECK(std::abs(inner_product(t, phi, LaurentPoly::monomial(k, l))) <
              1e-10);
      }
    }
  }
}

TEST_CASE("flat weight gives the monomials themselves") {
  WeightSpec w = WeightSpec::trig_poly(LaurentPoly::constant(1.0));
  MomentTable t = compute_moments(w, 3, 3);
  CHECK(std::abs(t.moment(0, 0) - cplx(1.0, 0.0)) < 1e-14);
  CHECK(std::abs(t.moment(2, 1)) < 1e-14);
  OrthoLevel lev = orthonormalize(t, 2, 2, Ordering::lex);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Identity(3, 9);
  CHECK((lev.coeffs - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("degenerate moment matrices are rejected") {
  MomentTable t(1, 1);
  t.set(0, 0, 1.0);
  t.set(1, 0, 1.0);  // makes the (1,0) ascending Gram exactly singular
  t.set(0, 1, 0.0);
  t.set(1, 1, 0.0);
  t.set(1, -1, 0.0);
  CHECK_THROWS_AS(orthonormalize(t, 1, 0, Ordering::lex), NotPositiveDefinite);
  CHECK_THROWS_AS(orthonormalize(t, 1, 1, Ordering::lex), NotPositiveDefinite);
  MomentTable small = compute_moments(
      fixtures::weight_of(fixtures::stable_factor()), 1, 1);
  CHECK_THROWS_AS(orthonormalize(small, 2, 1, Ordering::lex),
                  LevelExceedsMoments);
}

TEST_CASE("matrix polynomial view reproduces the row polynomials") {
  MomentTable t = fixture_table(fixtures::splitting_factor());
  const int n = 2, m = 2;
  OrthoLevel lev = orthonormalize(t, n, m, Ordering::lex);
  MatrixPolyZ mp = matrix_poly_z(lev);
  REQUIRE((int)mp.A.size() == n + 1);
  const double pts[2][2] = {{0.4, 1.9}, {2.6, -0.8}};
  for (auto& pt : pts) {
    cplx z = std::polar(1.0, pt[0]), w = std::polar(1.0, pt[1]);
    Eigen::MatrixXcd Phi = eval_matrix_poly(mp, z);
    Eigen::VectorXcd wcol(m + 1);
    for (int i = 0; i <= m; ++i) wcol(i) = std::pow(w, m - i);
    Eigen::VectorXcd vals = Phi * wcol;
    std::vector<LaurentPoly> polys = level_polys(lev);
    for (int j = 0; j <= m; ++j) {
      CHECK(std::abs(vals(j) - polys[j].eval(z, w)) < 1e-12);
    }
  }
}

TEST_CASE("reversal and shift helpers act elementwise") {
  MomentTable t = fixture_table(fixtures::stable_factor(), 3, 3);
  OrthoLevel lev = orthonormalize(t, 1, 1, Ordering::lex);
  std::vector<LaurentPoly> polys = level_polys(lev);
  std::vector<LaurentPoly> rev = reversed_polys(polys, 1, 1);
  std::vector<LaurentPoly> sh = shifted_polys(polys, 2, -1);
  REQUIRE(rev.size() == polys.size());
  for (std::size_t i = 0; i < polys.size(); ++i) {
    CHECK(rev[i].diff_max(polys[i].reversed(1, 1)) == 0.0);
    CHECK(sh[i].diff_max(polys[i].shifted(2, -1)) == 0.0);
  }
}

TEST_CASE("two-point kernel identities hold on fixtures") {
  for (const LaurentPoly& f :
       {fixtures::splitting_factor(), fixtures::one_sided_factor(),
        fixtures::perturbed_one_sided_22()}) {
    MomentTable t = fixture_table(f);
    CDLevelSet ls = cd_levels(t, 2, 2);
    const double pts[3][4] = {{0.3, 1.7, 2.9, 0.8},
                              {1.1, 0.2, 1.9, 2.4},
                              {2.2, 2.8, 0.6, 1.4}};
    for (auto& pt : pts) {
      double r = cd_residual(ls, std::polar(1.0, pt[0]), std::polar(1.0, pt[1]),
                             std::polar(1.0, pt[2]), std::polar(1.0, pt[3]));
      CHECK(r < 1e-8);
    }
  }
}
