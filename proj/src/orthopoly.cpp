#include "bicircle/orthopoly.hpp"

#include <string>

#include "bicircle/errors.hpp"

namespace bicircle {

OrthoLevel orthonormalize(const MomentTable& t, int n, int m, Ordering ord) {
  if (n < 0 || m < 0) throw InvalidInput("level indices must be >= 0");
  if (n > t.max_k() || m > t.max_l()) {
    throw LevelExceedsMoments("level (" + std::to_string(n) + ", " +
                              std::to_string(m) +
                              ") exceeds the moment table box");
  }
  int D = (n + 1) * (m + 1);

  // Gram matrix over ascending monomials; ascending position a corresponds
  // to descending position D-1-a.
  Eigen::MatrixXcd G(D, D);
  for (int r = 0; r < D; ++r) {
    auto [kr, lr] = descending_monomial(n, m, ord, D - 1 - r);
    for (int c = 0; c < D; ++c) {
      auto [kc, lc] = descending_monomial(n, m, ord, D - 1 - c);
      G(r, c) = t.moment(kc - kr, lc - lr);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G,
                                                     Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0 && lo > 1e-10 * hi)) {
    throw NotPositiveDefinite(
        "moment matrix at level (" + std::to_string(n) + ", " +
        std::to_string(m) + ") is numerically singular or indefinite");
  }

  Eigen::LLT<Eigen::MatrixXcd> llt(G);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("Cholesky factorization failed at level (" +
                              std::to_string(n) + ", " + std::to_string(m) +
                              ")");
  }
  Eigen::MatrixXcd L = llt.matrixL();
  Eigen::MatrixXcd W = L.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXcd::Identity(D, D));

  // Row j of W (expressed over ascending monomials) is the orthonormal
  // polynomial with leading ascending monomial j. Flipping both indices
  // reorders everything to descending-monomial rows, top polynomial first.
  int rows = (ord == Ordering::lex) ? m + 1 : n + 1;
  OrthoLevel lev;
  lev.n = n;
  lev.m = m;
  lev.ordering = ord;
  lev.coeffs = Eigen::MatrixXcd::Zero(rows, D);
  lev.pivots = Eigen::VectorXd::Zero(rows);
  for (int j = 0; j < rows; ++j) {
    for (int td = 0; td < D; ++td) {
      lev.coeffs(j, td) = W(D - 1 - j, D - 1 - td);
    }
    lev.pivots(j) = lev.coeffs(j, j).real();
  }
  return lev;
}

LaurentPoly row_poly(const OrthoLevel& lev, int row) {
  if (row < 0 || row >= lev.coeffs.rows()) {
    throw InvalidInput("orthonormal level row out of range");
  }
  LaurentPoly p;
  for (int td = 0; td < lev.coeffs.cols(); ++td) {
    cplx v = lev.coeffs(row, td);
    if (v != cplx(0.0)) {
      auto [k, l] = descending_monomial(lev.n, lev.m, lev.ordering, td);
      p.set_coeff(k, l, v);
    }
  }
  return p;
}

std::vector<LaurentPoly> level_polys(const OrthoLevel& lev) {
  std::vector<LaurentPoly> out;
  out.reserve(static_cast<std::size_t>(lev.coeffs.rows()));
  for (int j = 0; j < lev.coeffs.rows(); ++j) out.push_back(row_poly(lev, j));
  return out;
}

std::vector<LaurentPoly> reversed_polys(const std::vector<LaurentPoly>& polys,
                                        int n, int m) {
  std::vector<LaurentPoly> out;
  out.reserve(polys.size());
  for (const auto& p : polys) out.push_back(p.reversed(n, m));
  return out;
}

std::vector<LaurentPoly> shifted_polys(const std::vector<LaurentPoly>& polys,
                                       int dk, int dl) {
  std::vector<LaurentPoly> out;
  out.reserve(polys.size());
  for (const auto& p : polys) out.push_back(p.shifted(dk, dl));
  return out;
}

Eigen::MatrixXcd gram(const MomentTable& t, const std::vector<LaurentPoly>& F,
                      const std::vector<LaurentPoly>& G) {
  Eigen::MatrixXcd M(static_cast<Eigen::Index>(F.size()),
                     static_cast<Eigen::Index>(G.size()));
  for (std::size_t i = 0; i < F.size(); ++i) {
    for (std::size_t j = 0; j < G.size(); ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          inner_product(t, F[i], G[j]);
    }
  }
  return M;
}

MatrixPolyZ matrix_poly_z(const OrthoLevel& lev) {
  if (lev.ordering != Ordering::lex) {
    throw InvalidInput("matrix polynomial view requires a lex level");
  }
  MatrixPolyZ mp;
  mp.n = lev.n;
  mp.m = lev.m;
  mp.A.assign(static_cast<std::size_t>(lev.n + 1),
              Eigen::MatrixXcd::Zero(lev.m + 1, lev.m + 1));
  for (int k = 0; k <= lev.n; ++k) {
    for (int j = 0; j <= lev.m; ++j) {
      for (int s = 0; s <= lev.m; ++s) {
        mp.A[static_cast<std::size_t>(k)](j, s) =
            lev.coeffs(j, (lev.n - k) * (lev.m + 1) + s);
      }
    }
  }
  return mp;
}

Eigen::MatrixXcd eval_matrix_poly(const MatrixPolyZ& mp, cplx z) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(mp.m + 1, mp.m + 1);
  cplx zk = 1.0;
  for (std::size_t k = 0; k < mp.A.size(); ++k) {
    acc += mp.A[k] * zk;
    zk *= z;
  }
  return acc;
}

CDLevelSet cd_levels(const MomentTable& t, int n, int m) {
  if (n < 1 || m < 1) {
    throw InvalidInput("kernel identities need level indices >= 1");
  }
  CDLevelSet ls;
  ls.n = n;
  ls.m = m;
  ls.lex_nm = orthonormalize(t, n, m, Ordering::lex);
  ls.lex_nm1 = orthonormalize(t, n, m - 1, Ordering::lex);
  ls.rev_nm = orthonormalize(t, n, m, Ordering::revlex);
  ls.rev_n1m = orthonormalize(t, n - 1, m, Ordering::revlex);
  return ls;
}

namespace {
// sum_s f_s(z, w) * conj(f_s(z1, w1))
cplx kernel_sum(const std::vector<LaurentPoly>& polys, cplx z, cplx w, cplx z1,
                cplx w1) {
  cplx acc = 0.0;
  for (const auto& f : polys) acc += f.eval(z, w) * std::conj(f.eval(z1, w1));
  return acc;
}
}  // namespace

double cd_residual(const CDLevelSet& ls, cplx z, cplx w, cplx z1, cplx w1) {
  auto P = level_polys(ls.lex_nm);
  auto Pm1 = level_polys(ls.lex_nm1);
  auto T = level_polys(ls.rev_nm);
  auto T1 = level_polys(ls.rev_n1m);
  auto revT = reversed_polys(T, ls.n, ls.m);
  auto revT1 = reversed_polys(T1, ls.n - 1, ls.m);

  cplx ww = w * std::conj(w1);
  cplx lhs1 = kernel_sum(revT, z, w, z1, w1) - kernel_sum(revT1, z, w, z1, w1) -
              ww * (kernel_sum(T, z, w, z1, w1) -
                    kernel_sum(T1, z, w, z1, w1));
  cplx rhs1 = (1.0 - ww) * kernel_sum(P, z, w, z1, w1);

  cplx lhs2 = kernel_sum(P, z, w, z1, w1) - kernel_sum(Pm1, z, w, z1, w1);
  cplx rhs2 = kernel_sum(T, z, w, z1, w1) - kernel_sum(T1, z, w, z1, w1);

  return std::max(std::abs(lhs1 - rhs1), std::abs(lhs2 - rhs2));
}

}  // namespace bicircle
