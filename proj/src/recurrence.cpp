#include "bicircle/recurrence.hpp"

#include <string>

#include "bicircle/errors.hpp"

namespace bicircle {

namespace {

// Max coefficient deviation of  sum_j M(i,j) polys[j]  from rhs[i] over i.
double combo_residual(const Eigen::MatrixXcd& M,
                      const std::vector<LaurentPoly>& polys,
                      const std::vector<LaurentPoly>& rhs) {
  double d = 0.0;
  for (int i = 0; i < M.rows(); ++i) {
    LaurentPoly acc;
    for (int j = 0; j < M.cols(); ++j) {
      acc = acc + polys[static_cast<std::size_t>(j)].scaled(M(i, j));
    }
    d = std::max(d, acc.diff_max(rhs[static_cast<std::size_t>(i)]));
  }
  return d;
}

std::vector<LaurentPoly> combo(const Eigen::MatrixXcd& M,
                               const std::vector<LaurentPoly>& polys) {
  std::vector<LaurentPoly> out;
  out.reserve(static_cast<std::size_t>(M.rows()));
  for (int i = 0; i < M.rows(); ++i) {
    LaurentPoly acc;
    for (int j = 0; j < M.cols(); ++j) {
      acc = acc + polys[static_cast<std::size_t>(j)].scaled(M(i, j));
    }
    out.push_back(acc);
  }
  return out;
}

std::vector<LaurentPoly> add_lists(const std::vector<LaurentPoly>& a,
                                   const std::vector<LaurentPoly>& b) {
  std::vector<LaurentPoly> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

std::vector<LaurentPoly> sub_lists(const std::vector<LaurentPoly>& a,
                                   const std::vector<LaurentPoly>& b) {
  std::vector<LaurentPoly> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

}  // namespace

RecurrenceSet compute_coefficients(const MomentTable& t, int n, int m) {
  if (n < 1 || m < 1) {
    throw InvalidInput("recurrence coefficients need level indices >= 1");
  }
  RecurrenceSet rs;
  rs.n = n;
  rs.m = m;
  rs.levels.P_nm = orthonormalize(t, n, m, Ordering::lex);
  rs.levels.P_n1m = orthonormalize(t, n - 1, m, Ordering::lex);
  rs.levels.P_nm1 = orthonormalize(t, n, m - 1, Ordering::lex);
  rs.levels.T_nm = orthonormalize(t, n, m, Ordering::revlex);
  rs.levels.T_n1m = orthonormalize(t, n - 1, m, Ordering::revlex);
  rs.levels.T_nm1 = orthonormalize(t, n, m - 1, Ordering::revlex);

  auto P = level_polys(rs.levels.P_nm);
  auto P1 = level_polys(rs.levels.P_n1m);
  auto Pm1 = level_polys(rs.levels.P_nm1);
  auto T = level_polys(rs.levels.T_nm);
  auto T1 = level_polys(rs.levels.T_n1m);
  auto Tm1 = level_polys(rs.levels.T_nm1);

  auto zP1 = shifted_polys(P1, 1, 0);
  auto revP1 = reversed_polys(P1, n - 1, m);
  auto wPm1 = shifted_polys(Pm1, 0, 1);
  auto revT1 = reversed_polys(T1, n - 1, m);
  auto revP = reversed_polys(P, n, m);
  auto wTm1 = shifted_polys(Tm1, 0, 1);
  auto revTm1 = reversed_polys(Tm1, n, m - 1);
  auto zT1 = shifted_polys(T1, 1, 0);
  auto revPm1 = reversed_polys(Pm1, n, m - 1);
  auto revT = reversed_polys(T, n, m);

  rs.Ehat = gram(t, zP1, revP1);
  rs.A = gram(t, zP1, P);
  rs.K = gram(t, Pm1, T1);
  rs.G = gram(t, Pm1, P);
  rs.K1 = gram(t, wPm1, revT1);
  rs.G1 = gram(t, wPm1, P);
  rs.I = gram(t, P, T);
  rs.I1 = gram(t, revP, T);

  rs.tEhat = gram(t, wTm1, revTm1);
  rs.tA = gram(t, wTm1, T);
  rs.tK = gram(t, T1, Pm1);
  rs.tG = gram(t, T1, T);
  rs.tK1 = gram(t, zT1, revPm1);
  rs.tG1 = gram(t, zT1, T);
  rs.tI = gram(t, T, P);
  rs.tI1 = gram(t, revT, P);
  return rs;
}

ResidualReport verify_recurrences(const MomentTable& t, int n, int m) {
  RecurrenceSet rs = compute_coefficients(t, n, m);

  auto P = level_polys(rs.levels.P_nm);
  auto P1 = level_polys(rs.levels.P_n1m);
  auto Pm1 = level_polys(rs.levels.P_nm1);
  auto T = level_polys(rs.levels.T_nm);
  auto T1 = level_polys(rs.levels.T_n1m);
  auto Tm1 = level_polys(rs.levels.T_nm1);

  auto zP1 = shifted_polys(P1, 1, 0);
  auto revP1 = reversed_polys(P1, n - 1, m);
  auto wPm1 = shifted_polys(Pm1, 0, 1);
  auto revT1 = reversed_polys(T1, n - 1, m);
  auto revP = reversed_polys(P, n, m);
  auto revPm1 = reversed_polys(Pm1, n, m - 1);
  auto wTm1 = shifted_polys(Tm1, 0, 1);
  auto revTm1 = reversed_polys(Tm1, n, m - 1);
  auto zT1 = shifted_polys(T1, 1, 0);
  auto revT = reversed_polys(T, n, m);

  ResidualReport rep;

  // A P = z P1 - Ehat rev(P1)
  rep.add("step_z",
          combo_residual(rs.A, P, sub_lists(zP1, combo(rs.Ehat, revP1))));
  // P + A^† Ehat A^{-T} rev(P) = A^† z P1
  {
    Eigen::MatrixXcd B =
        rs.A.adjoint() * rs.Ehat * rs.A.transpose().inverse();
    auto lhs = add_lists(P, combo(B, revP));
    rep.add("step_z_inverse",
            combo_residual(Eigen::MatrixXcd::Identity(m + 1, m + 1), lhs,
                           combo(rs.A.adjoint(), zP1)));
  }
  // G P = Pm1 - K T1
  rep.add("drop_w",
          combo_residual(rs.G, P, sub_lists(Pm1, combo(rs.K, T1))));
  // G1 P = w Pm1 - K1 rev(T1)
  rep.add("raise_w",
          combo_residual(rs.G1, P, sub_lists(wPm1, combo(rs.K1, revT1))));
  // P = I T + G^† Pm1
  rep.add("order_mix",
          combo_residual(Eigen::MatrixXcd::Identity(m + 1, m + 1), P,
                         add_lists(combo(rs.I, T),
                                   combo(rs.G.adjoint(), Pm1))));
  // rev(P) = I1 T + G1^T rev(Pm1)
  rep.add("order_mix_rev",
          combo_residual(Eigen::MatrixXcd::Identity(m + 1, m + 1), revP,
                         add_lists(combo(rs.I1, T),
                                   combo(rs.G1.transpose(), revPm1))));

  // Variable-swapped analogs.
  rep.add("step_z_t",
          combo_residual(rs.tA, T, sub_lists(wTm1, combo(rs.tEhat, revTm1))));
  {
    Eigen::MatrixXcd B =
        rs.tA.adjoint() * rs.tEhat * rs.tA.transpose().inverse();
    auto lhs = add_lists(T, combo(B, revT));
    rep.add("step_z_inverse_t",
            combo_residual(Eigen::MatrixXcd::Identity(n + 1, n + 1), lhs,
                           combo(rs.tA.adjoint(), wTm1)));
  }
  rep.add("drop_w_t",
          combo_residual(rs.tG, T, sub_lists(T1, combo(rs.tK, Pm1))));
  rep.add("raise_w_t",
          combo_residual(rs.tG1, T, sub_lists(zT1, combo(rs.tK1, revPm1))));
  rep.add("order_mix_t",
          combo_residual(Eigen::MatrixXcd::Identity(n + 1, n + 1), T,
                         add_lists(combo(rs.tI, P),
                                   combo(rs.tG.adjoint(), T1))));
  rep.add("order_mix_rev_t",
          combo_residual(Eigen::MatrixXcd::Identity(n + 1, n + 1), revT,
                         add_lists(combo(rs.tI1, P),
                                   combo(rs.tG1.transpose(), revT1))));
  return rep;
}

Eigen::MatrixXcd ehat_at(const MomentTable& t, int k, int l) {
  if (k < 1 || l < 0) {
    throw InvalidInput("z-step coupling needs k >= 1, l >= 0");
  }
  OrthoLevel lev = orthonormalize(t, k - 1, l, Ordering::lex);
  auto P = level_polys(lev);
  return gram(t, shifted_polys(P, 1, 0), reversed_polys(P, k - 1, l));
}

Eigen::MatrixXcd ehat_tilde_at(const MomentTable& t, int k, int l) {
  if (k < 0 || l < 1) {
    throw InvalidInput("w-step coupling needs k >= 0, l >= 1");
  }
  OrthoLevel lev = orthonormalize(t, k, l - 1, Ordering::revlex);
  auto T = level_polys(lev);
  return gram(t, shifted_polys(T, 0, 1), reversed_polys(T, k, l - 1));
}

Eigen::MatrixXcd step_matrix_at(const MomentTable& t, int k, int l) {
  if (k < 1 || l < 0) {
    throw InvalidInput("z-step matrix needs k >= 1, l >= 0");
  }
  auto Plo = level_polys(orthonormalize(t, k - 1, l, Ordering::lex));
  auto Phi = level_polys(orthonormalize(t, k, l, Ordering::lex));
  return gram(t, shifted_polys(Plo, 1, 0), Phi);
}

ResidualReport verify_identities(const MomentTable& t, int k, int l) {
  if (k < 1 || l < 1) {
    throw InvalidInput("coefficient identities need level indices >= 1");
  }
  RecurrenceSet lo = compute_coefficients(t, k, l);
  RecurrenceSet hi = compute_coefficients(t, k + 1, l);
  Eigen::MatrixXcd E_drop = ehat_at(t, k + 1, l - 1);
  Eigen::MatrixXcd A_drop = step_matrix_at(t, k + 1, l - 1);

  ResidualReport rep;
  // Product update for the swapped-ordering w-coupling across a z-step.
  {
    Eigen::MatrixXcd lhs = hi.tG1 * hi.tG.adjoint();
    Eigen::MatrixXcd rhs =
        lo.tG.adjoint() * lo.tG1 + lo.tI * hi.Ehat * lo.tI1.transpose() +
        hi.tK1 * A_drop.conjugate().inverse() * E_drop.adjoint() * A_drop *
            hi.K;
    rep.add("tilde_drop_product_update", (lhs - rhs).norm());
  }
  // Step coupling one w-level down, expressed through the level above.
  rep.add("refl_descent",
          (E_drop - (lo.G * hi.Ehat * lo.G1.transpose() +
                     lo.K * lo.K1.transpose()))
              .norm());
  // Mixed coupling propagation across the z-step.
  rep.add("cross_descent",
          (lo.G * hi.Ehat * lo.I1 - (A_drop * hi.K - lo.K * lo.tG1)).norm());
  rep.add("cross_w_descent",
          (lo.I.adjoint() * hi.Ehat * lo.G1.transpose() -
           (hi.K1.transpose() * A_drop.transpose() -
            lo.tG.adjoint() * lo.K1.transpose()))
              .norm());

  // The remaining identities hold when both gating couplings vanish.
  if (hi.Ehat.norm() <= 1e-8 && E_drop.norm() <= 1e-8) {
    rep.add("cross_orthogonality", (lo.K * lo.K1.transpose()).norm());
    rep.add("drop_product_invariance",
            (hi.tG1 * hi.tG.adjoint() - lo.tG.adjoint() * lo.tG1).norm());
    rep.add("cross_propagation", (hi.K - lo.K * lo.tG1).norm());
    rep.add("cross_w_propagation",
            (hi.K1.transpose() - lo.tG.adjoint() * lo.K1.transpose()).norm());
  }
  return rep;
}

EhatScan ehat_scan(const MomentTable& t, int k_lo, int k_hi, int l_lo,
                   int l_hi) {
  if (k_lo < 1 || l_lo < 1 || k_hi < k_lo || l_hi < l_lo) {
    throw InvalidInput("scan window must satisfy 1 <= k_lo <= k_hi, "
                       "1 <= l_lo <= l_hi");
  }
  EhatScan scan;
  scan.k_lo = k_lo;
  scan.k_hi = k_hi;
  scan.l_lo = l_lo;
  scan.l_hi = l_hi;
  scan.ehat_norm = Eigen::MatrixXd::Zero(k_hi - k_lo + 1, l_hi - l_lo + 1);
  scan.ehat_tilde_norm =
      Eigen::MatrixXd::Zero(k_hi - k_lo + 1, l_hi - l_lo + 1);
  for (int k = k_lo; k <= k_hi; ++k) {
    for (int l = l_lo; l <= l_hi; ++l) {
      scan.ehat_norm(k - k_lo, l - l_lo) = ehat_at(t, k, l).norm();
      scan.ehat_tilde_norm(k - k_lo, l - l_lo) =
          ehat_tilde_at(t, k, l).norm();
    }
  }
  return scan;
}

}  // namespace bicircle
