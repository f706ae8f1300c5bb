#include "bicircle/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace bicircle {
namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Rotates v so its largest-magnitude entry (ties: lowest index) is real
// and positive.
void phase_fix_column(Eigen::VectorXcd& v) {
  int best = -1;
  double best_abs = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    double a = std::abs(v(i));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (best < 0) return;
  v *= std::conj(v(best)) / best_abs;
}

// Extends the orthonormal columns of `given` (dim x k) to `total`
// orthonormal columns by two-pass Gram-Schmidt over the candidate columns
// (standard basis when none are supplied), keeping `given` in the leading
// positions.
Eigen::MatrixXcd complete_cols(int dim, const Eigen::MatrixXcd& given,
                               int total,
                               const Eigen::MatrixXcd* candidates = nullptr,
                               double thresh = 1e-7) {
  Eigen::MatrixXcd cand = candidates
                              ? *candidates
                              : Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(dim, dim));
  Eigen::MatrixXcd out(dim, total);
  int have = static_cast<int>(given.cols());
  if (have > total) throw InvalidInput("more basis columns given than requested");
  out.leftCols(have) = given;
  for (int c = 0; c < cand.cols() && have < total; ++c) {
    Eigen::VectorXcd v = cand.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < have; ++j) v -= out.col(j).dot(v) * out.col(j);
    }
    double nv = v.norm();
    if (nv > thresh) out.col(have++) = v / nv;
  }
  if (have < total) {
    throw StructureUnattainable(
        "orthonormal basis completion ran out of independent candidates");
  }
  return out;
}

// Conjugated z-profile of the w-constant part: e(z) = sum_k conj(f_{k,0}) z^{-k}.
LaurentPoly z_profile(const LaurentPoly& f) {
  LaurentPoly e;
  for (const auto& [key, c] : f.terms()) {
    if (key.second == 0) e.add_term(-key.first, 0, std::conj(c));
  }
  return e;
}

// Least-squares mixing matrix X with X * stack = target over the union of
// monomial supports; returns the max coefficient residual and stores
// |X X^dag - I| in *unitarity.
double rotation_residual(const std::vector<LaurentPoly>& stack,
                         const std::vector<LaurentPoly>& target,
                         double* unitarity) {
  std::map<std::pair<int, int>, int> keys;
  for (const auto& f : stack) {
    for (const auto& [k, c] : f.terms()) keys.emplace(k, 0);
  }
  for (const auto& f : target) {
    for (const auto& [k, c] : f.terms()) keys.emplace(k, 0);
  }
  int idx = 0;
  for (auto& kv : keys) kv.second = idx++;
  const int rows_a = static_cast<int>(stack.size());
  const int rows_b = static_cast<int>(target.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows_a, idx);
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(rows_b, idx);
  for (int i = 0; i < rows_a; ++i) {
    for (const auto& [k, c] : stack[i].terms()) A(i, keys.at(k)) = c;
  }
  for (int i = 0; i < rows_b; ++i) {
    for (const auto& [k, c] : target[i].terms()) B(i, keys.at(k)) = c;
  }
  Eigen::MatrixXcd Xt =
      A.transpose().completeOrthogonalDecomposition().solve(B.transpose());
  Eigen::MatrixXcd X = Xt.transpose();
  if (unitarity) {
    *unitarity = (X * X.adjoint() -
                  Eigen::MatrixXcd::Identity(rows_b, rows_b))
                     .norm();
  }
  if (idx == 0) return 0.0;
  return (X * A - B).cwiseAbs().maxCoeff();
}

}  // namespace

ConditionReport check_conditions(const RecurrenceSet& rs, double tol) {
  ConditionReport rep;
  rep.n = rs.n;
  rep.m = rs.m;
  rep.tol = tol;
  rep.scale = std::max({1.0, rs.K.norm(), rs.K1.norm()});

  Eigen::MatrixXcd step = rs.tG1 * rs.tG.adjoint();  // n x n
  Eigen::MatrixXcd P = rs.K;
  for (int j = 0; j < rs.n; ++j) {
    rep.residuals_mixed.push_back((P * rs.K1.transpose()).norm());
    P = P * step;
  }
  Eigen::MatrixXcd step_rev = rs.G1 * rs.G.adjoint();  // m x m
  Eigen::MatrixXcd Pr = rs.K.adjoint();
  for (int l = 0; l < rs.m; ++l) {
    rep.residuals_mixed_rev.push_back((Pr * rs.K1).norm());
    Pr = Pr * step_rev;
  }

  auto all_below = [&](const std::vector<double>& v) {
    for (double x : v) {
      if (x > tol * rep.scale) return false;
    }
    return true;
  };
  rep.one_sided_z = all_below(rep.residuals_mixed);
  rep.one_sided_w = all_below(rep.residuals_mixed_rev);
  rep.splitting = rep.one_sided_z && rep.one_sided_w;
  rep.stable = rs.K.norm() <= tol * rep.scale;
  rep.anti_stable = rs.K1.norm() <= tol * rep.scale;
  rep.tensor = rep.stable && rep.anti_stable;
  return rep;
}

void kernel_svd_align(FactorizationWork& work, const Eigen::MatrixXcd& K,
                      const Eigen::MatrixXcd& K1, double tol) {
  const int m = static_cast<int>(K.rows());
  const int n = static_cast<int>(K.cols());
  if (K1.rows() != m || K1.cols() != n) {
    throw InvalidInput("coupling kernels must share dimensions");
  }
  const double scale = std::max({1.0, K.norm(), K1.norm()});
  work.scale = scale;

  double mixed = (K * K1.transpose()).norm();
  work.diagnostics.emplace_back("kernel_mixed_product", mixed);
  if (mixed > tol * scale) {
    throw ConditionViolated("mixed kernel product norm " + num(mixed) +
                            " exceeds " + num(tol * scale) +
                            "; no one-sided factor exists at this level");
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svdK(K, Eigen::ComputeFullV);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svdK1(K1, Eigen::ComputeFullV);
  auto rank_of = [&](const Eigen::VectorXd& sv) {
    if (sv.size() == 0 || sv(0) <= tol * scale) return 0;
    double thr = std::max(m, n) * 1e-12 * sv(0);
    int r = 0;
    while (r < sv.size() && sv(r) > thr) ++r;
    return r;
  };
  const int r = rank_of(svdK.singularValues());
  const int r1 = rank_of(svdK1.singularValues());
  if (r + r1 > n) {
    throw RankOverflow("kernel ranks " + std::to_string(r) + " + " +
                       std::to_string(r1) + " exceed the level width " +
                       std::to_string(n));
  }
  work.r = r;
  work.r1 = r1;

  std::vector<Eigen::VectorXcd> vK(r), vK1(r1);
  for (int i = 0; i < r; ++i) {
    Eigen::VectorXcd v = svdK.matrixV().col(i);
    phase_fix_column(v);
    vK[i] = v;
  }
  for (int j = 0; j < r1; ++j) {
    Eigen::VectorXcd v = svdK1.matrixV().col(j);
    phase_fix_column(v);
    vK1[j] = v;
  }

  // Shared right unitary: row space of K leading, conjugated row space of
  // K1 trailing, orthonormal completion between.
  Eigen::MatrixXcd given(n, r + r1);
  for (int i = 0; i < r; ++i) given.col(i) = vK[i];
  for (int j = 0; j < r1; ++j) given.col(r + j) = vK1[j].conjugate();
  Eigen::MatrixXcd full = complete_cols(n, given, n);
  Eigen::MatrixXcd Ut(n, n);
  Ut.leftCols(r) = full.leftCols(r);
  Ut.rightCols(r1) = full.middleCols(r, r1);
  Ut.middleCols(r, n - r - r1) = full.rightCols(n - r - r1);
  work.Ut = Ut;

  const Eigen::VectorXd sK = svdK.singularValues();
  const Eigen::VectorXd sK1 = svdK1.singularValues();
  work.S = Eigen::MatrixXcd::Zero(m, n);
  for (int i = 0; i < r; ++i) work.S(i, i) = sK(i);
  work.S1 = Eigen::MatrixXcd::Zero(m, n);
  for (int j = 0; j < r1; ++j) work.S1(m - r1 + j, n - r1 + j) = sK1(j);

  Eigen::MatrixXcd uf(m, r), ul(m, r1);
  for (int i = 0; i < r; ++i) uf.col(i) = K * vK[i] / sK(i);
  for (int j = 0; j < r1; ++j) ul.col(j) = K1 * vK1[j] / sK1(j);

  double overlap = (K.adjoint() * K1).norm();
  work.diagnostics.emplace_back("kernel_left_overlap", overlap);
  if (overlap <= tol * scale) {
    // Orthogonal left ranges: one left unitary serves both kernels, with
    // the K range leading and the K1 range trailing.
    Eigen::MatrixXcd g(m, r + r1);
    g.leftCols(r) = uf;
    g.rightCols(r1) = ul;
    Eigen::MatrixXcd fullU = complete_cols(m, g, m);
    Eigen::MatrixXcd U(m, m);
    U.leftCols(r) = fullU.leftCols(r);
    U.rightCols(r1) = fullU.middleCols(r, r1);
    U.middleCols(r, m - r - r1) = fullU.rightCols(m - r - r1);
    work.U = U;
    work.U1 = U;
    work.diagnostics.emplace_back("single_left_unitary", 1.0);
  } else {
    work.U = complete_cols(m, uf, m);
    Eigen::MatrixXcd fullU1 = complete_cols(m, ul, m);
    Eigen::MatrixXcd U1(m, m);
    U1.rightCols(r1) = fullU1.leftCols(r1);
    U1.leftCols(m - r1) = fullU1.rightCols(m - r1);
    work.U1 = U1;
    work.diagnostics.emplace_back("single_left_unitary", 0.0);
  }

  double res = (work.U * work.S * Ut.adjoint() - K).norm();
  double res1 = (work.U1 * work.S1 * Ut.transpose() - K1).norm();
  work.diagnostics.emplace_back("alignment_residual", res);
  work.diagnostics.emplace_back("alignment_residual_rev", res1);
  if (res > 1e-9 * scale || res1 > 1e-9 * scale) {
    throw VerificationFailed(
        "aligned singular decomposition fails to reproduce the coupling "
        "kernels (residuals " +
        num(res) + ", " + num(res1) + ")");
  }
}

RotationResult invariant_subspace_rotation(const Eigen::MatrixXcd& G, int r,
                                           int r1, double tol) {
  const int n = static_cast<int>(G.rows());
  if (G.cols() != n || r < 0 || r1 < 0 || r + r1 > n) {
    throw InvalidInput("inconsistent rotation dimensions");
  }
  const double gscale = std::max(1.0, G.norm());
  RotationResult rot;

  if (r1 == 0) {
    rot.E = Eigen::MatrixXcd::Identity(n, n);
    rot.n1 = n;
    rot.n2 = 0;
    return rot;
  }
  if (r + r1 == n) {
    rot.E = Eigen::MatrixXcd::Identity(n, n);
    rot.n1 = n - r1;
    rot.n2 = r1;
    double off = G.topRightCorner(rot.n1, rot.n2).norm();
    if (off > tol * gscale) {
      throw StructureUnattainable(
          "trailing coordinates do not span an invariant subspace "
          "(off-block norm " +
          num(off) + ")");
    }
    return rot;
  }

  // Smallest invariant subspace containing the trailing r1 coordinates.
  Eigen::MatrixXcd W0 = Eigen::MatrixXcd::Zero(n, r1);
  for (int j = 0; j < r1; ++j) W0(n - r1 + j, j) = 1.0;
  Eigen::MatrixXcd B(n, n * r1);
  Eigen::MatrixXcd cur = W0;
  for (int p = 0; p < n; ++p) {
    B.middleCols(p * r1, r1) = cur;
    cur = G * cur;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B, Eigen::ComputeFullU);
  const Eigen::VectorXd& sv = svd.singularValues();
  int n2 = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++n2;
  }
  const int n1 = n - n2;
  Eigen::MatrixXcd QW = svd.matrixU().leftCols(n2);
  for (int i = 0; i < r; ++i) {
    if (QW.row(i).norm() > 10.0 * tol) {
      throw StructureUnattainable(
          "invariant subspace intrudes on the leading coordinates");
    }
  }
  if (n1 < r || n2 < r1) {
    throw StructureUnattainable("invariant splitting dimensions " +
                                std::to_string(n1) + " + " +
                                std::to_string(n2) +
                                " cannot hold the kernel ranks");
  }

  // Leading block: exact leading coordinates, completed inside the
  // orthogonal complement of the invariant subspace.
  Eigen::MatrixXcd proj =
      Eigen::MatrixXcd::Identity(n, n) - QW * QW.adjoint();
  Eigen::MatrixXcd lead = Eigen::MatrixXcd::Zero(n, r);
  for (int i = 0; i < r; ++i) lead(i, i) = 1.0;
  Eigen::MatrixXcd block1 = complete_cols(n, lead, n1, &proj);

  // Trailing block: the invariant subspace itself, ending in the exact
  // trailing coordinates.
  Eigen::MatrixXcd tail = Eigen::MatrixXcd::Zero(n, r1);
  for (int j = 0; j < r1; ++j) tail(n - r1 + j, j) = 1.0;
  Eigen::MatrixXcd inv = complete_cols(n, tail, n2, &QW);

  Eigen::MatrixXcd E(n, n);
  E.leftCols(n1) = block1;
  E.middleCols(n1, n2 - r1) = inv.rightCols(n2 - r1);
  E.rightCols(r1) = inv.leftCols(r1);

  double off = (E.adjoint() * G * E).topRightCorner(n1, n2).norm();
  if (off > 10.0 * tol * gscale) {
    throw StructureUnattainable(
        "rotated step operator is not block triangular (off-block norm " +
        num(off) + ")");
  }
  rot.E = E;
  rot.n1 = n1;
  rot.n2 = n2;
  return rot;
}

CompletionResult complete_unitary(const MomentTable& t, int n, int m,
                                  const Eigen::MatrixXcd& Ut, int n1,
                                  int n2) {
  if (n < 1 || m < 0) throw InvalidInput("completion requires n >= 1");
  if (Ut.rows() != n || Ut.cols() != n || n1 < 0 || n2 < 0 || n1 + n2 != n) {
    throw InvalidInput("rotation dimensions do not match the level");
  }
  OrthoLevel prev = orthonormalize(t, n - 1, m, Ordering::revlex);
  OrthoLevel fullv = orthonormalize(t, n, m, Ordering::revlex);
  std::vector<LaurentPoly> prev_polys = level_polys(prev);   // n rows
  std::vector<LaurentPoly> full_polys = level_polys(fullv);  // n + 1 rows

  // Rotated lower-level system; the co-invariant part is stepped by z.
  std::vector<LaurentPoly> entries(n);
  for (int i = 0; i < n; ++i) {
    LaurentPoly acc;
    for (int j = 0; j < n; ++j) {
      cplx cji = std::conj(Ut(j, i));
      if (cji != cplx(0.0)) acc = acc + prev_polys[j].scaled(cji);
    }
    entries[i] = (i < n1) ? acc.shifted(1, 0) : acc;
  }

  Eigen::MatrixXcd M(n, n + 1);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s <= n; ++s) {
      M(i, s) = inner_product(t, entries[i], full_polys[s]);
    }
  }
  double iso =
      (M * M.adjoint() - Eigen::MatrixXcd::Identity(n, n)).norm();
  if (iso > 1e-8) {
    throw NotIsometry("rotated system is not orthonormal (deviation " +
                      num(iso) + ")");
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(n - 1) < 1e-8) {
    throw NullSpaceDegenerate(
        "completion direction is not unique (rank-deficient row space)");
  }
  Eigen::VectorXcd v = svd.matrixV().col(n).conjugate();

  LaurentPoly psit;
  for (int s = 0; s <= n; ++s) psit = psit + full_polys[s].scaled(v(s));

  // Deterministic phase: the largest coefficient of the reversed
  // completion (ties: smallest (k, l)) becomes real and positive.
  LaurentPoly rev = psit.reversed(n, m);
  cplx best = 0.0;
  double best_abs = 0.0;
  for (const auto& [key, c] : rev.terms()) {
    double a = std::abs(c);
    if (a > best_abs) {
      best_abs = a;
      best = c;
    }
  }
  if (best_abs > 0.0) {
    cplx ph = best / best_abs;  // reversal conjugates the rotation
    v *= ph;
    psit = psit.scaled(ph);
  }

  Eigen::MatrixXcd Vt(n + 1, n + 1);
  Vt.row(0) = v.transpose();
  Vt.bottomRows(n) = M;
  double uni =
      (Vt * Vt.adjoint() - Eigen::MatrixXcd::Identity(n + 1, n + 1)).norm();
  if (uni > 1e-9) {
    throw VerificationFailed("completed transfer matrix is not unitary "
                             "(deviation " +
                             num(uni) + ")");
  }
  double cmax = 0.0;
  for (int i = 0; i < n; ++i) {
    LaurentPoly combo;
    for (int s = 0; s <= n; ++s) {
      combo = combo + full_polys[s].scaled(M(i, s));
    }
    cmax = std::max(cmax, combo.diff_max(entries[i]));
  }
  if (cmax > 1e-8) {
    throw VerificationFailed(
        "completed transfer matrix does not reproduce the rotated system "
        "(coefficient residual " +
        num(cmax) + ")");
  }

  CompletionResult res;
  res.Vt = Vt;
  res.psit = psit;
  return res;
}

LaurentPoly normalize_phase(const LaurentPoly& p) {
  cplx best = 0.0;
  double best_abs = 0.0;
  for (const auto& [key, c] : p.terms()) {
    double a = std::abs(c);
    if (a > best_abs) {
      best_abs = a;
      best = c;
    }
  }
  if (best_abs <= 0.0) return p;
  return p.scaled(best_abs / best);
}

double factor_cross_check(const LaurentPoly& p, int n, int m,
                          const OrthoLevel& lex_level) {
  if (lex_level.n != n || lex_level.m != m ||
      lex_level.ordering != Ordering::lex) {
    throw InvalidInput("cross-check level does not match the factor degree");
  }
  LaurentPoly lhs = p * z_profile(p);
  LaurentPoly rhs;
  for (const auto& phi : level_polys(lex_level)) {
    rhs = rhs + phi * z_profile(phi);
  }
  return lhs.diff_max(rhs);
}

LaurentPoly stable_case_factor(const RecurrenceSet& rs, double tol) {
  double scale = std::max({1.0, rs.K.norm(), rs.K1.norm()});
  if (rs.K.norm() > tol * scale) {
    throw NotStableCase("the w-coupling kernel does not vanish (norm " +
                        num(rs.K.norm()) + ")");
  }
  return row_poly(rs.levels.P_nm, 0).reversed(rs.n, rs.m);
}

double verify_norm_identity(const LevelSet& levels, const LaurentPoly& p,
                            int grid) {
  if (grid < 1) throw InvalidInput("grid must be positive");
  std::vector<LaurentPoly> pnm = level_polys(levels.P_nm);
  std::vector<LaurentPoly> pnm1 = level_polys(levels.P_nm1);
  std::vector<LaurentPoly> tnm = level_polys(levels.T_nm);
  std::vector<LaurentPoly> tn1m = level_polys(levels.T_n1m);
  double worst = 0.0;
  for (int a = 0; a < grid; ++a) {
    cplx z = std::polar(1.0, 2.0 * kPi * a / grid);
    for (int b = 0; b < grid; ++b) {
      cplx w = std::polar(1.0, 2.0 * kPi * b / grid);
      double lhs = std::norm(p.eval(z, w));
      double s_lex = 0.0, s_rev = 0.0;
      for (const auto& f : pnm) s_lex += std::norm(f.eval(z, w));
      for (const auto& f : pnm1) s_lex -= std::norm(f.eval(z, w));
      for (const auto& f : tnm) s_rev += std::norm(f.eval(z, w));
      for (const auto& f : tn1m) s_rev -= std::norm(f.eval(z, w));
      worst = std::max(
          {worst, std::abs(lhs - s_lex), std::abs(lhs - s_rev)});
    }
  }
  return worst;
}

double verify_factor_on_grid(const LaurentPoly& p, const LaurentPoly& Q,
                             int grid) {
  if (grid < 1) throw InvalidInput("grid must be positive");
  double worst = 0.0;
  for (int a = 0; a < grid; ++a) {
    cplx z = std::polar(1.0, 2.0 * kPi * a / grid);
    for (int b = 0; b < grid; ++b) {
      cplx w = std::polar(1.0, 2.0 * kPi * b / grid);
      double q = Q.eval(z, w).real();
      if (q <= 0.0) {
        throw NotPositive("reference density is not positive at a grid "
                          "point");
      }
      worst = std::max(worst, std::abs(std::norm(p.eval(z, w)) / q - 1.0));
    }
  }
  return worst;
}

FactorResult factor_one_sided(const WeightSpec& weight, int n, int m,
                              double tol, const QuadratureConfig& cfg,
                              ConditionReport* cond_out) {
  if (n < 1 || m < 1) {
    throw InvalidInput("factorization level requires n >= 1 and m >= 1");
  }
  MomentTable t = compute_moments(weight, n + 1, m + 1, cfg);
  if (weight.has_density() && !t.converged()) {
    throw NotConverged("moment quadrature did not converge at grid " +
                       std::to_string(t.grid_size()));
  }
  RecurrenceSet rs = compute_coefficients(t, n, m);
  ConditionReport cond = check_conditions(rs, tol);
  if (cond_out) *cond_out = cond;
  if (!cond.one_sided_z) {
    double worst = 0.0;
    for (double x : cond.residuals_mixed) worst = std::max(worst, x);
    throw ConditionViolated(
        "mixed kernel residuals do not vanish (max " + num(worst) +
        " against " + num(tol * cond.scale) +
        "); the weight admits no one-sided factor at this level");
  }

  FactorResult res;
  res.conditions = cond;
  FactorizationWork& work = res.work;
  work.n = n;
  work.m = m;
  work.tol = tol;
  work.scale = cond.scale;

  if (cond.stable) {
    res.p = stable_case_factor(rs, tol);
    res.used_stable_shortcut = true;
  } else {
    kernel_svd_align(work, rs.K, rs.K1, tol);
    work.G = work.Ut.adjoint() * (rs.tG1 * rs.tG.adjoint()) * work.Ut;
    RotationResult rot =
        invariant_subspace_rotation(work.G, work.r, work.r1, tol);
    work.E = rot.E;
    work.n1 = rot.n1;
    work.n2 = rot.n2;
    Eigen::MatrixXcd Ut2 = work.Ut * rot.E;
    CompletionResult comp = complete_unitary(t, n, m, Ut2, rot.n1, rot.n2);
    work.Vt = comp.Vt;
    work.psit = comp.psit;
    res.p = comp.psit.reversed(n, m);
  }

  double cross = factor_cross_check(res.p, n, m, rs.levels.P_nm);
  res.verification.emplace_back("cross_check", cross);
  if (cross > 1e-7) {
    throw CrossCheckFailed(
        "factor fails the independent coefficient cross-check (residual " +
        num(cross) + ")");
  }
  double nid = verify_norm_identity(rs.levels, res.p, 32);
  res.verification.emplace_back("norm_identity", nid);
  if (nid > 1e-6) {
    throw VerificationFailed(
        "factor modulus does not match the orthonormal norm difference "
        "(residual " +
        num(nid) + ")");
  }
  if (weight.has_density()) {
    double wp = verify_factor_on_grid(res.p, weight.reciprocal_density(), 64);
    res.verification.emplace_back("weight_product", wp);
    if (wp > 1e-6) {
      throw VerificationFailed(
          "factor modulus does not reproduce the weight (residual " +
          num(wp) + ")");
    }
  }
  double margin = 0.0;
  bool one_sided = one_sided_stable_z(res.p, 256, tol, &margin);
  res.verification.emplace_back("stability_margin", margin);
  if (!one_sided) {
    throw VerificationFailed(
        "factor fails the one-sided stability sweep (margin " + num(margin) +
        ")");
  }
  return res;
}

ResidualReport verify_splitting_structure(const WeightSpec& weight,
                                          const LaurentPoly& p,
                                          const LaurentPoly& q,
                                          const QuadratureConfig& cfg,
                                          int stability_grid) {
  if (p.is_zero() || q.is_zero()) {
    throw InvalidInput("splitting factors must be nonzero");
  }
  if (p.k_min() < 0 || p.l_min() < 0 || q.k_min() < 0 || q.l_min() < 0) {
    throw InvalidInput(
        "splitting factors must be polynomials without negative powers");
  }
  const int n1 = p.k_max(), m1 = p.l_max();
  const int n2 = q.k_max(), m2 = q.l_max();
  const int n = n1 + n2, m = m1 + m2;
  if (m < 1) {
    throw InvalidInput("splitting verification requires w-degree >= 1");
  }

  ResidualReport rep;
  double margin_p = 0.0, margin_q = 0.0;
  one_sided_stable_z(p, stability_grid, 0.0, &margin_p);
  one_sided_stable_z(q, stability_grid, 0.0, &margin_q);
  rep.add("stability_margin_p", margin_p);
  rep.add("stability_margin_q", margin_q);

  // Each candidate against its own reciprocal-mod-square systems: the top
  // row is the degree reversal, the lower rows nest the level below.
  struct OwnSystem {
    std::vector<LaurentPoly> full;   // level (nf, mf)
    std::vector<LaurentPoly> lower;  // level (nf, mf - 1), empty if mf == 0
  };
  auto own_system = [&](const LaurentPoly& f, int nf, int mf) {
    MomentTable tf = compute_moments(WeightSpec::mod_square(f), nf, mf, cfg);
    if (!tf.converged()) {
      throw NotConverged("moment quadrature for a candidate factor did not "
                         "converge");
    }
    OwnSystem sys;
    sys.full = level_polys(orthonormalize(tf, nf, mf, Ordering::lex));
    if (mf >= 1) {
      sys.lower = level_polys(orthonormalize(tf, nf, mf - 1, Ordering::lex));
    }
    return sys;
  };
  auto own_residuals = [&](const LaurentPoly& f, int nf, int mf,
                           const std::string& suffix) {
    OwnSystem sys = own_system(f, nf, mf);
    rep.add("top_row_matches_reversal_" + suffix,
            phase_align_max_diff(sys.full[0], f.reversed(nf, mf)));
    double drop = 0.0;
    for (int i = 0; i < mf; ++i) {
      drop = std::max(drop,
                      phase_align_max_diff(sys.full[i + 1], sys.lower[i]));
    }
    rep.add("lower_rows_drop_level_" + suffix, drop);
    return sys;
  };
  OwnSystem sys_p = own_residuals(p, n1, m1, "p");
  OwnSystem sys_q = own_residuals(q, n2, m2, "q");

  // The weight's own systems at the combined level.
  MomentTable tw = compute_moments(weight, n, m, cfg);
  if (weight.has_density() && !tw.converged()) {
    throw NotConverged("moment quadrature for the weight did not converge");
  }
  std::vector<LaurentPoly> target_mid =
      level_polys(orthonormalize(tw, n, m - 1, Ordering::lex));
  std::vector<LaurentPoly> target_full =
      level_polys(orthonormalize(tw, n, m, Ordering::lex));

  // Candidate stacks built from the two factors: the second factor enters
  // through z -> 1/z (padded to degree n2) and its system rows through the
  // conjugate flip of w completed back to polynomial degrees.
  LaurentPoly zq = q.z_reflected(n2);
  LaurentPoly rp = p.reversed(n1, m1);

  std::vector<LaurentPoly> stack_mid;
  for (const auto& row : sys_p.lower) stack_mid.push_back(zq * row);
  for (const auto& row : sys_q.lower) {
    stack_mid.push_back(rp * row.conj_flip_w().shifted(0, m2 - 1));
  }
  std::vector<LaurentPoly> stack_full;
  stack_full.push_back(rp * zq);
  for (const auto& row : sys_p.lower) stack_full.push_back(zq * row);
  for (const auto& row : sys_q.lower) {
    stack_full.push_back(rp * row.conj_flip_w().shifted(0, m2));
  }

  double uni_mid = 0.0;
  rep.add("mixed_level_rotation",
          rotation_residual(stack_mid, target_mid, &uni_mid));
  rep.add("mixed_level_rotation_unitarity", uni_mid);
  double uni_full = 0.0;
  rep.add("full_level_rotation",
          rotation_residual(stack_full, target_full, &uni_full));
  rep.add("full_level_rotation_unitarity", uni_full);
  return rep;
}

}  // namespace bicircle
