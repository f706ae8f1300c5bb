#include "bicircle/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bicircle/errors.hpp"

namespace bicircle {

namespace {

constexpr double kPi = 3.14159265358979323846;

int next_pow2(int v) {
  int p = 1;
  while (p < v) p *= 2;
  return p;
}

// chat[j], j = 0..L, on an N-point grid; min squared slice modulus out.
std::vector<cplx> circle_pass(const std::vector<cplx>& slice, int offset,
                              int L, int N, double* min_val) {
  std::vector<double> vals(static_cast<std::size_t>(N));
  double mn = std::numeric_limits<double>::infinity();
  for (int j = 0; j < N; ++j) {
    double phi = 2.0 * kPi * j / N;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < slice.size(); ++i) {
      acc += slice[i] * std::polar(1.0, phi * (offset + static_cast<int>(i)));
    }
    vals[static_cast<std::size_t>(j)] = std::norm(acc);
    mn = std::min(mn, vals[static_cast<std::size_t>(j)]);
  }
  *min_val = mn;
  if (!(mn > 0.0)) {
    throw NotPositive("slice weight vanishes on the circle grid");
  }
  std::vector<cplx> chat(static_cast<std::size_t>(L + 1), cplx(0.0));
  for (int l = 0; l <= L; ++l) {
    cplx acc = 0.0;
    for (int j = 0; j < N; ++j) {
      double phi = 2.0 * kPi * j / N;
      acc += std::polar(1.0, -l * phi) / vals[static_cast<std::size_t>(j)];
    }
    chat[static_cast<std::size_t>(l)] = acc / static_cast<double>(N);
  }
  return chat;
}

// Univariate inner product <w^i, w^j> = chat_{j-i}.
Eigen::MatrixXcd uni_gram(const ParametricFunctional& pf, int l) {
  Eigen::MatrixXcd G(l + 1, l + 1);
  for (int i = 0; i <= l; ++i) {
    for (int j = 0; j <= l; ++j) G(i, j) = pf.value(j - i);
  }
  return G;
}

}  // namespace

cplx ParametricFunctional::value(int j) const {
  if (std::abs(j) > max_l) {
    throw SupportExceeded("parametric moment " + std::to_string(j) +
                          " outside the stored range " +
                          std::to_string(max_l));
  }
  if (j >= 0) return chat[static_cast<std::size_t>(j)];
  return std::conj(chat[static_cast<std::size_t>(-j)]);
}

ParametricFunctional parametric_moments(const LaurentPoly& p, double theta,
                                        int L, const QuadratureConfig& cfg) {
  if (L < 0) throw InvalidInput("parametric moment order must be >= 0");
  if (p.is_zero()) throw InvalidInput("factor polynomial is zero");
  std::vector<cplx> slice = p.w_slice(theta);
  int offset = p.l_min();
  int span = p.l_max() - p.l_min();

  ParametricFunctional pf;
  pf.theta = theta;
  pf.max_l = L;
  int N = next_pow2(std::max(cfg.initial_grid, 2 * (std::max(L, 2 * span) + 1)));
  if (N > cfg.max_grid) {
    throw InvalidInput("quadrature grid cap below the minimum usable grid");
  }
  double mn = 0.0;
  std::vector<cplx> prev = circle_pass(slice, offset, L, N, &mn);
  for (int N2 = 2 * N; N2 <= cfg.max_grid; N2 *= 2) {
    std::vector<cplx> cur = circle_pass(slice, offset, L, N2, &mn);
    double d = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      d = std::max(d, std::abs(cur[i] - prev[i]));
    }
    if (d <= cfg.tol) {
      pf.chat = std::move(cur);
      pf.grid = N2;
      pf.converged = true;
      return pf;
    }
    prev = std::move(cur);
    N = N2;
  }
  pf.chat = std::move(prev);
  pf.grid = N;
  pf.converged = false;
  return pf;
}

Eigen::MatrixXcd toeplitz_matrix(const ParametricFunctional& pf, int l) {
  if (l < 0) throw InvalidInput("Toeplitz order must be >= 0");
  Eigen::MatrixXcd C(l + 1, l + 1);
  for (int i = 0; i <= l; ++i) {
    for (int j = 0; j <= l; ++j) C(i, j) = pf.value(i - j);
  }
  return C;
}

Eigen::VectorXcd univariate_phi(const ParametricFunctional& pf, int l) {
  if (l < 0) throw InvalidInput("polynomial degree must be >= 0");
  Eigen::MatrixXcd G = uni_gram(pf, l);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G,
                                                     Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0 && lo > 1e-10 * hi)) {
    throw NotPositiveDefinite(
        "parametric moment matrix is numerically singular or indefinite");
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(G);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("parametric Cholesky factorization failed");
  }
  Eigen::MatrixXcd L = llt.matrixL();
  Eigen::MatrixXcd W = L.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXcd::Identity(l + 1, l + 1));
  return W.row(l).transpose();
}

Eigen::MatrixXcd gohberg_semencul_inverse(const Eigen::VectorXcd& phi,
                                          int l) {
  if (phi.size() != l + 1 || l < 1) {
    throw InvalidInput("expected the l+1 ascending coefficients with l >= 1");
  }
  // Reversal coefficients r_j = conj(a_{l-j}).
  Eigen::VectorXcd r(l + 1);
  for (int j = 0; j <= l; ++j) r(j) = std::conj(phi(l - j));

  Eigen::MatrixXcd T1 = Eigen::MatrixXcd::Zero(l, l);
  Eigen::MatrixXcd T2 = Eigen::MatrixXcd::Zero(l, l);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j <= i; ++j) {
      T1(i, j) = r(i - j);
      T2(i, j) = std::conj(r(l - (i - j)));
    }
  }
  return T1 * T1.adjoint() - T2 * T2.adjoint();
}

ResidualReport parametric_ortho_check(const LaurentPoly& p,
                                      const OrthoLevel& lex_level,
                                      double theta,
                                      const QuadratureConfig& cfg) {
  if (lex_level.ordering != Ordering::lex) {
    throw InvalidInput("parametric check requires a lex level");
  }
  int m = lex_level.m;
  ParametricFunctional pf = parametric_moments(p, theta, 2 * m + 2, cfg);

  // Slice coefficient vectors (ascending in w, starting at power 0).
  auto slice_of = [&](const LaurentPoly& f) {
    std::vector<cplx> s = f.w_slice(theta);
    if (f.l_min() < 0) throw InvalidInput("slice polynomial has negative powers");
    std::vector<cplx> out(static_cast<std::size_t>(f.l_max() + 1), cplx(0.0));
    for (std::size_t i = 0; i < s.size(); ++i) {
      out[static_cast<std::size_t>(f.l_min()) + i] = s[i];
    }
    return out;
  };
  auto inner = [&](const std::vector<cplx>& f, const std::vector<cplx>& g) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        acc += f[i] * std::conj(g[j]) *
               pf.value(static_cast<int>(j) - static_cast<int>(i));
      }
    }
    return acc;
  };

  std::vector<cplx> ps = slice_of(p);
  std::vector<cplx> rev = slice_of(p.reversed_in_w(m));

  ResidualReport rep;
  double d = 0.0;
  for (int j = 1; j <= m; ++j) {
    std::vector<cplx> mono(static_cast<std::size_t>(j + 1), cplx(0.0));
    mono.back() = 1.0;
    d = std::max(d, std::abs(inner(ps, mono)));
  }
  rep.add("slice_orthogonal_to_positive_powers", d);
  d = 0.0;
  for (int j = 0; j < m; ++j) {
    std::vector<cplx> mono(static_cast<std::size_t>(j + 1), cplx(0.0));
    mono.back() = 1.0;
    d = std::max(d, std::abs(inner(rev, mono)));
  }
  rep.add("reversal_orthogonal_to_low_powers", d);
  rep.add("slice_unit_norm", std::abs(inner(ps, ps) - 1.0));
  rep.add("reversal_unit_norm", std::abs(inner(rev, rev) - 1.0));

  // The reversal coincides with the top orthonormal polynomial up to phase.
  {
    Eigen::VectorXcd top = univariate_phi(pf, m);
    cplx overlap = 0.0;
    for (int i = 0; i <= m; ++i) {
      if (static_cast<std::size_t>(i) < rev.size())
        overlap += top(i) * std::conj(rev[static_cast<std::size_t>(i)]);
    }
    cplx phase = std::abs(overlap) > 1e-300 ? overlap / std::abs(overlap)
                                            : cplx(1.0);
    double dd = 0.0;
    for (int i = 0; i <= m; ++i) {
      cplx rv = static_cast<std::size_t>(i) < rev.size()
                    ? rev[static_cast<std::size_t>(i)]
                    : cplx(0.0);
      dd = std::max(dd, std::abs(phase * rv - top(i)));
    }
    rep.add("reversal_matches_top_orthonormal", dd);
  }

  // Toeplitz moment matrix as the inverse of the matrix-polynomial Gram.
  {
    MatrixPolyZ mp = matrix_poly_z(lex_level);
    Eigen::MatrixXcd F = eval_matrix_poly(mp, std::polar(1.0, theta));
    Eigen::MatrixXcd lhs = toeplitz_matrix(pf, m);
    Eigen::MatrixXcd rhs = (F.adjoint() * F).inverse();
    rep.add("toeplitz_inverse_identity", (lhs - rhs).norm());
  }
  return rep;
}

}  // namespace bicircle
