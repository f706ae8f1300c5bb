#include "bicircle/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bicircle/errors.hpp"
#include "bicircle/parallel.hpp"

namespace bicircle {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Compensated (Kahan) accumulator for complex sums; keeps stage results
// independent of summation batching only insofar as the order is fixed,
// which the callers guarantee.
struct KahanC {
  double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
  void add(cplx v) {
    double yr = v.real() - cr;
    double tr = sr + yr;
    cr = (tr - sr) - yr;
    sr = tr;
    double yi = v.imag() - ci;
    double ti = si + yi;
    ci = (ti - si) - yi;
    si = ti;
  }
  cplx value() const { return {sr, si}; }
};

int imod(long long a, int N) {
  int r = static_cast<int>(a % N);
  return r < 0 ? r + N : r;
}

int next_pow2(int v) {
  int p = 1;
  while (p < v) p *= 2;
  return p;
}

// One quadrature pass on the N x N grid: partial DFT of 1/Q restricted to
// the (K, L) frequency box. Stage 1 transforms each grid row independently
// (parallel, one thread per row, serial compensated inner loop); stage 2 is
// a serial fixed-order reduction over rows. Both stages are therefore
// bit-reproducible for any thread count.
MomentTable quadrature_pass(const LaurentPoly& Q, int K, int L, int N) {
  std::vector<cplx> tw(static_cast<std::size_t>(N));
  for (int r = 0; r < N; ++r) {
    tw[static_cast<std::size_t>(r)] = std::polar(1.0, -2.0 * kPi * r / N);
  }

  // Group the weight-denominator terms by z-power and evaluate each group's
  // w-profile on the grid once: rowv[k][j'] = sum_l q_{k,l} e^{+i l phi_j'}.
  int kq_lo = Q.k_min(), kq_hi = Q.k_max();
  int nk = kq_hi - kq_lo + 1;
  std::vector<std::vector<cplx>> rowv(
      static_cast<std::size_t>(nk),
      std::vector<cplx>(static_cast<std::size_t>(N), cplx(0.0)));
  for (const auto& [key, val] : Q.terms()) {
    auto& row = rowv[static_cast<std::size_t>(key.first - kq_lo)];
    for (int j = 0; j < N; ++j) {
      row[static_cast<std::size_t>(j)] +=
          val * std::conj(tw[static_cast<std::size_t>(
                    imod(static_cast<long long>(key.second) * j, N))]);
    }
  }

  int nl = 2 * L + 1;
  std::vector<cplx> stage1(static_cast<std::size_t>(N) * nl, cplx(0.0));
  std::vector<double> row_min_re(static_cast<std::size_t>(N), 0.0);

  parallel_for(0, N, [&](int j) {
    std::vector<cplx> inv(static_cast<std::size_t>(N));
    double min_re = std::numeric_limits<double>::infinity();
    for (int jp = 0; jp < N; ++jp) {
      cplx q = 0.0;
      for (int ik = 0; ik < nk; ++ik) {
        cplx zk = std::conj(tw[static_cast<std::size_t>(
            imod(static_cast<long long>(kq_lo + ik) * j, N))]);
        q += zk * rowv[static_cast<std::size_t>(ik)][static_cast<std::size_t>(jp)];
      }
      min_re = std::min(min_re, q.real());
      inv[static_cast<std::size_t>(jp)] = 1.0 / q;
    }
    row_min_re[static_cast<std::size_t>(j)] = min_re;
    for (int l = -L; l <= L; ++l) {
      KahanC acc;
      for (int jp = 0; jp < N; ++jp) {
        acc.add(tw[static_cast<std::size_t>(
                    imod(static_cast<long long>(l) * jp, N))] *
                inv[static_cast<std::size_t>(jp)]);
      }
      stage1[static_cast<std::size_t>(j) * nl + (l + L)] = acc.value();
    }
  });

  double min_re = *std::min_element(row_min_re.begin(), row_min_re.end());
  if (!(min_re > 0.0)) {
    throw NotPositive("weight denominator is not strictly positive on the " +
                      std::to_string(N) + "x" + std::to_string(N) +
                      " grid (min real part " + std::to_string(min_re) + ")");
  }

  MomentTable out(K, L);
  double inv_n2 = 1.0 / (static_cast<double>(N) * N);
  for (int k = 0; k <= K; ++k) {
    for (int l = (k == 0 ? 0 : -L); l <= L; ++l) {
      KahanC acc;
      for (int j = 0; j < N; ++j) {
        acc.add(tw[static_cast<std::size_t>(
                    imod(static_cast<long long>(k) * j, N))] *
                stage1[static_cast<std::size_t>(j) * nl + (l + L)]);
      }
      out.set(k, l, acc.value() * inv_n2);
    }
  }
  out.set_provenance(N, false);
  return out;
}

}  // namespace

MomentTable::MomentTable(int K, int L) : K_(K), L_(L) {
  if (K < 0 || L < 0) throw InvalidInput("moment table orders must be >= 0");
  data_.assign(static_cast<std::size_t>(L + 1) +
                   static_cast<std::size_t>(K) * (2 * L + 1),
               cplx(0.0));
}

std::size_t MomentTable::index(int k, int l) const {
  if (k == 0) return static_cast<std::size_t>(l);
  return static_cast<std::size_t>(L_ + 1) +
         static_cast<std::size_t>(k - 1) * (2 * L_ + 1) +
         static_cast<std::size_t>(l + L_);
}

bool MomentTable::contains(int k, int l) const {
  return std::abs(k) <= K_ && std::abs(l) <= L_;
}

cplx MomentTable::moment(int k, int l) const {
  if (!contains(k, l)) {
    throw SupportExceeded("moment (" + std::to_string(k) + ", " +
                          std::to_string(l) + ") outside the stored box (" +
                          std::to_string(K_) + ", " + std::to_string(L_) + ")");
  }
  if (k < 0 || (k == 0 && l < 0)) return std::conj(data_[index(-k, -l)]);
  return data_[index(k, l)];
}

void MomentTable::set(int k, int l, cplx v) {
  if (!contains(k, l) || k < 0 || (k == 0 && l < 0)) {
    throw InvalidInput("moment assignment outside the stored half-table");
  }
  data_[index(k, l)] = v;
}

double MomentTable::diff_max(const MomentTable& o) const {
  double d = 0.0;
  for (int k = 0; k <= std::min(K_, o.K_); ++k) {
    for (int l = (k == 0 ? 0 : -std::min(L_, o.L_)); l <= std::min(L_, o.L_);
         ++l) {
      d = std::max(d, std::abs(moment(k, l) - o.moment(k, l)));
    }
  }
  return d;
}

WeightSpec WeightSpec::mod_square(const LaurentPoly& p) {
  if (p.is_zero()) throw InvalidInput("factor polynomial is zero");
  return WeightSpec(WeightKind::reciprocal_mod_square, p, {});
}

WeightSpec WeightSpec::trig_poly(const LaurentPoly& Q) {
  if (Q.is_zero()) throw InvalidInput("weight denominator is zero");
  if (!Q.is_hermitian(1e-10)) {
    throw InvalidInput(
        "weight denominator is not Hermitian-symmetric (Q != conj(Q)(1/z,1/w))");
  }
  return WeightSpec(WeightKind::reciprocal_trig_poly, Q, {});
}

WeightSpec WeightSpec::explicit_moments(const MomentTable& table) {
  return WeightSpec(WeightKind::explicit_moments, LaurentPoly(), {table});
}

const MomentTable& WeightSpec::table() const {
  if (kind_ != WeightKind::explicit_moments) {
    throw InvalidInput("weight has no explicit moment table");
  }
  return table_.front();
}

LaurentPoly WeightSpec::reciprocal_density() const {
  switch (kind_) {
    case WeightKind::reciprocal_mod_square:
      return poly_.herm_square();
    case WeightKind::reciprocal_trig_poly:
      return poly_;
    default:
      throw InvalidInput("explicit-moment weight has no density");
  }
}

MomentTable compute_moments(const WeightSpec& weight, int K, int L,
                            const QuadratureConfig& cfg) {
  if (K < 0 || L < 0) throw InvalidInput("moment orders must be >= 0");
  if (weight.kind() == WeightKind::explicit_moments) {
    const MomentTable& src = weight.table();
    if (src.max_k() < K || src.max_l() < L) {
      throw LevelExceedsMoments(
          "explicit moment table covers (" + std::to_string(src.max_k()) +
          ", " + std::to_string(src.max_l()) + "), need (" +
          std::to_string(K) + ", " + std::to_string(L) + ")");
    }
    MomentTable out(K, L);
    for (int k = 0; k <= K; ++k) {
      for (int l = (k == 0 ? 0 : -L); l <= L; ++l) {
        out.set(k, l, src.moment(k, l));
      }
    }
    out.set_provenance(src.grid_size(), src.converged());
    return out;
  }

  LaurentPoly Q = weight.reciprocal_density();
  int min_grid = next_pow2(std::max(
      {cfg.initial_grid, 2 * (std::max(K, L) + 1),
       2 * (std::max({std::abs(Q.k_min()), Q.k_max(), std::abs(Q.l_min()),
                      Q.l_max()}) +
            1)}));
  if (min_grid > cfg.max_grid) {
    throw InvalidInput("quadrature grid cap below the minimum usable grid");
  }
  MomentTable prev = quadrature_pass(Q, K, L, min_grid);
  for (int N = 2 * min_grid; N <= cfg.max_grid; N *= 2) {
    MomentTable cur = quadrature_pass(Q, K, L, N);
    if (prev.diff_max(cur) <= cfg.tol) {
      cur.set_provenance(N, true);
      return cur;
    }
    prev = cur;
  }
  return prev;  // converged flag stays false; caller decides how to react
}

MomentTable compute_moments_reference(const LaurentPoly& Q, int K, int L,
                                      int grid) {
  if (grid < 2) throw InvalidInput("reference grid too small");
  int N = grid;
  std::vector<cplx> inv(static_cast<std::size_t>(N) * N);
  double min_re = std::numeric_limits<double>::infinity();
  for (int j = 0; j < N; ++j) {
    double theta = 2.0 * kPi * j / N;
    for (int jp = 0; jp < N; ++jp) {
      double phi = 2.0 * kPi * jp / N;
      cplx q = Q.eval(std::polar(1.0, theta), std::polar(1.0, phi));
      min_re = std::min(min_re, q.real());
      inv[static_cast<std::size_t>(j) * N + jp] = 1.0 / q;
    }
  }
  if (!(min_re > 0.0)) {
    throw NotPositive("weight denominator is not strictly positive on the " +
                      std::to_string(N) + "x" + std::to_string(N) + " grid");
  }
  MomentTable out(K, L);
  for (int k = 0; k <= K; ++k) {
    for (int l = (k == 0 ? 0 : -L); l <= L; ++l) {
      cplx acc = 0.0;
      for (int j = 0; j < N; ++j) {
        double theta = 2.0 * kPi * j / N;
        for (int jp = 0; jp < N; ++jp) {
          double phi = 2.0 * kPi * jp / N;
          acc += std::polar(1.0, -(k * theta + l * phi)) *
                 inv[static_cast<std::size_t>(j) * N + jp];
        }
      }
      out.set(k, l, acc / (static_cast<double>(N) * N));
    }
  }
  out.set_provenance(N, false);
  return out;
}

cplx functional_apply(const MomentTable& t, const LaurentPoly& f) {
  cplx acc = 0.0;
  for (const auto& [key, val] : f.terms()) {
    acc += val * t.moment(-key.first, -key.second);
  }
  return acc;
}

cplx inner_product(const MomentTable& t, const LaurentPoly& f,
                   const LaurentPoly& g) {
  return functional_apply(t, f * g.conj_reflect());
}

Eigen::MatrixXcd moment_matrix(const MomentTable& t, int n, int m,
                               Ordering ord) {
  if (n < 0 || m < 0) throw InvalidInput("level indices must be >= 0");
  if (n > t.max_k() || m > t.max_l()) {
    throw LevelExceedsMoments("level (" + std::to_string(n) + ", " +
                              std::to_string(m) +
                              ") exceeds the moment table box");
  }
  int D = (n + 1) * (m + 1);
  Eigen::MatrixXcd C(D, D);
  for (int r = 0; r < D; ++r) {
    auto [kr, lr] = descending_monomial(n, m, ord, r);
    for (int c = 0; c < D; ++c) {
      auto [kc, lc] = descending_monomial(n, m, ord, c);
      C(r, c) = t.moment(kc - kr, lc - lr);
    }
  }
  return C;
}

bool is_positive_definite(const Eigen::MatrixXcd& C, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C,
                                                     Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  return lo > 0.0 && lo > rel_tol * hi;
}

}  // namespace bicircle
