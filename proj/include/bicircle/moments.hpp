#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bicircle/laurent.hpp"

namespace bicircle {

struct QuadratureConfig {
  int initial_grid = 64;   // starting grid edge (rounded up to a power of two)
  int max_grid = 4096;     // doubling cap
  double tol = 1e-12;      // max moment change between successive doublings
};

// Table of torus moments c_{k,l} for |k| <= K, |l| <= L. Only the k >= 0
// half is stored; c_{-k,-l} = conj(c_{k,l}) supplies the rest.
class MomentTable {
public:
  MomentTable(int K, int L);

  int max_k() const { return K_; }
  int max_l() const { return L_; }
  int grid_size() const { return grid_; }
  bool converged() const { return converged_; }
  void set_provenance(int grid, bool converged) {
    grid_ = grid;
    converged_ = converged;
  }

  bool contains(int k, int l) const;
  cplx moment(int k, int l) const;  // throws SupportExceeded outside the box
  void set(int k, int l, cplx v);   // stored side only: k > 0, or k == 0 && l >= 0

  // Max |difference| against another table over the common stored support.
  double diff_max(const MomentTable& o) const;

private:
  std::size_t index(int k, int l) const;
  int K_, L_;
  int grid_ = 0;
  bool converged_ = false;
  std::vector<cplx> data_;
};

enum class WeightKind { reciprocal_mod_square, reciprocal_trig_poly, explicit_moments };

// A torus weight: 1/|p|^2 for a polynomial p, 1/Q for a strictly positive
// Hermitian trigonometric polynomial Q, or a precomputed moment table.
class WeightSpec {
public:
  static WeightSpec mod_square(const LaurentPoly& p);
  static WeightSpec trig_poly(const LaurentPoly& Q);  // validates Hermitian symmetry
  static WeightSpec explicit_moments(const MomentTable& table);

  WeightKind kind() const { return kind_; }
  bool has_density() const { return kind_ != WeightKind::explicit_moments; }
  const LaurentPoly& poly() const { return poly_; }
  const MomentTable& table() const;
  // The trigonometric polynomial Q with weight 1/Q (|p|^2 in the mod-square
  // case). Throws InvalidInput for explicit-moment weights.
  LaurentPoly reciprocal_density() const;

private:
  WeightSpec(WeightKind k, LaurentPoly p, std::vector<MomentTable> t)
      : kind_(k), poly_(std::move(p)), table_(std::move(t)) {}
  WeightKind kind_;
  LaurentPoly poly_;
  std::vector<MomentTable> table_;  // empty unless explicit_moments
};

// Moments of the weight by tensor-grid quadrature with grid doubling until
// successive tables agree to cfg.tol (converged flag records the outcome;
// no exception on reaching the cap). Throws NotPositive if the sampled
// density denominator is not strictly positive, LevelExceedsMoments if an
// explicit table does not cover (K, L).
MomentTable compute_moments(const WeightSpec& weight, int K, int L,
                            const QuadratureConfig& cfg = {});

// Serial brute-force Riemann-sum oracle for the weight 1/Q on a fixed
// N x N grid; independent of the production kernel's twiddle tables and
// summation order. Used for testing and benchmarking.
MomentTable compute_moments_reference(const LaurentPoly& Q, int K, int L,
                                      int grid);

// L(f) = sum f_{k,l} c_{-k,-l}. Throws SupportExceeded if f needs moments
// outside the table.
cplx functional_apply(const MomentTable& t, const LaurentPoly& f);

// <f, g> = L(f * conj(g)(1/z, 1/w)); linear in f, conjugate-linear in g.
cplx inner_product(const MomentTable& t, const LaurentPoly& f,
                   const LaurentPoly& g);

// Gram matrix of the level-(n, m) descending monomial list:
// C[r][c] = <mono_r, mono_c> = c_{k_c - k_r, l_c - l_r}.
Eigen::MatrixXcd moment_matrix(const MomentTable& t, int n, int m,
                               Ordering ord);

// Hermitian positive definiteness with a relative spectral threshold:
// true iff min eigenvalue > rel_tol * max eigenvalue > 0.
bool is_positive_definite(const Eigen::MatrixXcd& C, double rel_tol = 1e-10);

}  // namespace bicircle
