#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "bicircle/errors.hpp"

namespace bicircle {

using cplx = std::complex<double>;

// Monomial orderings used for the bivariate orthonormal systems: `lex`
// groups by descending z-power then descending w-power, `revlex` by
// descending w-power then descending z-power.
enum class Ordering { lex, revlex };

// Bivariate Laurent polynomial  sum_{k,l} c_{k,l} z^k w^l  with sparse
// coefficient storage. Map-based storage keeps iteration order (and hence
// every derived computation) deterministic.
class LaurentPoly {
public:
  using TermMap = std::map<std::pair<int, int>, cplx>;

  LaurentPoly() = default;

  static LaurentPoly constant(cplx v);
  static LaurentPoly monomial(int k, int l, cplx v = 1.0);

  const TermMap& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  std::size_t term_count() const { return c_.size(); }

  cplx coeff(int k, int l) const;
  // Inserts/overwrites a coefficient; an exact zero erases the term.
  void set_coeff(int k, int l, cplx v);
  // Adds v to the coefficient at (k, l).
  void add_term(int k, int l, cplx v);

  // Support box. All return 0 for the zero polynomial.
  int k_min() const;
  int k_max() const;
  int l_min() const;
  int l_max() const;

  double max_abs() const;
  // Drops terms with |c| <= rel_tol * max_abs().
  LaurentPoly trimmed(double rel_tol = 1e-13) const;

  cplx eval(cplx z, cplx w) const;

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly scaled(cplx s) const;
  // Multiplication by z^dk w^dl.
  LaurentPoly shifted(int dk, int dl) const;

  // conj(p)(1/z, 1/w): coefficient (k,l) -> conj at (-k,-l).
  LaurentPoly conj_reflect() const;
  // p * conj_reflect(p); equals |p|^2 on the torus and is Hermitian.
  LaurentPoly herm_square() const;
  // z^n w^m conj(p)(1/z, 1/w): coefficient (k,l) -> conj at (n-k, m-l).
  LaurentPoly reversed(int n, int m) const;
  // w^m conj(p)(1/z, 1/w) with only the w-degree completed:
  // coefficient (k,l) -> conj at (-k, m-l).
  LaurentPoly reversed_in_w(int m) const;
  // conj(p)(z, 1/w): coefficient (k,l) -> conj at (k,-l). No z reflection.
  LaurentPoly conj_flip_w() const;
  // Plain substitution z -> 1/z padded to degree n: (k,l) -> (n-k, l),
  // coefficients unchanged (no conjugation).
  LaurentPoly z_reflected(int n) const;
  // Exchanges the two variables: (k,l) -> (l,k).
  LaurentPoly vars_swapped() const;

  bool is_hermitian(double rel_tol = 1e-12) const;

  double diff_max(const LaurentPoly& o) const;

  // Coefficients of w^l in p(e^{i theta}, w), for l in [l_min(), l_max()],
  // ascending. Returns the ascending coefficient list; the start offset is
  // l_min(). Empty for the zero polynomial.
  std::vector<cplx> w_slice(double theta) const;

  // Row-major dense coefficients over the support box (k major ascending,
  // l minor ascending). Empty box for the zero polynomial yields {0}.
  std::vector<cplx> dense() const;
  static LaurentPoly from_dense(int k_min, int k_max, int l_min, int l_max,
                                const std::vector<cplx>& coeffs);

private:
  TermMap c_;
};

// Maximum coefficient difference between e^{i phase} * p and ref, minimized
// over the unimodular phase (least-squares phase from the coefficient
// overlap; falls back to phase 1 when the overlap is negligible).
double phase_align_max_diff(const LaurentPoly& p, const LaurentPoly& ref);

// The t-th monomial (k, l) of the level-(n, m) descending monomial list:
// lex    t = (n-k)(m+1) + (m-l)   (z-power major),
// revlex t = (m-l)(n+1) + (n-k)   (w-power major).
std::pair<int, int> descending_monomial(int n, int m, Ordering ord, int t);

}  // namespace bicircle
