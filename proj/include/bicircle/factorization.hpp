#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bicircle/recurrence.hpp"
#include "bicircle/stability.hpp"

namespace bicircle {

// Outcome of the factorization-class tests at level (n, m).
struct ConditionReport {
  int n = 0, m = 0;
  double tol = 0.0;
  double scale = 1.0;  // max(1, |K|, |K1|)
  // |K (tG1 tG^dag)^j K1^T|_F for j = 0..n-1; vanishing is equivalent to a
  // factor nonzero on { |z| = 1, |w| <= 1 }.
  std::vector<double> residuals_mixed;
  // |K^dag (G1 G^dag)^l K1|_F for l = 0..m-1; vanishing is the analogous
  // condition with the roles of the variables exchanged.
  std::vector<double> residuals_mixed_rev;
  bool one_sided_z = false;
  bool one_sided_w = false;
  bool splitting = false;    // both residual families vanish
  bool stable = false;       // |K| <= tol * scale
  bool anti_stable = false;  // |K1| <= tol * scale
  bool tensor = false;       // both kernels vanish
};

ConditionReport check_conditions(const RecurrenceSet& rs, double tol);

// Intermediate data of the one-sided factor construction.
struct FactorizationWork {
  int n = 0, m = 0;
  double tol = 0.0;
  double scale = 1.0;
  int r = 0, r1 = 0;    // ranks of K and K1
  int n1 = 0, n2 = 0;   // invariant-splitting dimensions (n1 + n2 = n)
  Eigen::MatrixXcd U, U1, Ut;  // aligned left/right unitaries (Ut shared)
  Eigen::MatrixXcd S, S1;      // m x n singular-value carriers
  Eigen::MatrixXcd G;          // Ut^dag (tG1 tG^dag) Ut
  Eigen::MatrixXcd E;          // invariant-subspace rotation
  Eigen::MatrixXcd Vt;         // completed unitary of the level above
  LaurentPoly psit;            // first row of Vt^dag applied to the level
  LaurentPoly p;               // the one-sided factor
  std::vector<std::pair<std::string, double>> diagnostics;
};

// Joint alignment of the two coupling kernels: builds unitary U, U1, Ut and
// sparse S, S1 with K = U S Ut^dag and K1 = U1 S1 Ut^T, where the leading r
// columns of Ut span the row space of K and the trailing r1 columns the
// conjugated row space of K1. Throws ConditionViolated if K K1^T does not
// vanish, RankOverflow if r + r1 > n.
void kernel_svd_align(FactorizationWork& work, const Eigen::MatrixXcd& K,
                      const Eigen::MatrixXcd& K1, double tol);

struct RotationResult {
  Eigen::MatrixXcd E;
  int n1 = 0, n2 = 0;
};
// Orthonormal change of basis separating the smallest G-invariant subspace
// containing the trailing r1 coordinates (dimension n2) from its orthogonal
// complement (dimension n1, containing the leading r coordinates), so that
// E^dag G E is block upper-triangular with the invariant block last.
RotationResult invariant_subspace_rotation(const Eigen::MatrixXcd& G, int r,
                                           int r1, double tol);

struct CompletionResult {
  Eigen::MatrixXcd Vt;
  LaurentPoly psit;
};
// Completes the isometry built from the rotated level-(n-1, m) system to a
// unitary on the level-(n, m) system; psit is the distinguished first
// component. Throws NotIsometry / NullSpaceDegenerate on rank defects.
CompletionResult complete_unitary(const MomentTable& t, int n, int m,
                                  const Eigen::MatrixXcd& Ut, int n1, int n2);

// Deterministic phase normalization: rotates p so its largest-magnitude
// coefficient is real and positive (ties broken by smallest (k, l)).
LaurentPoly normalize_phase(const LaurentPoly& p);

// Independent coefficient-level cross-check of the factor against the lex
// level: p(z,w) e(z) = sum_s phi^s(z,w) e_s(z) with e, e_s the conjugated
// z-profiles of the w-constant parts. Returns the max coefficient residual.
double factor_cross_check(const LaurentPoly& p, int n, int m,
                          const OrthoLevel& lex_level);

// Shortcut valid when the coupling kernel K vanishes: the factor is the
// degree-(n, m) reversal of the top lex polynomial. Throws NotStableCase
// otherwise.
LaurentPoly stable_case_factor(const RecurrenceSet& rs, double tol);

// Max deviation of |p|^2 from the two orthonormal-system norm differences
// on an N x N torus grid.
double verify_norm_identity(const LevelSet& levels, const LaurentPoly& p,
                            int grid);
// Max of | |p|^2 / Q - 1 | on an N x N torus grid.
double verify_factor_on_grid(const LaurentPoly& p, const LaurentPoly& Q,
                             int grid);

struct FactorResult {
  LaurentPoly p;
  ConditionReport conditions;
  FactorizationWork work;
  bool used_stable_shortcut = false;
  std::vector<std::pair<std::string, double>> verification;
};

// Full construction of the one-sided stable factor of the weight at level
// (n, m): moments, recurrence coefficients, class conditions, kernel
// alignment, invariant rotation, unitary completion, extraction, and final
// verification. If cond_out is non-null it receives the condition report
// even when ConditionViolated is thrown.
FactorResult factor_one_sided(const WeightSpec& weight, int n, int m,
                              double tol = 1e-8,
                              const QuadratureConfig& cfg = {},
                              ConditionReport* cond_out = nullptr);

// Structural verification of a splitting-class weight against candidate
// stable factors p(z, w) and q(z, w) (with the second factor entering
// through z -> 1/z): top-row/reversal agreement and lower-row nesting for
// both factors' own systems, and the unitary mixing of the two candidate
// stacks into the weight's systems at levels (n, m-1) and (n, m).
ResidualReport verify_splitting_structure(const WeightSpec& weight,
                                          const LaurentPoly& p,
                                          const LaurentPoly& q,
                                          const QuadratureConfig& cfg = {},
                                          int stability_grid = 512);

}  // namespace bicircle
