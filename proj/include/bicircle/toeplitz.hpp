#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bicircle/moments.hpp"
#include "bicircle/orthopoly.hpp"
#include "bicircle/recurrence.hpp"

namespace bicircle {

// Circle moments of the one-variable weight 1/|p(e^{i theta}, .)|^2 at a
// fixed theta: chat[j] = functional value on w^{-j}, j = 0..L; negative
// indices are supplied by conjugation.
struct ParametricFunctional {
  double theta = 0.0;
  int max_l = 0;
  std::vector<cplx> chat;
  int grid = 0;
  bool converged = false;
  cplx value(int j) const;  // throws SupportExceeded outside [-max_l, max_l]
};

ParametricFunctional parametric_moments(const LaurentPoly& p, double theta,
                                        int L,
                                        const QuadratureConfig& cfg = {});

// (l+1) x (l+1) Toeplitz moment matrix C[i][j] = chat_{i-j}.
Eigen::MatrixXcd toeplitz_matrix(const ParametricFunctional& pf, int l);

// Ascending coefficients of the degree-l orthonormal polynomial of the
// parametric functional, normalized with a positive leading coefficient.
Eigen::VectorXcd univariate_phi(const ParametricFunctional& pf, int l);

// Inverse of the order-(l-1) Toeplitz matrix from the reversed coefficients
// of the degree-l orthonormal polynomial (two triangular Toeplitz products,
// no dense inversion). `phi` holds the ascending coefficients of phi_l.
Eigen::MatrixXcd gohberg_semencul_inverse(const Eigen::VectorXcd& phi, int l);

// Residuals of the parametric-slice properties of a one-sided stable
// factor p at a fixed theta: orthogonality of the slice to positive powers,
// of its reversal to low powers, unit norms, agreement of the reversal with
// the top orthonormal polynomial, and the Toeplitz-inverse identity against
// the matrix polynomial of the supplied lex level.
ResidualReport parametric_ortho_check(const LaurentPoly& p,
                                      const OrthoLevel& lex_level,
                                      double theta,
                                      const QuadratureConfig& cfg = {});

}  // namespace bicircle
