#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bicircle/orthopoly.hpp"

namespace bicircle {

// Named residuals with deterministic insertion order.
struct ResidualReport {
  std::vector<std::pair<std::string, double>> entries;
  void add(const std::string& label, double residual) {
    entries.emplace_back(label, residual);
  }
  double max_residual() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.second);
    return m;
  }
  const double* find(const std::string& label) const {
    for (const auto& e : entries) {
      if (e.first == label) return &e.second;
    }
    return nullptr;
  }
};

// The six orthonormal levels feeding the level-(n, m) recurrence data.
struct LevelSet {
  OrthoLevel P_nm, P_n1m, P_nm1;  // lex (n,m), (n-1,m), (n,m-1)
  OrthoLevel T_nm, T_n1m, T_nm1;  // revlex (n,m), (n-1,m), (n,m-1)
};

// All level-(n, m) recurrence coefficient matrices of the two orderings.
// Naming: Ehat/A step the z-degree, K/G and K1/G1 step the w-degree and
// couple the orderings, I/I1 exchange the orderings; t-prefixed members are
// the variable-swapped analogs.
struct RecurrenceSet {
  int n = 0, m = 0;
  Eigen::MatrixXcd Ehat, A;    // (m+1)x(m+1)
  Eigen::MatrixXcd K, K1;      // m x n
  Eigen::MatrixXcd G, G1;      // m x (m+1)
  Eigen::MatrixXcd I, I1;      // (m+1)x(n+1)
  Eigen::MatrixXcd tEhat, tA;  // (n+1)x(n+1)
  Eigen::MatrixXcd tK, tK1;    // n x m
  Eigen::MatrixXcd tG, tG1;    // n x (n+1)
  Eigen::MatrixXcd tI, tI1;    // (n+1)x(m+1)
  LevelSet levels;
};

// Computes every coefficient matrix at level (n, m) (n, m >= 1) from inner
// products of the orthonormal level polynomials.
RecurrenceSet compute_coefficients(const MomentTable& t, int n, int m);

// Coefficientwise residuals of the twelve level-(n, m) recurrence
// relations (six per ordering).
ResidualReport verify_recurrences(const MomentTable& t, int n, int m);

// Residuals of the coefficient identities linking levels (k, l), (k+1, l)
// and (k+1, l-1); the four conditional identities are included only when
// both gating step-coupling matrices vanish within 1e-8.
ResidualReport verify_identities(const MomentTable& t, int k, int l);

// Individual coefficient matrices at an arbitrary level.
Eigen::MatrixXcd ehat_at(const MomentTable& t, int k, int l);        // k >= 1
Eigen::MatrixXcd ehat_tilde_at(const MomentTable& t, int k, int l);  // l >= 1
Eigen::MatrixXcd step_matrix_at(const MomentTable& t, int k, int l); // k >= 1

// Frobenius norms of the step-coupling matrices over a rectangular window
// of levels; used to detect where they vanish.
struct EhatScan {
  int k_lo = 0, k_hi = 0, l_lo = 0, l_hi = 0;
  Eigen::MatrixXd ehat_norm;        // (k_hi-k_lo+1) x (l_hi-l_lo+1)
  Eigen::MatrixXd ehat_tilde_norm;
};
EhatScan ehat_scan(const MomentTable& t, int k_lo, int k_hi, int l_lo,
                   int l_hi);

}  // namespace bicircle
