#pragma once

#include <string>
#include <vector>

#include "bicircle/laurent.hpp"

namespace bicircle {

// Result of the reflection-coefficient (Schur-Cohn) root-location test:
// stable means every root lies strictly inside the open unit disk; margin
// is the smallest reflection slack min_j (1 - |alpha_j|) encountered (a
// nonpositive margin accompanies stable == false).
struct SchurCohnResult {
  bool stable = false;
  double margin = 0.0;
};

// Tests whether all roots of sum_i coeffs[i] w^i lie strictly inside the
// unit disk. Throws DegenerateLeadingCoefficient if all coefficients are
// numerically zero.
SchurCohnResult schur_cohn(std::vector<cplx> coeffs);

// Same test for "all roots strictly outside the closed unit disk".
SchurCohnResult roots_outside(const std::vector<cplx>& coeffs);

enum class StabilityVerdict {
  stable_bidisk,   // nonzero on { |z| <= 1 } x { |w| <= 1 }
  one_sided_z,     // nonzero on { |z| = 1, |w| <= 1 }
  one_sided_w,     // nonzero on { |z| <= 1, |w| = 1 }
  anti_stable_z,   // nonzero on { |z| = 1, |w| >= 1 }
  unstable,
  inconclusive,    // the achieved verdict's margin is below 10*tol
};

std::string to_string(StabilityVerdict v);

struct StabilityReport {
  StabilityVerdict verdict = StabilityVerdict::unstable;
  double min_modulus = 0.0;  // min |p| over the grid x grid torus sample
  int grid = 0;
  double margin = 0.0;       // reflection margin of the achieved verdict
};

// Slice sweep: for each of `grid` equispaced theta, tests the w-polynomial
// p(e^{i theta}, w). Returns the minimal slice margin; all_pass is true iff
// every slice satisfies the requested root location.
struct SliceSweep {
  bool all_pass = false;
  double min_margin = 0.0;
};
SliceSweep sweep_z_roots_outside(const LaurentPoly& p, int grid);
SliceSweep sweep_z_roots_inside(const LaurentPoly& p, int grid);
// Same sweeps with the variable roles exchanged (slices in z at fixed phi).
SliceSweep sweep_w_roots_outside(const LaurentPoly& p, int grid);

// Certifies p(z,w) != 0 on { |z| = 1, |w| <= 1 } by slice sweeps.
bool one_sided_stable_z(const LaurentPoly& p, int grid, double tol,
                        double* margin = nullptr);
// Certifies p(z,w) != 0 on the closed bidisk (both slice sweeps).
bool stable_on_bidisk(const LaurentPoly& p, int grid, double tol,
                      double* margin = nullptr);

StabilityReport analyze_stability(const LaurentPoly& p, int grid = 512,
                                  double tol = 1e-8);

}  // namespace bicircle
