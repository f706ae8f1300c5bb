#pragma once

// Closed-form factor polynomials shared by the test suites. Each fixture
// returns a polynomial p normalized so that the weight 1/|p|^2 has unit
// mean; the associated weight is built with weight_of().

#include <cmath>

#include "bicircle/laurent.hpp"
#include "bicircle/moments.hpp"

namespace fixtures {

using bicircle::cplx;
using bicircle::LaurentPoly;

// (z - a w)(1 - b z w) / sqrt((1-a^2)(1-b^2)) with a = 0.5, b = 0.3.
// Splitting class: the two factors are separately nonzero on |z| = 1 with
// the w-roots on opposite sides of the unit circle's interior after the
// z -> 1/z exchange, so both coupling kernels' mixed residual families
// vanish while the kernels themselves do not.
inline LaurentPoly splitting_factor() {
  const double a = 0.5, b = 0.3;
  LaurentPoly f;
  f.add_term(1, 0, 1.0);
  f.add_term(0, 1, -a);
  LaurentPoly g;
  g.add_term(0, 0, 1.0);
  g.add_term(1, 1, -b);
  return (f * g).scaled(1.0 / std::sqrt((1 - a * a) * (1 - b * b)));
}

// The two one-variable-shift constituents of splitting_factor(), each
// normalized on its own: p = (1 - b z w)/sqrt(1-b^2) is stable on the
// closed bidisk and q = (1 - a z w)/sqrt(1-a^2) becomes the anti-stable
// part after the substitution z -> 1/z.
inline LaurentPoly splitting_part_p() {
  const double b = 0.3;
  LaurentPoly g;
  g.add_term(0, 0, 1.0);
  g.add_term(1, 1, -b);
  return g.scaled(1.0 / std::sqrt(1 - b * b));
}
inline LaurentPoly splitting_part_q() {
  const double a = 0.5;
  LaurentPoly g;
  g.add_term(0, 0, 1.0);
  g.add_term(1, 1, -a);
  return g.scaled(1.0 / std::sqrt(1 - a * a));
}

// Degree-(2,2) one-sided factor with parameter a = 0.5: nonzero on
// { |z| = 1, |w| <= 1 } but not on the whole closed bidisk, so exactly one
// mixed residual family vanishes and neither coupling kernel does.
inline LaurentPoly one_sided_factor() {
  const double a = 0.5;
  const double a2 = a * a;
  const double d = 11 * a2 - a2 * a2 - 1;
  LaurentPoly f;
  f.add_term(2, 2, 4 * a * (1 - a2));
  f.add_term(2, 0, -3 * (1 + a2) * (1 + a2));
  f.add_term(1, 2, 3 * (1 - a2 * a2));
  f.add_term(1, 0, 9 * a * (1 + a2));
  f.add_term(0, 2, -13 * a * (1 - a2));
  f.add_term(0, 0, 12 * a2);
  return f.scaled(std::sqrt(15.0) / (30 * a * std::sqrt(d)));
}

// (1 - 0.3 z w)/sqrt(0.91): nonzero on the closed bidisk (stable class,
// vanishing K).
inline LaurentPoly stable_factor() { return splitting_part_p(); }

// (z - 0.5 w)/sqrt(0.75): z-reflection of a stable factor (anti-stable
// class, vanishing K1).
inline LaurentPoly anti_stable_factor() {
  const double a = 0.5;
  LaurentPoly f;
  f.add_term(1, 0, 1.0);
  f.add_term(0, 1, -a);
  return f.scaled(1.0 / std::sqrt(1 - a * a));
}

// Tensor-class pair: alpha(z) beta(w) with both one-variable factors
// stable on the disk.
inline LaurentPoly tensor_factor_z() {
  LaurentPoly f;
  f.add_term(0, 0, 1.0);
  f.add_term(1, 0, -0.2);
  LaurentPoly g;
  g.add_term(0, 0, 1.0);
  g.add_term(1, 0, 0.35);
  return f * g;
}
inline LaurentPoly tensor_factor_w() {
  LaurentPoly f;
  f.add_term(0, 0, 1.0);
  f.add_term(0, 1, -0.5);
  f.add_term(0, 2, 0.2);
  return f;
}

// (z - 0.4 w)(1 - 0.3 z w) + 0.05: a generic degree-(2,2) one-sided factor
// whose reversed residual family does not vanish.
inline LaurentPoly perturbed_one_sided_22() {
  LaurentPoly f;
  f.add_term(1, 0, 1.0);
  f.add_term(0, 1, -0.4);
  LaurentPoly g;
  g.add_term(0, 0, 1.0);
  g.add_term(1, 1, -0.3);
  LaurentPoly p = f * g;
  p.add_term(0, 0, 0.05);
  return p;
}

// (z - 0.4 w)(1 - 0.3 z w)(1 - 0.2 z) + 0.03: degree (3,2); exercises the
// branch where the two kernel ranks exhaust the coupling dimension.
inline LaurentPoly perturbed_one_sided_32() {
  LaurentPoly f;
  f.add_term(1, 0, 1.0);
  f.add_term(0, 1, -0.4);
  LaurentPoly g;
  g.add_term(0, 0, 1.0);
  g.add_term(1, 1, -0.3);
  LaurentPoly h;
  h.add_term(0, 0, 1.0);
  h.add_term(1, 0, -0.2);
  LaurentPoly p = f * g * h;
  p.add_term(0, 0, 0.03);
  return p;
}

// (1 - 0.25 z^2 w)(z - 0.4 w): degree (3,2); exercises the iterated
// invariant-subspace growth inside the rotation step.
inline LaurentPoly splitting_32() {
  LaurentPoly f;
  f.add_term(0, 0, 1.0);
  f.add_term(2, 1, -0.25);
  LaurentPoly g;
  g.add_term(1, 0, 1.0);
  g.add_term(0, 1, -0.4);
  return f * g;
}

inline bicircle::WeightSpec weight_of(const LaurentPoly& p) {
  return bicircle::WeightSpec::trig_poly(p.herm_square());
}

}  // namespace fixtures
