#include "bicircle/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bicircle/errors.hpp"

namespace bicircle {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Trims numerically-zero leading (high-power) coefficients relative to the
// largest magnitude.
std::vector<cplx> trim_leading(std::vector<cplx> c) {
  double mx = 0.0;
  for (const auto& v : c) mx = std::max(mx, std::abs(v));
  if (mx == 0.0) return {};
  double thr = 1e-13 * mx;
  while (!c.empty() && std::abs(c.back()) <= thr) c.pop_back();
  return c;
}

double min_modulus_on_grid(const LaurentPoly& p, int grid) {
  double mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    cplx z = std::polar(1.0, 2.0 * kPi * i / grid);
    for (int j = 0; j < grid; ++j) {
      cplx w = std::polar(1.0, 2.0 * kPi * j / grid);
      mn = std::min(mn, std::abs(p.eval(z, w)));
    }
  }
  return mn;
}

SliceSweep sweep(const LaurentPoly& p, int grid, bool want_outside) {
  SliceSweep s;
  s.all_pass = true;
  s.min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    double theta = 2.0 * kPi * i / grid;
    std::vector<cplx> slice = p.w_slice(theta);
    SchurCohnResult r;
    try {
      r = want_outside ? roots_outside(slice) : schur_cohn(slice);
    } catch (const DegenerateLeadingCoefficient&) {
      // p vanishes identically on this z-slice: zeros everywhere.
      s.all_pass = false;
      s.min_margin = 0.0;
      continue;
    }
    s.all_pass = s.all_pass && r.stable;
    s.min_margin = std::min(s.min_margin, r.margin);
  }
  if (!std::isfinite(s.min_margin)) s.min_margin = 0.0;
  return s;
}

}  // namespace

SchurCohnResult schur_cohn(std::vector<cplx> coeffs) {
  std::vector<cplx> c = trim_leading(std::move(coeffs));
  if (c.empty()) {
    throw DegenerateLeadingCoefficient(
        "all polynomial coefficients are numerically zero");
  }
  SchurCohnResult res;
  res.margin = 1.0;
  if (c.size() == 1) {
    res.stable = true;  // nonzero constant: no roots at all
    return res;
  }
  // Monic normalization, then the backward reflection recursion: a monic
  // polynomial of degree d has all roots strictly inside the disk iff every
  // reflection coefficient alpha = -conj(f(0)) has |alpha| < 1.
  std::size_t d = c.size() - 1;
  std::vector<cplx> f(c);
  for (auto& v : f) v /= c.back();
  for (std::size_t deg = d; deg >= 1; --deg) {
    cplx alpha = -std::conj(f[0]);
    double slack = 1.0 - std::abs(alpha);
    res.margin = std::min(res.margin, slack);
    if (!(slack > 0.0)) {
      res.stable = false;
      return res;
    }
    if (deg == 1) break;
    // f_{deg-1}(w) = [f(w) + conj(alpha) f*(w)] / ((1 - |alpha|^2) w),
    // with f*(w) = w^deg conj(f)(1/w).
    double denom = 1.0 - std::norm(alpha);
    std::vector<cplx> g(deg);
    for (std::size_t i = 0; i + 1 <= deg; ++i) {
      g[i] = (f[i + 1] + std::conj(alpha) * std::conj(f[deg - 1 - i])) / denom;
    }
    f = std::move(g);
  }
  res.stable = true;
  return res;
}

SchurCohnResult roots_outside(const std::vector<cplx>& coeffs) {
  std::vector<cplx> c = trim_leading(coeffs);
  if (c.empty()) {
    throw DegenerateLeadingCoefficient(
        "all polynomial coefficients are numerically zero");
  }
  SchurCohnResult res;
  if (c.size() == 1) {
    res.stable = true;
    res.margin = 1.0;
    return res;
  }
  // A root at the origin can never be outside; the reversal below would
  // silently drop it, so detect it first.
  double mx = 0.0;
  for (const auto& v : c) mx = std::max(mx, std::abs(v));
  if (std::abs(c.front()) <= 1e-13 * mx) {
    res.stable = false;
    res.margin = 0.0;
    return res;
  }
  // Roots of the conjugate reversal are the reflected roots 1/conj(root),
  // so "all outside" becomes "all strictly inside".
  std::vector<cplx> rev(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    rev[i] = std::conj(c[c.size() - 1 - i]);
  }
  return schur_cohn(std::move(rev));
}

SliceSweep sweep_z_roots_outside(const LaurentPoly& p, int grid) {
  return sweep(p, grid, true);
}

SliceSweep sweep_z_roots_inside(const LaurentPoly& p, int grid) {
  return sweep(p, grid, false);
}

SliceSweep sweep_w_roots_outside(const LaurentPoly& p, int grid) {
  return sweep(p.vars_swapped(), grid, true);
}

bool one_sided_stable_z(const LaurentPoly& p, int grid, double tol,
                        double* margin) {
  SliceSweep s = sweep_z_roots_outside(p, grid);
  if (margin) *margin = s.min_margin;
  return s.all_pass && s.min_margin > tol;
}

bool stable_on_bidisk(const LaurentPoly& p, int grid, double tol,
                      double* margin) {
  SliceSweep sz = sweep_z_roots_outside(p, grid);
  SliceSweep sw = sweep_w_roots_outside(p, grid);
  double mg = std::min(sz.min_margin, sw.min_margin);
  if (margin) *margin = mg;
  return sz.all_pass && sw.all_pass && mg > tol;
}

std::string to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::stable_bidisk:
      return "stable_bidisk";
    case StabilityVerdict::one_sided_z:
      return "one_sided_z";
    case StabilityVerdict::one_sided_w:
      return "one_sided_w";
    case StabilityVerdict::anti_stable_z:
      return "anti_stable_z";
    case StabilityVerdict::unstable:
      return "unstable";
    case StabilityVerdict::inconclusive:
      return "inconclusive";
  }
  return "unstable";
}

StabilityReport analyze_stability(const LaurentPoly& p, int grid, double tol) {
  if (p.is_zero()) throw InvalidInput("stability analysis of the zero polynomial");
  if (grid < 8) throw InvalidInput("stability grid too small");
  StabilityReport rep;
  rep.grid = grid;
  rep.min_modulus = min_modulus_on_grid(p, grid);

  SliceSweep sz = sweep_z_roots_outside(p, grid);
  SliceSweep sw = sweep_w_roots_outside(p, grid);
  SliceSweep sa = sweep_z_roots_inside(p, grid);

  if (sz.all_pass && sw.all_pass) {
    rep.verdict = StabilityVerdict::stable_bidisk;
    rep.margin = std::min(sz.min_margin, sw.min_margin);
  } else if (sz.all_pass) {
    rep.verdict = StabilityVerdict::one_sided_z;
    rep.margin = sz.min_margin;
  } else if (sw.all_pass) {
    rep.verdict = StabilityVerdict::one_sided_w;
    rep.margin = sw.min_margin;
  } else if (sa.all_pass) {
    rep.verdict = StabilityVerdict::anti_stable_z;
    rep.margin = sa.min_margin;
  } else {
    rep.verdict = StabilityVerdict::unstable;
    rep.margin = std::min({sz.min_margin, sw.min_margin, sa.min_margin});
    return rep;
  }
  if (rep.margin < 10.0 * tol) rep.verdict = StabilityVerdict::inconclusive;
  return rep;
}

}  // namespace bicircle
