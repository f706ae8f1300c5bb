#include <cmath>
#include <random>
#include <vector>

#include "bicircle/stability.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace bicircle;

namespace {

// Independent root locator: eigenvalues of the companion matrix of the
// monic normalization.
std::vector<cplx> companion_roots(const std::vector<cplx>& c) {
  int d = (int)c.size() - 1;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) M(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) M(i, d - 1) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
  std::vector<cplx> out(d);
  for (int i = 0; i < d; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

double max_root_abs(const std::vector<cplx>& c) {
  double m = 0.0;
  for (cplx r : companion_roots(c)) m = std::max(m, std::abs(r));
  return m;
}

double min_root_abs(const std::vector<cplx>& c) {
  double m = std::numeric_limits<double>::infinity();
  for (cplx r : companion_roots(c)) m = std::min(m, std::abs(r));
  return m;
}

}  // namespace

TEST_CASE("reflection test on explicit low-degree polynomials") {
  // w - 0.5: single root inside.
  SchurCohnResult in = schur_cohn({cplx(-0.5), cplx(1.0)});
  CHECK(in.stable);
  CHECK(in.margin == doctest::Approx(0.5));
  // 1 - 0.5 w: root at 2, outside.
  SchurCohnResult out = schur_cohn({cplx(1.0), cplx(-0.5)});
  CHECK_FALSE(out.stable);
  CHECK(roots_outside({cplx(1.0), cplx(-0.5)}).stable);
  CHECK_FALSE(roots_outside({cplx(-0.5), cplx(1.0)}).stable);
  // A root exactly at the origin blocks the outside test.
  CHECK_FALSE(roots_outside({cplx(0.0), cplx(1.0)}).stable);
  // (w - 0.5)(w - 0.3i): complex pair inside.
  CHECK(schur_cohn({cplx(0.0, 0.15), cplx(-0.5, -0.3), cplx(1.0)}).stable);
  CHECK_THROWS_AS(schur_cohn({cplx(0.0), cplx(0.0)}),
                  DegenerateLeadingCoefficient);
}

TEST_CASE("reflection test agrees with companion-matrix roots") {
  std::mt19937 rng(77250134u);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> mag(0.1, 1.4);
  std::uniform_real_distribution<double> arg(0.0, 6.283185307179586);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int d = 1 + (int)(rng() % 6);
    std::vector<cplx> c(d + 1);
    if (trial % 2 == 0) {
      // Raw random coefficients (usually some roots outside).
      for (auto& v : c) v = cplx(g(rng), g(rng));
      if (std::abs(c[d]) < 0.2) c[d] += cplx(1.0, 0.5);
    } else {
      // Built from roots around the circle so both outcomes occur often.
      c.assign(1, cplx(1.0));
      for (int i = 0; i < d; ++i) {
        cplx root = std::polar(mag(rng), arg(rng));
        std::vector<cplx> next(c.size() + 1, cplx(0.0));
        for (std::size_t j = 0; j < c.size(); ++j) {
          next[j] += c[j] * (-root);
          next[j + 1] += c[j];
        }
        c = next;
      }
    }
    double rho = max_root_abs(c);
    if (std::abs(1.0 - rho) < 1e-6) continue;  // too close to the circle
    ++checked;
    SchurCohnResult sc = schur_cohn(c);
    CHECK_MESSAGE(sc.stable == (rho < 1.0),
                  "trial " << trial << " max root " << rho);
    if (sc.stable) CHECK(sc.margin > 0.0);
    double lo = min_root_abs(c);
    if (std::abs(lo - 1.0) > 1e-6) {
      CHECK(roots_outside(c).stable == (lo > 1.0));
    }
  }
  CHECK(checked >= 40);
}

TEST_CASE("slice sweeps and verdicts on the fixture factors") {
  StabilityReport st = analyze_stability(fixtures::stable_factor(), 128);
  CHECK(st.verdict == StabilityVerdict::stable_bidisk);
  CHECK(st.margin > 0.1);
  CHECK(st.min_modulus > 0.5);

  StabilityReport os = analyze_stability(fixtures::one_sided_factor(), 128);
  CHECK(os.verdict == StabilityVerdict::one_sided_z);
  CHECK(os.margin > 1e-3);

  // (z - 0.5 w): still nonzero on |z| = 1, |w| <= 1 (the w-root sits at 2z).
  StabilityReport as = analyze_stability(fixtures::anti_stable_factor(), 128);
  CHECK(as.verdict == StabilityVerdict::one_sided_z);

  StabilityReport sp = analyze_stability(fixtures::splitting_factor(), 128);
  CHECK(sp.verdict == StabilityVerdict::one_sided_z);

  // w - 0.5 z: the mirror image, one-sided in the other variable.
  LaurentPoly mirror;
  mirror.set_coeff(0, 1, 1.0);
  mirror.set_coeff(1, 0, -0.5);
  CHECK(analyze_stability(mirror, 128).verdict ==
        StabilityVerdict::one_sided_w);

  // (w - 0.6 z)(z w - 0.3): every w-root inside on |z| = 1, while both
  // one-sided sweeps fail.
  LaurentPoly a1, a2;
  a1.set_coeff(0, 1, 1.0);
  a1.set_coeff(1, 0, -0.6);
  a2.set_coeff(1, 1, 1.0);
  a2.set_coeff(0, 0, -0.3);
  StabilityReport anti = analyze_stability(a1 * a2, 128);
  CHECK(anti.verdict == StabilityVerdict::anti_stable_z);

  // z - w vanishes on the torus diagonal.
  LaurentPoly diag;
  diag.set_coeff(1, 0, 1.0);
  diag.set_coeff(0, 1, -1.0);
  StabilityReport un = analyze_stability(diag, 128);
  CHECK(un.verdict == StabilityVerdict::unstable);
  CHECK(un.min_modulus < 0.1);

  // A root almost on the circle triggers the inconclusive guard.
  LaurentPoly close;
  close.set_coeff(1, 0, 1.0);
  close.set_coeff(0, 1, -(1.0 - 1e-12));
  CHECK(analyze_stability(close, 64).verdict ==
        StabilityVerdict::inconclusive);

  LaurentPoly zero;
  CHECK_THROWS_AS(analyze_stability(zero, 64), InvalidInput);
  CHECK_THROWS_AS(analyze_stability(diag, 4), InvalidInput);
}

TEST_CASE("certification helpers report margins") {
  double margin = 0.0;
  CHECK(one_sided_stable_z(fixtures::one_sided_factor(), 128, 1e-8, &margin));
  CHECK(margin > 1e-3);
  CHECK(stable_on_bidisk(fixtures::stable_factor(), 128, 1e-8, &margin));
  CHECK(margin > 0.1);
  CHECK_FALSE(stable_on_bidisk(fixtures::one_sided_factor(), 128, 1e-8,
                               &margin));
  LaurentPoly diag;
  diag.set_coeff(1, 0, 1.0);
  diag.set_coeff(0, 1, -1.0);
  CHECK_FALSE(one_sided_stable_z(diag, 128, 1e-8, &margin));
}
