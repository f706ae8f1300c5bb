#include "bicircle/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bicircle {

LaurentPoly LaurentPoly::constant(cplx v) { return monomial(0, 0, v); }

LaurentPoly LaurentPoly::monomial(int k, int l, cplx v) {
  LaurentPoly p;
  p.set_coeff(k, l, v);
  return p;
}

cplx LaurentPoly::coeff(int k, int l) const {
  auto it = c_.find({k, l});
  return it == c_.end() ? cplx(0.0) : it->second;
}

void LaurentPoly::set_coeff(int k, int l, cplx v) {
  if (v == cplx(0.0)) {
    c_.erase({k, l});
  } else {
    c_[{k, l}] = v;
  }
}

void LaurentPoly::add_term(int k, int l, cplx v) {
  set_coeff(k, l, coeff(k, l) + v);
}

namespace {
template <class Sel>
int support_extreme(const LaurentPoly::TermMap& c, Sel sel, bool want_max) {
  if (c.empty()) return 0;
  int best = sel(c.begin()->first);
  for (const auto& [key, val] : c) {
    (void)val;
    int v = sel(key);
    if (want_max ? v > best : v < best) best = v;
  }
  return best;
}
}  // namespace

int LaurentPoly::k_min() const {
  return support_extreme(c_, [](auto& k) { return k.first; }, false);
}
int LaurentPoly::k_max() const {
  return support_extreme(c_, [](auto& k) { return k.first; }, true);
}
int LaurentPoly::l_min() const {
  return support_extreme(c_, [](auto& k) { return k.second; }, false);
}
int LaurentPoly::l_max() const {
  return support_extreme(c_, [](auto& k) { return k.second; }, true);
}

double LaurentPoly::max_abs() const {
  double m = 0.0;
  for (const auto& [key, val] : c_) {
    (void)key;
    m = std::max(m, std::abs(val));
  }
  return m;
}

LaurentPoly LaurentPoly::trimmed(double rel_tol) const {
  double thr = rel_tol * max_abs();
  LaurentPoly out;
  for (const auto& [key, val] : c_) {
    if (std::abs(val) > thr) out.c_[key] = val;
  }
  return out;
}

cplx LaurentPoly::eval(cplx z, cplx w) const {
  cplx acc = 0.0;
  for (const auto& [key, val] : c_) {
    acc += val * std::pow(z, key.first) * std::pow(w, key.second);
  }
  return acc;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly out = *this;
  for (const auto& [key, val] : o.c_) out.add_term(key.first, key.second, val);
  return out;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  LaurentPoly out = *this;
  for (const auto& [key, val] : o.c_) out.add_term(key.first, key.second, -val);
  return out;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly out;
  for (const auto& [ka, va] : c_) {
    for (const auto& [kb, vb] : o.c_) {
      out.add_term(ka.first + kb.first, ka.second + kb.second, va * vb);
    }
  }
  return out;
}

LaurentPoly LaurentPoly::scaled(cplx s) const {
  LaurentPoly out;
  if (s == cplx(0.0)) return out;
  for (const auto& [key, val] : c_) out.c_[key] = val * s;
  return out;
}

LaurentPoly LaurentPoly::shifted(int dk, int dl) const {
  LaurentPoly out;
  for (const auto& [key, val] : c_) {
    out.c_[{key.first + dk, key.second + dl}] = val;
  }
  return out;
}

LaurentPoly LaurentPoly::conj_reflect() const {
  LaurentPoly out;
  for (const auto& [key, val] : c_) {
    out.c_[{-key.first, -key.second}] = std::conj(val);
  }
  return out;
}

LaurentPoly LaurentPoly::herm_square() const { return *this * conj_reflect(); }

LaurentPoly LaurentPoly::reversed(int n, int m) const {
  LaurentPoly out;
  for (const auto& [key, val] : c_) {
    out.c_[{n - key.first, m - key.second}] = std::conj(val);
  }
  return out;
}

LaurentPoly LaurentPoly::reversed_in_w(int m) const {
  LaurentPoly out;
  for (const auto& [key, val] : c_) {
    out.c_[{-key.first, m - key.second}] = std::conj(val);
  }
  return out;
}

LaurentPoly LaurentPoly::conj_flip_w() const {
  LaurentPoly out;
  for (const auto& [key, val] : c_) {
    out.c_[{key.first, -key.second}] = std::conj(val);
  }
  return out;
}

LaurentPoly LaurentPoly::z_reflected(int n) const {
  LaurentPoly out;
  for (const auto& [key, val] : c_) {
    out.c_[{n - key.first, key.second}] = val;
  }
  return out;
}

LaurentPoly LaurentPoly::vars_swapped() const {
  LaurentPoly out;
  for (const auto& [key, val] : c_) {
    out.c_[{key.second, key.first}] = val;
  }
  return out;
}

bool LaurentPoly::is_hermitian(double rel_tol) const {
  double m = max_abs();
  if (m == 0.0) return true;
  return diff_max(conj_reflect()) <= rel_tol * m;
}

double LaurentPoly::diff_max(const LaurentPoly& o) const {
  double d = 0.0;
  for (const auto& [key, val] : c_) {
    d = std::max(d, std::abs(val - o.coeff(key.first, key.second)));
  }
  for (const auto& [key, val] : o.c_) {
    if (c_.find(key) == c_.end()) d = std::max(d, std::abs(val));
  }
  return d;
}

std::vector<cplx> LaurentPoly::w_slice(double theta) const {
  if (c_.empty()) return {};
  int lo = l_min(), hi = l_max();
  std::vector<cplx> out(static_cast<std::size_t>(hi - lo + 1), cplx(0.0));
  for (const auto& [key, val] : c_) {
    cplx zk = std::polar(1.0, theta * key.first);
    out[static_cast<std::size_t>(key.second - lo)] += val * zk;
  }
  return out;
}

std::vector<cplx> LaurentPoly::dense() const {
  int klo = k_min(), khi = k_max(), llo = l_min(), lhi = l_max();
  std::vector<cplx> out(
      static_cast<std::size_t>((khi - klo + 1) * (lhi - llo + 1)), cplx(0.0));
  for (const auto& [key, val] : c_) {
    out[static_cast<std::size_t>((key.first - klo) * (lhi - llo + 1) +
                                 (key.second - llo))] = val;
  }
  return out;
}

LaurentPoly LaurentPoly::from_dense(int k_min, int k_max, int l_min, int l_max,
                                    const std::vector<cplx>& coeffs) {
  if (k_max < k_min || l_max < l_min) {
    throw InvalidInput("polynomial support box is empty");
  }
  std::size_t expect = static_cast<std::size_t>(k_max - k_min + 1) *
                       static_cast<std::size_t>(l_max - l_min + 1);
  if (coeffs.size() != expect) {
    throw InvalidInput("coefficient count does not match the support box");
  }
  LaurentPoly p;
  std::size_t idx = 0;
  for (int k = k_min; k <= k_max; ++k) {
    for (int l = l_min; l <= l_max; ++l) {
      if (coeffs[idx] != cplx(0.0)) p.c_[{k, l}] = coeffs[idx];
      ++idx;
    }
  }
  return p;
}

std::pair<int, int> descending_monomial(int n, int m, Ordering ord, int t) {
  if (n < 0 || m < 0 || t < 0 || t >= (n + 1) * (m + 1)) {
    throw InvalidInput("monomial index outside the level block");
  }
  if (ord == Ordering::lex) {
    return {n - t / (m + 1), m - t % (m + 1)};
  }
  return {n - t % (n + 1), m - t / (n + 1)};
}

double phase_align_max_diff(const LaurentPoly& p, const LaurentPoly& ref) {
  cplx overlap = 0.0;
  for (const auto& [key, val] : ref.terms()) {
    overlap += val * std::conj(p.coeff(key.first, key.second));
  }
  cplx phase = 1.0;
  if (std::abs(overlap) > 1e-300) phase = overlap / std::abs(overlap);
  double d = 0.0;
  for (const auto& [key, val] : p.terms()) {
    d = std::max(d,
                 std::abs(phase * val - ref.coeff(key.first, key.second)));
  }
  for (const auto& [key, val] : ref.terms()) {
    if (p.terms().find(key) == p.terms().end())
      d = std::max(d, std::abs(val));
  }
  return d;
}

}  // namespace bicircle
