// Timing comparison of the production moment kernel (parallel partial
// transform with compensated summation) against the serial brute-force
// reference on the same grid, plus their max disagreement.
//
// Usage: bench_quadrature [grid] [K] [L]

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "bicircle/moments.hpp"
#include "bicircle/parallel.hpp"

namespace {

int next_pow2(int v) {
  int p = 1;
  while (p < v) p *= 2;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  int grid = argc > 1 ? std::atoi(argv[1]) : 256;
  int K = argc > 2 ? std::atoi(argv[2]) : 8;
  int L = argc > 3 ? std::atoi(argv[3]) : 8;
  if (grid <= 0 || K < 0 || L < 0) {
    std::cerr << "usage: bench_quadrature [grid] [K] [L]\n";
    return 2;
  }
  grid = next_pow2(std::max({grid, 2 * (std::max(K, L) + 1), 32}));

  bicircle::LaurentPoly p;
  p.add_term(0, 0, 1.0);
  p.add_term(1, 0, -0.4);
  p.add_term(0, 1, -0.25);
  p.add_term(1, 1, 0.1);
  bicircle::WeightSpec w = bicircle::WeightSpec::trig_poly(p.herm_square());

  using clock = std::chrono::steady_clock;
  bicircle::QuadratureConfig cfg{grid, grid, 0.0};
  auto t0 = clock::now();
  bicircle::MomentTable fast = bicircle::compute_moments(w, K, L, cfg);
  auto t1 = clock::now();
  bicircle::MomentTable slow =
      bicircle::compute_moments_reference(p.herm_square(), K, L, grid);
  auto t2 = clock::now();

  auto ms = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  std::cout << "grid " << fast.grid_size() << "x" << fast.grid_size()
            << ", orders (" << K << ", " << L << "), threads "
            << bicircle::thread_count() << "\n"
            << "production kernel: " << ms(t0, t1) << " ms\n"
            << "serial reference:  " << ms(t1, t2) << " ms\n"
            << "max moment difference: " << fast.diff_max(slow) << "\n";
  return 0;
}
