#pragma once

#include "tautweight/weights.hpp"

#include <random>

namespace tw::testing {

// Random tube on n knots: random cell widths, a random-walk centre line and
// random half-widths; the pinned ends lie inside the end portals.
inline TubeProblem random_tube(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u01(0, 1);
  std::normal_distribution<double> step(0, 1);
  Eigen::VectorXd t(n), lo(n), hi(n);
  t[0] = 0;
  for (int i = 1; i < n; ++i) t[i] = t[i - 1] + 0.05 + u01(rng);
  double c = 0;
  for (int i = 0; i < n; ++i) {
    c += step(rng);
    const double w = 0.05 + 2 * u01(rng);
    lo[i] = c - w;
    hi[i] = c + w;
  }
  const double left = lo[0] + u01(rng) * (hi[0] - lo[0]);
  const double right = lo[n - 1] + u01(rng) * (hi[n - 1] - lo[n - 1]);
  return TubeProblem(Grid(t), lo, hi, left, right);
}

}  // namespace tw::testing
