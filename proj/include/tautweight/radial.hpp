#pragma once

#include "tautweight/certificate.hpp"
#include "tautweight/weighted_rof.hpp"

#include <string>

namespace tw {

// Cubic for the breakpoint: c^3 + 3c/(2 alpha - 1) + 2.
double cubic_residual(double alpha, double c);
double solve_cubic_c(double alpha);

// Closed-form minimizer for d = 3, f = 1/r, alpha in [1/4, 1/2):
// u = (1 - 2 alpha)/r on (0, c), (1 - 2 alpha)/c on (c, 1).
struct ExplicitSolution {
  double alpha = 0.25;
  double c = 0;

  double k() const { return 1 - 2 * alpha; }
  double flat_value() const { return k() / c; }
  double f(double r) const { return 1 / r; }
  double u(double r) const;
  double v(double r) const { return (f(r) - u(r)) / alpha; }
  double U(double r) const;  // -int_0^r (f - u) r^2 dr
  double z(double r) const;
  double dz(double r) const;
  double div_z(double r) const;  // piecewise divergence formula

  // int_{r0}^{r1} g(r) r^2 dr for g = u, v.
  double mass_u(double r0, double r1) const;
  double mass_v(double r0, double r1) const;
};

ExplicitSolution explicit_minimizer(double alpha);
// No validation; for constructing perturbed candidates.
ExplicitSolution explicit_candidate(double alpha, double c);

// Graded radial grid r_i = (i/n)^q, i = 1..n. The cell (0, n^-q) is left to
// the head knot of denoise.
Grid radial_grid(int n, double q = 6.0);

// Cell averages of u (weight r^2), closed-form U and xi on grid, with the
// head cell (0, grid[0]) prepended.
RofSolution sample_explicit(const ExplicitSolution& sol, const Grid& grid);

// L^2_phi distance between a cell-wise solution and the explicit one.
double l2_phi_error(const RofSolution& sol, const ExplicitSolution& ex);

CertificateReport dual_field_z(const ExplicitSolution& sol, const Grid& grid);

enum class Verdict { bounded, unbounded, indeterminate };
const char* to_string(Verdict v);

struct BoundednessVerdict {
  Verdict verdict = Verdict::indeterminate;
  std::string reason;
  double slope = 0;  // growth exponent estimate (classify_general)
};

BoundednessVerdict classify_power(double beta, int d);
BoundednessVerdict classify_general(const SampledFunction& f, int d, double margin = 0.05);

struct SwitchingIntegrals {
  double I = 0, J = 0, ratio = 0;
  bool I_divergent = false, J_divergent = false;
};

// Both sides of the switching inequality for f = r^-beta, in closed form.
SwitchingIntegrals switching_inequality(double beta, int d, double alpha, double nu);

}  // namespace tw
