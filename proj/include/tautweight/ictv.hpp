#pragma once

#include "tautweight/certificate.hpp"
#include "tautweight/grid.hpp"

#include <iosfwd>
#include <vector>

namespace tw {

// 1/2 sum h (u - f)^2 + alpha sum |D(u - g)| + alpha gamma / h sum |D2 g| on a
// uniform grid of cell midpoints.
struct IctvProblem {
  SampledFunction f;
  double alpha = 0.1;
  double gamma = 1.0;

  IctvProblem() = default;
  IctvProblem(SampledFunction f_, double alpha_, double gamma_);
  double h() const;
};

struct IctvOptions {
  double gap_tol = 1e-6;
  int max_iter = 200000;
  double rho_tv = 1.0;   // ADMM penalty for a = D(u - g)
  double rho_tv2 = 1.0;  // ADMM penalty for b = D2 g / h
  int check_every = 10;
};

struct IctvSolution {
  SampledFunction u, g;  // g normalized to zero mean
  double primal_energy = 0, dual_value = 0, gap = 0;  // gap relative to the primal energy
  int iterations = 0;
  bool certified = false;
  std::vector<double> energy_history;  // primal energy at every gap check
  double gap_tol = 0;
};

IctvSolution denoise_ictv(const IctvProblem& p, const IctvOptions& opt = {});

double ictv_primal(const Eigen::VectorXd& u, const Eigen::VectorXd& g, const IctvProblem& p);
// Dual value of the feasible point obtained by removing the affine part of
// v = f - u and scaling into both boxes.
double ictv_dual(const Eigen::VectorXd& u, const IctvProblem& p);

// Dual feasibility of v = f - u for both constraints, and the duality gap split
// into the TV alignment, the TV2 alignment and the fidelity mismatch.
CertificateReport ictv_optimality(const IctvSolution& sol, const IctvProblem& p, double tol = -1);

struct IctvBounds {
  double sup_u_minus_g = 0, sup_g = 0, sup_u = 0;
};
IctvBounds boundedness_report(const IctvSolution& sol);

// Data on N uniform cells of (0, 1), sampled at the midpoints.
SampledFunction ictv_step(int n);
// Cell averages of |x - 1/2|^-exponent.
SampledFunction ictv_spike(int n, double exponent = 0.4);
// Ramp x plus the hat 1 - |4x - 2| on (1/4, 3/4).
SampledFunction ictv_ramp_hat(int n);
SampledFunction ictv_hat(int n);

// 1D TV denoising argmin 1/2 sum h (w - y)^2 + alpha sum |D w| by the taut string.
Eigen::VectorXd tv_prox(const Eigen::VectorXd& y, double h, double alpha);

// gamma -> inf limit: g affine, u = s x + tv_prox(f - s x), s optimized.
struct AffineTvLimit {
  Eigen::VectorXd u;
  double slope = 0, energy = 0;
};
AffineTvLimit affine_tv_limit(const IctvProblem& p);

void write_ictv_csv(std::ostream& os, const IctvSolution& sol, const IctvProblem& p);

}  // namespace tw
