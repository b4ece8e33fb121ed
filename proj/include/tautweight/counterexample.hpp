#pragma once

#include "tautweight/certificate.hpp"
#include "tautweight/grid.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace tw {

// u = sum_n 4^-n S_n on (0, 2) x (0, 1), S_n(x) = S(2^n x - (2^(n+1) - 2)).
// Everything is constant in x2, so all quantities reduce to (0, 2).
enum class ProfileKind { hat, mollified_step };
const char* to_string(ProfileKind k);
ProfileKind parse_profile(const std::string& s);

struct OscillatoryProfile {
  ProfileKind kind = ProfileKind::hat;
  int n_max = 0;
  Grid grid;  // uniform on [0, 2], dyadic support endpoints are knots

  double S(double t) const;
  double dS(double t) const;
  double s_l1_derivative() const;  // int_0^1 |S'|
  double s_l2_norm() const;        // (int_0^1 S^2)^(1/2)
  double s_second_variation() const;  // |S''|((0,1)), kinks included
  // Samples of S_n at the knots.
  Eigen::VectorXd block(int n) const;
};

// Grid width 2^-(n_max) / cells_per_finest; fewer than 8 cells per finest
// support is rejected.
OscillatoryProfile make_profile(ProfileKind kind, int n_max, int cells_per_finest = 8);

// Total variation and L2 norm of the piecewise-linear interpolant.
double pl_total_variation(const Eigen::VectorXd& v);
double pl_l2_norm(const Eigen::VectorXd& v, double h);

struct OscillatoryU {
  SampledFunction u;
  double tv = 0;           // from the samples
  double tv_expected = 0;  // sum 4^-n |S'|_1
};
OscillatoryU build_u(const OscillatoryProfile& p);

struct DirectionStep {
  int n = 0;
  double t_n = 0;
  SampledFunction v_n;
  double v_norm = 0;
  double quotient = 0;  // (TV(u + t v) - TV(u)) / t
  double expected = 0;  // -2^(n/2) |S'|_1 / |S|_2
  double cancellation_residual = 0;  // |TV(u + t v) - TV(u) + t TV(v)| / TV(u)
};
DirectionStep direction_step(const OscillatoryProfile& p, int n);

// The piecewise g on (0, 1): 8t | 1 | 4 - 8t | -1 | 8t - 8.
double witness_g(double t);

// Certificate that g (default witness_g), transported to the blocks n < n_cut,
// is a subgradient witness for u - w with w = sum_{n >= n_cut} 4^-n u_n.
CertificateReport dual_certificate_g(const OscillatoryProfile& p, int n_cut = 1,
                                     const std::function<double(double)>& g = {});

struct W21Series {
  std::vector<double> partial;  // sum_{n <= N} 4^-n 2^n |S''|
  double limit = 0;
  double max_term_ratio = 0;
};
W21Series w21_partial_sums(const OscillatoryProfile& p);

void write_counterexample_csv(std::ostream& os, const OscillatoryU& u);

}  // namespace tw
