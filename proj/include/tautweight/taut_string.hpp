#pragma once

#include "tautweight/weights.hpp"

#include <iosfwd>
#include <vector>

namespace tw {

enum class Contact { lower, upper, free };

const char* to_string(Contact c);

struct TautString {
  Grid t_grid;
  Eigen::VectorXd values;  // U-hat at the knots
  Eigen::VectorXd slopes;  // per cell
  std::vector<Contact> contact;
};

// Minimizer of sum (dU)^2/dt over lower <= U <= upper with pinned ends.
// Funnel sweep over the knot portals, linear in the number of knots.
TautString solve_tube(const TubeProblem& p);

struct KktReport {
  double max_kink_violation = 0;
  double max_feasibility_violation = 0;
  int n_segments = 0;
  bool pass = false;
};

KktReport kkt_certificate(const TautString& s, const TubeProblem& p, double kink_tol = 1e-7,
                          double feas_tol = 1e-9);

// Per-cell slopes on the cell midpoints.
SampledFunction derivative_signal(const TautString& s);

double string_energy(const Eigen::VectorXd& values, const Grid& t_grid);

// Contact labels for arbitrary knot values; the tolerance scales with the tube width.
std::vector<Contact> classify_contacts(const Eigen::VectorXd& values, const TubeProblem& p);

void write_taut_csv(std::ostream& os, const TautString& s, const TubeProblem& p);

}  // namespace tw
