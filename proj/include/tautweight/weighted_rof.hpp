#pragma once

#include "tautweight/certificate.hpp"
#include "tautweight/taut_string.hpp"

#include <iosfwd>
#include <vector>

namespace tw {

// Minimizer of 1/2 int (u - f)^2 phi + alpha TV_rho(u) on (0,1), u constant per cell.
struct RofSolution {
  Grid r_grid;         // r_grid[0] == 0 when the head cell (0, a) was prepended
  Eigen::VectorXd u;   // per cell
  Eigen::VectorXd U;   // per knot, U(x) = -int_0^x (f - u) phi
  Eigen::VectorXd xi;  // per knot, U / (alpha rho)
  double alpha = 0;
  double energy = 0;
  double dual_value = 0;
  double head_residual = 0;  // |U(a)|, the mass that pinning U(a) = 0 would discard
  bool has_head = false;
  TubeProblem tube;
  TautString taut;

  double gap() const { return energy - dual_value; }
  // u at the knots, taken from the cell to the right (last knot: cell to the left).
  Eigen::VectorXd u_at_knots() const;
};

struct RofOptions {
  bool head_cell = true;
};

RofSolution denoise(const Data& f, const WeightPair& w, const Grid& grid, const RofOptions& opt = {});
RofSolution denoise(const SampledFunction& f, const WeightPair& w, const RofOptions& opt = {});

// Primitives at the knots: Phi, int f phi, int f^2 phi. A knot at r = 0 is
// treated as a prepended head knot.
struct KnotPrimitives {
  Eigen::VectorXd t, F, F2;
};
KnotPrimitives knot_primitives(const Data& f, const Weight& phi, const Grid& r_grid, bool with_f2 = true);

// Energy of a cell-wise candidate on r_grid.
double rof_energy(const Eigen::VectorXd& u, const Data& f, const WeightPair& w, const Grid& r_grid);

// jump_tol < 0 selects 1e-6 (max u - min u).
CertificateReport optimality_residuals(const RofSolution& sol, const Data& f, const WeightPair& w,
                                       double jump_tol = -1, double tol = 1e-6);

enum class Behavior { minus, flat, plus };
const char* to_string(Behavior b);

struct SwitchSegment {
  double r_lo = 0, r_hi = 0;
  Behavior behavior = Behavior::flat;
  Eigen::Index first_cell = 0, last_cell = 0;
  double mismatch = 0;
  bool pass = true;
};

std::vector<SwitchSegment> switching_decomposition(const RofSolution& sol, const Data& f, const WeightPair& w,
                                                   double jump_tol = -1, double seg_tol = 1e-3);

void write_rof_csv(std::ostream& os, const RofSolution& sol, const Data& f);

}  // namespace tw
