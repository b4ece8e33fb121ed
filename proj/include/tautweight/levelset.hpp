#pragma once

#include "tautweight/radial.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace tw {

double unit_ball_volume(int d);
// d omega_d^(1/d): sharp isoperimetric constant.
double isoperimetric_constant(int d);

// Radial function on (0, 1]: samples for level-set scans plus optional
// closed forms. Below the first sample the function is extended by its first value.
struct RadialField {
  int d = 3;
  Eigen::VectorXd r, values;
  std::function<double(double)> value;             // exact evaluator
  std::function<double(double, double)> integral;  // int_{r0}^{r1} g r^(d-1) dr
  std::vector<double> breaks;                      // kinks of the exact evaluator
  // Cell-wise constant fields: values[j] lives on (edges[j], edges[j+1]) and
  // level-set boundaries snap to the edges.
  Eigen::VectorXd edges;

  double integrate(double r0, double r1) const;
  // int |g|^p r^(d-1) dr over [max(r0, r.front()), r1].
  double moment(double r0, double r1, double p) const;
  double sampled_sup() const { return values.maxCoeff(); }
};

RadialField sampled_field(const SampledFunction& g, int d);
RadialField cell_field(const Eigen::VectorXd& edges, const Eigen::VectorXd& cell_values, int d);
RadialField solution_field(const RofSolution& sol, int d);
// Data with its phi-moments; closed form when available.
RadialField data_field(const Data& f, const Grid& grid, int d);
RadialField explicit_u_field(const ExplicitSolution& ex, const Grid& grid);
RadialField explicit_f_field(const ExplicitSolution& ex, const Grid& grid);
RadialField explicit_v_field(const ExplicitSolution& ex, const Grid& grid);

struct RadialLevelSet {
  double s = 0;
  int d = 3;
  std::vector<std::pair<double, double>> intervals;

  bool empty() const { return intervals.empty(); }
  double measure() const;
};

RadialLevelSet level_set(const RadialField& u, double s);

enum class PerimeterMode { whole_space, relative };
double perimeter(const RadialLevelSet& ls, PerimeterMode mode);

// |Per(E^s) - sign(s) int_{E^s} (f - u)/alpha|
double perimeter_identity_residual(const RadialField& u, const RadialField& f, double alpha, double s,
                                   PerimeterMode mode);

struct IsoperimetricReport {
  double theta_d = 0, per = 0, measure = 0, ratio = 0, ld_norm_v_on_E = 0;
  // (int_E |v|^d)^(1/d) < theta_d: a nonempty level set would contradict the
  // perimeter identity.
  bool small_mass = false;
};

IsoperimetricReport isoperimetric_report(const RadialField& v, const RadialLevelSet& ls);

struct MarkovBound {
  double bound = 0, sampled_sup = 0;
  bool respects = true;
};

MarkovBound markov_sup_bound(const RadialField& u, double p, double c_density, double r0);

struct LayerCake {
  double lhs = 0, rhs = 0, rel_error = 0;
};

// int (u+)^(d/(d-1)) against int (d/(d-1)) s^(1/(d-1)) |E^s| ds.
LayerCake layer_cake(const RadialField& u);

// Quantiles of the sampled values plus the given thresholds.
std::vector<double> auto_levels(const RadialField& u, int count, const std::vector<double>& extra = {});

}  // namespace tw
