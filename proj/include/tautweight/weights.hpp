#pragma once

#include "tautweight/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tw {

// A positive weight on (0,1): unit, r^(d-1), or tabulated.
class Weight {
 public:
  enum class Kind { unit, power, tabulated };

  static Weight unit();
  static Weight power(int d);
  static Weight tabulated(SampledFunction table);

  Kind kind() const { return kind_; }
  int d() const { return d_; }
  const SampledFunction& table() const { return table_; }
  bool closed_form() const { return kind_ != Kind::tabulated; }
  // phi(r) = r^(m-1); m = 1 for unit, d for power.
  int exponent() const { return kind_ == Kind::power ? d_ : 1; }

  // Tabulated weights are linearly interpolated and linearly extrapolated
  // towards 0, clamped at 0.
  double operator()(double r) const;
  // Closed form, or a one-sided difference of the table.
  double derivative(double r) const;

  std::string describe() const;

 private:
  Kind kind_ = Kind::unit;
  int d_ = 1;
  SampledFunction table_;
};

struct WeightPair {
  Weight phi;
  Weight rho;
  double alpha = 1.0;

  WeightPair() = default;
  WeightPair(Weight phi_, Weight rho_, double alpha_);
};

WeightPair unit_weights(double alpha);
WeightPair radial_weights(int d, double alpha);

// Data f on (0,1) with exact weighted moments where available.
class Data {
 public:
  // Polynomial sum_k c[k] r^k on [lo, hi).
  struct Piece {
    double lo, hi;
    std::vector<double> c;
  };

  static Data power_law(double beta);
  static Data step(double left = 1.0, double right = 0.0, double jump = 0.5);
  static Data constant(double value);
  static Data hat();
  static Data piecewise(std::vector<Piece> pieces);
  static Data tabulated(SampledFunction table);

  double operator()(double r) const;

  // int_0^s f(r)^p r^(m-1) dr, or nullopt for tabulated data.
  // Throws DataError when the integral diverges at 0.
  std::optional<double> moment(double s, int p, int m) const;

  bool tabulated() const { return kind_ == Kind::table; }
  std::optional<double> beta() const;
  // Interior piece boundaries of piecewise data.
  std::vector<double> breakpoints() const;
  const SampledFunction& table() const { return table_; }
  std::string describe() const;

 private:
  enum class Kind { power, pieces, table };
  Kind kind_ = Kind::pieces;
  double beta_ = 0;
  std::vector<Piece> pieces_;
  SampledFunction table_;
  std::string name_;
};

// int_0^{r_i} f^p phi at every knot. Exact when both data and weight have
// closed forms; otherwise trapezoid with a linearly extrapolated head.
Eigen::VectorXd weighted_primitive(const Data& f, const Weight& phi, const Grid& grid, int p = 1);
Eigen::VectorXd weight_primitive(const Weight& phi, const Grid& grid);

SampledFunction antiderivative(const Data& f, const Weight& phi, const Grid& grid);
SampledFunction antiderivative(const SampledFunction& f, const Weight& phi);

struct TransformMap {
  Grid s_grid;
  Eigen::VectorXd t;  // Phi at the knots of s_grid
  Weight phi;

  double forward(double s) const;
  double inverse(double t) const;
};

TransformMap build_transform(const Weight& phi, const Grid& grid);

struct TubeProblem {
  Grid t_grid;
  Eigen::VectorXd lower, upper;
  double left_value = 0, right_value = 0;

  TubeProblem() = default;
  TubeProblem(Grid t, Eigen::VectorXd lo, Eigen::VectorXd hi, double left, double right);
};

// Tube (F - alpha rho, F + alpha rho) at the transformed knots, pinned to F at both ends.
TubeProblem build_tube(const SampledFunction& F, const WeightPair& w, const TransformMap& tm);

void write_tube_csv(std::ostream& os, const TubeProblem& p);

}  // namespace tw
